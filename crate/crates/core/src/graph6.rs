//! graph6 text encoding.
//!
//! A line is the size prefix `N(n)` followed by the upper triangle of the
//! adjacency matrix in column order `x(0,1) x(0,2) x(1,2) x(0,3) ...`, packed
//! six bits per byte (most significant first) and offset by 63. Decoding is
//! strict: padding bits must be zero.

use std::io::BufRead;

use thiserror::Error;

use crate::graph::{Graph, GraphError, MAX_VERTICES};

/// Largest order the encoder emits (short size prefix only).
pub const MAX_ENCODE_ORDER: usize = 62;

const HEADER: &str = ">>graph6<<";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("empty graph6 string")]
    Empty,
    #[error("byte {byte:#04x} at offset {offset} is outside the printable range 63..=126")]
    BadByte { byte: u8, offset: usize },
    #[error("truncated graph6 string: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("trailing data: expected {expected} bytes, found {found}")]
    TrailingData { expected: usize, found: usize },
    #[error("nonzero padding bits in final byte")]
    NonzeroPadding,
    #[error("graph order {0} is beyond the supported maximum of 64")]
    TooLarge(usize),
    #[error("cannot encode a graph on {0} vertices (short form supports at most 62)")]
    EncodeTooLarge(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn payload_len(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(6)
}

/// Parses `N(n)`, returning the order and the number of prefix bytes.
fn parse_order(bytes: &[u8]) -> Result<(usize, usize), Graph6Error> {
    let first = *bytes.first().ok_or(Graph6Error::Empty)?;
    if first != 126 {
        return Ok(((first - 63) as usize, 1));
    }
    // 126 followed by either 18 bits in 3 bytes, or 126 and 36 bits in 6 bytes
    let (start, width) = if bytes.get(1) == Some(&126) { (2, 6) } else { (1, 3) };
    if bytes.len() < start + width {
        return Err(Graph6Error::Truncated { expected: start + width, found: bytes.len() });
    }
    let n = bytes[start..start + width]
        .iter()
        .fold(0u64, |acc, &b| acc << 6 | (b - 63) as u64);
    Ok((n as usize, start + width))
}

/// Decodes one graph6 line (without its newline).
pub fn decode(line: &str) -> Result<Graph, Graph6Error> {
    let bytes = line.as_bytes();
    if bytes.is_empty() {
        return Err(Graph6Error::Empty);
    }
    if let Some(offset) = bytes.iter().position(|b| !(63..=126).contains(b)) {
        return Err(Graph6Error::BadByte { byte: bytes[offset], offset });
    }
    let (n, prefix) = parse_order(bytes)?;
    if n > MAX_VERTICES {
        return Err(Graph6Error::TooLarge(n));
    }
    let expected = prefix + payload_len(n);
    if bytes.len() < expected {
        return Err(Graph6Error::Truncated { expected, found: bytes.len() });
    }
    if bytes.len() > expected {
        return Err(Graph6Error::TrailingData { expected, found: bytes.len() });
    }
    let payload = &bytes[prefix..];
    let mut rows = vec![0u64; n];
    let mut bit = 0usize;
    for j in 1..n {
        for i in 0..j {
            let byte = payload[bit / 6] - 63;
            if byte >> (5 - bit % 6) & 1 == 1 {
                rows[i] |= 1 << j;
                rows[j] |= 1 << i;
            }
            bit += 1;
        }
    }
    if !bit.is_multiple_of(6) {
        let last = payload[bit / 6] - 63;
        if last & ((1u8 << (6 - bit % 6)) - 1) != 0 {
            return Err(Graph6Error::NonzeroPadding);
        }
    }
    Ok(Graph::from_rows(&rows)?)
}

/// Encodes `g` in short-form graph6.
pub fn encode(g: &Graph) -> Result<String, Graph6Error> {
    let n = g.order();
    if n > MAX_ENCODE_ORDER {
        return Err(Graph6Error::EncodeTooLarge(n));
    }
    Ok(encode_rows(&g.rows()))
}

/// Encodes adjacency rows, using the long size prefix above 62 vertices.
pub(crate) fn encode_rows(rows: &[u64]) -> String {
    let n = rows.len();
    let mut out = Vec::with_capacity(4 + payload_len(n));
    if n <= MAX_ENCODE_ORDER {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        out.extend([12, 6, 0].map(|s| ((n >> s) & 63) as u8 + 63));
    }
    let mut acc = 0u8;
    let mut bit = 0usize;
    for j in 1..n {
        for row in &rows[..j] {
            acc = acc << 1 | (row >> j & 1) as u8;
            bit += 1;
            if bit.is_multiple_of(6) {
                out.push(acc + 63);
                acc = 0;
            }
        }
    }
    if !bit.is_multiple_of(6) {
        out.push((acc << (6 - bit % 6)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

/// What to do with a line that fails to decode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OnError {
    /// Yield the error and stop.
    #[default]
    FailFast,
    /// Yield the error, then keep reading.
    Skip,
}

#[derive(Debug, Error)]
pub enum StreamError {
    #[error("line {line}: {source}")]
    Decode { line: usize, source: Graph6Error },
    #[error("read error at line {line}: {source}")]
    Io { line: usize, source: std::io::Error },
}

/// Lazily decodes a graph6 stream, numbering graphs from 0.
///
/// Blank lines and a `>>graph6<<` header are skipped. Line numbers in errors
/// are 1-based physical lines.
pub struct Graph6Reader<R> {
    lines: std::io::Lines<R>,
    line_no: usize,
    index: usize,
    policy: OnError,
    halted: bool,
}

impl<R: BufRead> Graph6Reader<R> {
    pub fn new(source: R, policy: OnError) -> Self {
        Graph6Reader { lines: source.lines(), line_no: 0, index: 0, policy, halted: false }
    }
}

impl<R: BufRead> Iterator for Graph6Reader<R> {
    type Item = Result<(usize, Graph), StreamError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.halted {
            return None;
        }
        loop {
            let line = match self.lines.next()? {
                Ok(l) => l,
                Err(source) => {
                    self.halted = true;
                    return Some(Err(StreamError::Io { line: self.line_no + 1, source }));
                }
            };
            self.line_no += 1;
            let mut text = line.trim_end_matches(['\r', '\n', ' ', '\t']);
            if let Some(rest) = text.strip_prefix(HEADER) {
                text = rest;
            }
            if text.trim().is_empty() {
                continue;
            }
            return Some(match decode(text.trim()) {
                Ok(g) => {
                    let i = self.index;
                    self.index += 1;
                    Ok((i, g))
                }
                Err(source) => {
                    if self.policy == OnError::FailFast {
                        self.halted = true;
                    }
                    Err(StreamError::Decode { line: self.line_no, source })
                }
            });
        }
    }
}

/// Convenience wrapper over [`Graph6Reader`].
pub fn read_stream<R: BufRead>(source: R, policy: OnError) -> Graph6Reader<R> {
    Graph6Reader::new(source, policy)
}
