//! Batch evaluation of predicate chains over generated or streamed graphs,
//! and the count tables built from them.
//!
//! A [`FilterSpec`] is an ordered chain. Each graph is tested against the
//! chain in order until the first failure, so the reported count for step
//! `i` is the number of graphs passing steps `0..=i`. Invariants are computed
//! lazily per graph and shared between predicates.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::canon::canonical_form;
use crate::constructions::{
    bowtie, circulant, enumerate_circulants, mycielski_family, CirculantSpec, ConstructionError,
};
use crate::eternal::{can_defend_capped, EternalError, DEFAULT_CONFIG_CAP};
use crate::generate::{Constraint, GenerateError, GenerateOptions, Generator};
use crate::graph::Graph;
use crate::graph6::{self, StreamError};
use crate::invariants::{
    clique_cover_number, domination_number, independence_number, is_edge_critical_with,
    is_vertex_critical_with, maximum_matching,
};

/// Graphs handed to the worker pool at once when reading a stream.
pub const CHUNK: usize = 1024;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Stream(#[from] StreamError),
    #[error("unknown predicate {0:?}")]
    UnknownPredicate(String),
    #[error("unknown table {0:?}")]
    UnknownTable(String),
    #[error("could not build worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Predicate {
    Connected,
    TriangleFree,
    MaximalTriangleFree,
    Cubic,
    TwoConnected,
    AlphaLtTheta,
    /// α = ⌊n/2⌋.
    AlphaFloorHalf,
    /// n odd, α = (n−1)/2 and θ = (n+1)/2.
    HalfAlpha,
    VertexCritical,
    EdgeCritical,
    /// Vertex- and edge-critical.
    Critical,
    GammaEqAlpha,
    GammaEqTheta,
    GammaEqGammaInf,
    GammaInfLtTheta,
}

impl Predicate {
    pub const ALL: [Predicate; 15] = [
        Predicate::Connected,
        Predicate::TriangleFree,
        Predicate::MaximalTriangleFree,
        Predicate::Cubic,
        Predicate::TwoConnected,
        Predicate::AlphaLtTheta,
        Predicate::AlphaFloorHalf,
        Predicate::HalfAlpha,
        Predicate::VertexCritical,
        Predicate::EdgeCritical,
        Predicate::Critical,
        Predicate::GammaEqAlpha,
        Predicate::GammaEqTheta,
        Predicate::GammaEqGammaInf,
        Predicate::GammaInfLtTheta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Predicate::Connected => "connected",
            Predicate::TriangleFree => "triangle_free",
            Predicate::MaximalTriangleFree => "maximal_triangle_free",
            Predicate::Cubic => "cubic",
            Predicate::TwoConnected => "two_connected",
            Predicate::AlphaLtTheta => "alpha_lt_theta",
            Predicate::AlphaFloorHalf => "alpha_floor_half",
            Predicate::HalfAlpha => "half_alpha",
            Predicate::VertexCritical => "vertex_critical",
            Predicate::EdgeCritical => "edge_critical",
            Predicate::Critical => "critical",
            Predicate::GammaEqAlpha => "gamma_eq_alpha",
            Predicate::GammaEqTheta => "gamma_eq_theta",
            Predicate::GammaEqGammaInf => "gamma_eq_gamma_inf",
            Predicate::GammaInfLtTheta => "gamma_inf_lt_theta",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Predicate::ALL.into_iter().find(|p| p.name() == s)
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Ordered predicate chain.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FilterSpec {
    pub predicates: Vec<Predicate>,
}

impl FilterSpec {
    pub fn new(predicates: Vec<Predicate>) -> Self {
        FilterSpec { predicates }
    }

    /// Parses a comma-separated chain such as `connected,alpha_lt_theta`.
    pub fn parse(s: &str) -> Result<Self, PipelineError> {
        let predicates = s
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| Predicate::from_name(p).ok_or_else(|| PipelineError::UnknownPredicate(p.to_string())))
            .collect::<Result<_, _>>()?;
        Ok(FilterSpec { predicates })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    /// Skip the eternal solver when α = θ (then γ∞ = θ).
    pub shortcut: bool,
    /// Cap on configurations per solver call.
    pub config_cap: usize,
    /// Keep the graph6 strings of graphs passing the whole chain.
    pub keep_matches: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { shortcut: true, config_cap: DEFAULT_CONFIG_CAP, keep_matches: true }
    }
}

/// Per-graph invariants computed on first use.
pub struct LazyRecord<'g> {
    g: &'g Graph,
    opts: RunOptions,
    alpha: Option<usize>,
    theta: Option<usize>,
    gamma: Option<usize>,
    vertex_critical: Option<bool>,
    edge_critical: Option<bool>,
    triangle_free: Option<bool>,
}

impl<'g> LazyRecord<'g> {
    pub fn new(g: &'g Graph, opts: RunOptions) -> Self {
        LazyRecord {
            g,
            opts,
            alpha: None,
            theta: None,
            gamma: None,
            vertex_critical: None,
            edge_critical: None,
            triangle_free: None,
        }
    }

    fn triangle_free(&mut self) -> bool {
        let g = self.g;
        *self.triangle_free.get_or_insert_with(|| g.is_triangle_free())
    }

    pub fn alpha(&mut self) -> usize {
        let g = self.g;
        *self.alpha.get_or_insert_with(|| independence_number(g))
    }

    /// θ, through a maximum matching when the graph is triangle-free.
    pub fn theta(&mut self) -> usize {
        if let Some(t) = self.theta {
            return t;
        }
        let t = if self.triangle_free() {
            self.g.order() - maximum_matching(self.g)
        } else {
            clique_cover_number(self.g)
        };
        self.theta = Some(t);
        t
    }

    pub fn gamma(&mut self) -> usize {
        let g = self.g;
        *self.gamma.get_or_insert_with(|| domination_number(g))
    }

    fn vertex_critical(&mut self) -> bool {
        if let Some(v) = self.vertex_critical {
            return v;
        }
        let theta = self.theta();
        let v = is_vertex_critical_with(self.g, theta);
        self.vertex_critical = Some(v);
        v
    }

    fn edge_critical(&mut self) -> bool {
        if let Some(v) = self.edge_critical {
            return v;
        }
        let theta = self.theta();
        let v = is_edge_critical_with(self.g, theta);
        self.edge_critical = Some(v);
        v
    }

    /// γ∞ ≤ k?
    fn defends_with(&mut self, k: usize) -> Result<bool, EternalError> {
        if k == 0 {
            return Ok(self.g.order() == 0);
        }
        can_defend_capped(self.g, k, self.opts.config_cap)
    }

    pub fn gamma_inf_lt_theta(&mut self) -> Result<bool, EternalError> {
        let theta = self.theta();
        if self.opts.shortcut && self.alpha() == theta {
            return Ok(false);
        }
        self.defends_with(theta.saturating_sub(1)).map(|d| d && theta > 0)
    }

    pub fn gamma_eq_gamma_inf(&mut self) -> Result<bool, EternalError> {
        // γ ≤ α ≤ γ∞, so equality needs γ = α and γ guards to suffice
        let gamma = self.gamma();
        if gamma != self.alpha() {
            return Ok(false);
        }
        if self.opts.shortcut && self.alpha() == self.theta() {
            return Ok(true);
        }
        self.defends_with(gamma)
    }

    pub fn test(&mut self, p: Predicate) -> Result<bool, EternalError> {
        let g = self.g;
        let n = g.order();
        Ok(match p {
            Predicate::Connected => g.is_connected(),
            Predicate::TriangleFree => self.triangle_free(),
            Predicate::MaximalTriangleFree => g.is_maximal_triangle_free(),
            Predicate::Cubic => g.is_cubic(),
            Predicate::TwoConnected => g.is_two_connected(),
            Predicate::AlphaLtTheta => self.alpha() < self.theta(),
            Predicate::AlphaFloorHalf => self.alpha() == n / 2,
            Predicate::HalfAlpha => n % 2 == 1 && self.alpha() == n / 2 && self.theta() == n / 2 + 1,
            Predicate::VertexCritical => self.vertex_critical(),
            Predicate::EdgeCritical => self.edge_critical(),
            Predicate::Critical => self.vertex_critical() && self.edge_critical(),
            Predicate::GammaEqAlpha => self.gamma() == self.alpha(),
            Predicate::GammaEqTheta => self.gamma() == self.theta(),
            Predicate::GammaEqGammaInf => self.gamma_eq_gamma_inf()?,
            Predicate::GammaInfLtTheta => self.gamma_inf_lt_theta()?,
        })
    }
}

/// Partial result for a batch of graphs.
#[derive(Debug, Clone, Default)]
struct Tally {
    total: u64,
    passed: Vec<u64>,
    matches: Vec<(String, String)>,
    incomplete: u64,
}

impl Tally {
    fn new(steps: usize) -> Self {
        Tally { passed: vec![0; steps], ..Default::default() }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.total += other.total;
        for (a, b) in self.passed.iter_mut().zip(&other.passed) {
            *a += b;
        }
        self.matches.extend(other.matches);
        self.incomplete += other.incomplete;
        self
    }
}

fn evaluate(g: &Graph, spec: &FilterSpec, opts: RunOptions) -> Tally {
    let mut t = Tally::new(spec.predicates.len());
    t.total = 1;
    let mut rec = LazyRecord::new(g, opts);
    for (i, &p) in spec.predicates.iter().enumerate() {
        match rec.test(p) {
            Ok(true) => t.passed[i] = 1,
            Ok(false) => return t,
            Err(_) => {
                t.incomplete = 1;
                return t;
            }
        }
    }
    if opts.keep_matches {
        let encoded = graph6::encode(g).unwrap_or_default();
        t.matches.push((canonical_form(g).into_string(), encoded));
    }
    t
}

/// Counts for one source run through one chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportRow {
    pub label: String,
    pub n: Option<usize>,
    pub total: u64,
    pub steps: Vec<(Predicate, u64)>,
    /// graph6 strings of full-chain matches, sorted by canonical form.
    pub matches: Vec<String>,
    pub elapsed: Duration,
    /// Graphs whose evaluation hit the configuration cap.
    pub incomplete: u64,
    pub decode_errors: u64,
}

impl ReportRow {
    fn from_tally(label: String, n: Option<usize>, spec: &FilterSpec, mut t: Tally, elapsed: Duration) -> Self {
        t.matches.sort();
        ReportRow {
            label,
            n,
            total: t.total,
            steps: spec.predicates.iter().copied().zip(t.passed).collect(),
            matches: t.matches.into_iter().map(|(_, s)| s).collect(),
            elapsed,
            incomplete: t.incomplete,
            decode_errors: 0,
        }
    }

    /// Graphs passing the whole chain.
    pub fn final_count(&self) -> u64 {
        self.steps.last().map_or(self.total, |&(_, c)| c)
    }

    pub fn authoritative(&self) -> bool {
        self.incomplete == 0
    }

    pub fn tsv_header(&self) -> String {
        let mut cols = vec!["source".to_string(), "n".into(), "total".into()];
        cols.extend(self.steps.iter().map(|(p, _)| p.name().to_string()));
        cols.push("seconds".into());
        cols.join("\t")
    }

    pub fn tsv_line(&self) -> String {
        let mut cols = vec![
            self.label.clone(),
            self.n.map_or("-".into(), |n| n.to_string()),
            self.total.to_string(),
        ];
        cols.extend(self.steps.iter().map(|(_, c)| c.to_string()));
        cols.push(format!("{:.3}", self.elapsed.as_secs_f64()));
        let mut line = cols.join("\t");
        if !self.authoritative() {
            line.push_str(&format!("\t# PARTIAL: {} graphs over budget", self.incomplete));
        }
        line
    }
}

/// Runs `f` on a pool of `workers` threads (all logical CPUs when `None`).
pub fn with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R, PipelineError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        builder = builder.num_threads(w.max(1));
    }
    let pool = builder.build().map_err(|e| PipelineError::Pool(e.to_string()))?;
    Ok(pool.install(f))
}

/// Filters the generated connected graphs of order `n`.
pub fn run_filter_generated(
    n: usize,
    constraint: Constraint,
    large: bool,
    spec: &FilterSpec,
    opts: RunOptions,
) -> Result<ReportRow, PipelineError> {
    let start = Instant::now();
    let gen = Generator::new(n, constraint, GenerateOptions { connected_only: true, large })?;
    let steps = spec.predicates.len();
    let tally = gen.map_reduce(|| Tally::new(steps), |g| evaluate(g, spec, opts), Tally::merge);
    let label = format!("gen:{}", constraint.name());
    Ok(ReportRow::from_tally(label, Some(n), spec, tally, start.elapsed()))
}

/// Filters a graph stream in chunks of [`CHUNK`]. Decode errors are counted
/// and skipped; a fail-fast reader ends the stream at the first one.
pub fn run_filter_stream<I>(source: I, label: &str, spec: &FilterSpec, opts: RunOptions) -> ReportRow
where
    I: IntoIterator<Item = Result<(usize, Graph), StreamError>>,
{
    let start = Instant::now();
    let steps = spec.predicates.len();
    let mut tally = Tally::new(steps);
    let mut decode_errors = 0;
    let mut chunk: Vec<Graph> = Vec::with_capacity(CHUNK);
    let mut orders = BTreeMap::new();
    let flush = |chunk: &mut Vec<Graph>, tally: Tally| -> Tally {
        let part = chunk
            .par_iter()
            .map(|g| evaluate(g, spec, opts))
            .reduce(|| Tally::new(steps), Tally::merge);
        chunk.clear();
        tally.merge(part)
    };
    for item in source {
        match item {
            Ok((_, g)) => {
                *orders.entry(g.order()).or_insert(0u64) += 1;
                chunk.push(g);
                if chunk.len() == CHUNK {
                    tally = flush(&mut chunk, tally);
                }
            }
            Err(_) => decode_errors += 1,
        }
    }
    tally = flush(&mut chunk, tally);
    let n = if orders.len() == 1 { orders.keys().next().copied() } else { None };
    let mut row = ReportRow::from_tally(label.to_string(), n, spec, tally, start.elapsed());
    row.decode_errors = decode_errors;
    row
}

/// Filters an in-memory list of graphs.
pub fn run_filter_graphs(graphs: &[Graph], label: &str, spec: &FilterSpec, opts: RunOptions) -> ReportRow {
    run_filter_stream(graphs.iter().cloned().enumerate().map(Ok), label, spec, opts)
}

/// Tables the pipeline can reproduce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableId {
    /// Critical graphs among all connected graphs.
    T1,
    /// Connected triangle-free graphs of odd order with α = ⌊n/2⌋.
    T2,
    /// Maximal triangle-free graphs of odd order with α = ⌊n/2⌋.
    T3,
    /// Circulants with γ∞ < θ.
    T4,
    /// Connected cubic graphs.
    T6,
    /// γ against α, γ∞ and θ on connected graphs.
    T7,
}

impl TableId {
    pub const ALL: [TableId; 6] = [TableId::T1, TableId::T2, TableId::T3, TableId::T4, TableId::T6, TableId::T7];

    pub fn parse(s: &str) -> Result<Self, PipelineError> {
        match s.to_ascii_uppercase().as_str() {
            "T1" => Ok(TableId::T1),
            "T2" => Ok(TableId::T2),
            "T3" => Ok(TableId::T3),
            "T4" => Ok(TableId::T4),
            "T6" => Ok(TableId::T6),
            "T7" => Ok(TableId::T7),
            _ => Err(PipelineError::UnknownTable(s.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TableId::T1 => "T1",
            TableId::T2 => "T2",
            TableId::T3 => "T3",
            TableId::T4 => "T4",
            TableId::T6 => "T6",
            TableId::T7 => "T7",
        }
    }

    /// Largest order computed by default, and with `large`.
    pub fn order_limit(self, large: bool) -> usize {
        match (self, large) {
            (TableId::T1, false) => 9,
            (TableId::T1, true) => 10,
            (TableId::T2, false) => 11,
            (TableId::T2, true) => 13,
            (TableId::T3, _) => 13,
            (TableId::T4, false) => 16,
            (TableId::T4, true) => 20,
            (TableId::T6, false) => 14,
            (TableId::T6, true) => 16,
            (TableId::T7, false) => 8,
            (TableId::T7, true) => 10,
        }
    }

    fn orders(self) -> Vec<usize> {
        match self {
            TableId::T1 => (5..=10).collect(),
            TableId::T2 => vec![5, 7, 9, 11, 13],
            TableId::T3 => vec![5, 7, 9, 11, 13, 15, 17],
            TableId::T4 => (3..=20).collect(),
            TableId::T6 => vec![4, 6, 8, 10, 12, 14, 16],
            TableId::T7 => (5..=11).collect(),
        }
    }

    fn chain(self) -> (Constraint, FilterSpec) {
        use Predicate::*;
        match self {
            TableId::T1 => (Constraint::All, FilterSpec::new(vec![AlphaLtTheta, VertexCritical, Critical, GammaInfLtTheta])),
            TableId::T2 => (Constraint::TriangleFree, FilterSpec::new(vec![AlphaFloorHalf, HalfAlpha, GammaInfLtTheta])),
            TableId::T3 => {
                (Constraint::MaximalTriangleFree, FilterSpec::new(vec![AlphaFloorHalf, HalfAlpha, GammaInfLtTheta]))
            }
            TableId::T4 => (Constraint::All, FilterSpec::new(vec![AlphaLtTheta, GammaInfLtTheta])),
            TableId::T6 => (Constraint::Cubic, FilterSpec::new(vec![AlphaLtTheta, GammaInfLtTheta])),
            TableId::T7 => (Constraint::All, FilterSpec::new(vec![GammaEqAlpha, GammaEqGammaInf, GammaEqTheta])),
        }
    }

    fn columns(self) -> Vec<&'static str> {
        match self {
            TableId::T1 => vec!["n", "total", "alpha<theta", "vertex_critical&alpha<theta", "critical&alpha<theta", "critical&gamma_inf<theta"],
            TableId::T2 | TableId::T3 => vec!["n", "total", "alpha=floor(n/2)", "&theta=ceil(n/2)", "&alpha=gamma_inf"],
            TableId::T4 => vec!["n", "circulants_with_gamma_inf<theta"],
            TableId::T6 => vec!["n", "total", "alpha<theta", "gamma_inf<theta"],
            TableId::T7 => vec!["n", "total", "gamma=alpha", "gamma=gamma_inf", "gamma=gamma_inf=theta"],
        }
    }
}

/// Published counts, `None` where the value is unknown.
fn known_counts(id: TableId, n: usize) -> Option<Vec<Option<u64>>> {
    let rows: &[(usize, &[Option<u64>])] = match id {
        TableId::T1 => &[
            (5, &[Some(21), Some(1), Some(1), Some(1), Some(0)]),
            (6, &[Some(112), Some(3), Some(0), Some(0), Some(0)]),
            (7, &[Some(853), Some(33), Some(8), Some(3), Some(0)]),
            (8, &[Some(11117), Some(498), Some(7), Some(4), Some(0)]),
            (9, &[Some(261080), Some(16539), Some(353), Some(38), Some(0)]),
            (10, &[Some(11716571), Some(975676), Some(5159), Some(290), Some(1)]),
        ],
        TableId::T2 => &[
            (5, &[Some(6), Some(1), Some(1), Some(0)]),
            (7, &[Some(59), Some(8), Some(8), Some(0)]),
            (9, &[Some(1380), Some(276), Some(276), Some(0)]),
            (11, &[Some(90842), Some(29660), Some(29660), Some(0)]),
            (13, &[Some(19425052), Some(9606337), Some(9606334), Some(0)]),
        ],
        TableId::T3 => &[
            (5, &[Some(3), Some(1), Some(1), Some(0)]),
            (7, &[Some(6), Some(1), Some(1), Some(0)]),
            (9, &[Some(16), Some(5), Some(5), Some(0)]),
            (11, &[Some(61), Some(23), Some(23), Some(0)]),
            (13, &[Some(392), Some(172), Some(172), Some(0)]),
            (15, &[Some(5036), Some(1837), Some(1837), Some(0)]),
            (17, &[Some(164796), Some(38606), Some(38606), None]),
        ],
        TableId::T6 => &[
            (4, &[Some(1), Some(0), Some(0)]),
            (6, &[Some(2), Some(0), Some(0)]),
            (8, &[Some(5), Some(2), Some(0)]),
            (10, &[Some(19), Some(9), Some(0)]),
            (12, &[Some(85), Some(46), Some(0)]),
            (14, &[Some(509), Some(320), Some(0)]),
            (16, &[Some(4060), Some(2888), Some(0)]),
        ],
        TableId::T7 => &[
            (5, &[Some(21), Some(6), Some(5), Some(5)]),
            (6, &[Some(112), Some(24), Some(22), Some(22)]),
            (7, &[Some(853), Some(88), Some(67), Some(67)]),
            (8, &[Some(11117), Some(524), Some(358), Some(358)]),
            (9, &[Some(261080), Some(4515), Some(2265), Some(2265)]),
            (10, &[Some(11716571), Some(73515), Some(23394), Some(23394)]),
            (11, &[Some(1006700565), Some(2324209), Some(396755), Some(396755)]),
        ],
        TableId::T4 => &[],
    };
    rows.iter().find(|(m, _)| *m == n).map(|(_, v)| v.to_vec())
}

/// Published circulant lists with γ∞ < θ; empty below 13.
pub fn known_circulants(n: usize) -> Option<Vec<Vec<usize>>> {
    let lists: &[&[usize]] = match n {
        3..=12 | 14 => &[],
        13 => &[&[1, 3, 4], &[1, 2, 3, 5]],
        15 => &[&[1, 3, 4]],
        16 => &[&[1, 2, 4, 5], &[1, 2, 3, 4, 6]],
        17 => &[&[1, 2, 4, 8], &[1, 2, 3, 5, 6], &[1, 2, 3, 5, 8]],
        18 => &[&[1, 3, 8], &[1, 2, 4, 5, 6], &[1, 2, 4, 5, 6, 9]],
        19 => &[&[1, 4, 6], &[1, 3, 5, 6], &[1, 2, 3, 4, 5, 7], &[1, 2, 3, 5, 7, 8]],
        20 => &[
            &[1, 5, 8],
            &[2, 5, 6],
            &[1, 6, 8, 9],
            &[1, 2, 4, 5, 6],
            &[1, 2, 4, 5, 7],
            &[1, 2, 5, 7, 8],
            &[1, 2, 3, 4, 5, 7, 8],
            &[1, 2, 3, 4, 6, 7, 10],
            &[1, 3, 4, 7, 8, 9, 10],
        ],
        _ => return None,
    };
    let mut v: Vec<Vec<usize>> = lists.iter().map(|l| l.to_vec()).collect();
    v.sort();
    Some(v)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowStatus {
    /// Every published cell agrees.
    Match,
    /// Some published cell disagrees.
    Mismatch,
    /// No published value to compare against.
    Unchecked,
    /// Not computed; the reason is recorded.
    Skipped(String),
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowStatus::Match => f.write_str("ok"),
            RowStatus::Mismatch => f.write_str("MISMATCH"),
            RowStatus::Unchecked => f.write_str("unchecked"),
            RowStatus::Skipped(why) => write!(f, "skipped ({why})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub n: usize,
    pub cells: Vec<String>,
    pub expected: Vec<String>,
    pub status: RowStatus,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableReport {
    pub id: TableId,
    pub columns: Vec<&'static str>,
    pub rows: Vec<TableRow>,
}

impl TableReport {
    pub fn has_mismatch(&self) -> bool {
        self.rows.iter().any(|r| r.status == RowStatus::Mismatch)
    }

    pub fn has_skipped(&self) -> bool {
        self.rows.iter().any(|r| matches!(r.status, RowStatus::Skipped(_)))
    }

    pub fn row(&self, n: usize) -> Option<&TableRow> {
        self.rows.iter().find(|r| r.n == n)
    }

    /// Count cells of row `n` as integers.
    pub fn counts(&self, n: usize) -> Option<Vec<u64>> {
        let row = self.row(n)?;
        if matches!(row.status, RowStatus::Skipped(_)) {
            return None;
        }
        row.cells.iter().map(|c| c.parse().ok()).collect()
    }

    /// TSV with a header, one line per row and a trailing status column.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# table {}\n", self.id.name()));
        let mut header: Vec<&str> = self.columns.clone();
        header.extend(["status", "seconds", "expected"]);
        out.push_str(&header.join("\t"));
        out.push('\n');
        for r in &self.rows {
            let mut cols = vec![r.n.to_string()];
            if r.cells.is_empty() {
                cols.extend(std::iter::repeat_n("-".to_string(), self.columns.len() - 1));
            } else {
                cols.extend(r.cells.iter().cloned());
            }
            cols.push(r.status.to_string());
            cols.push(format!("{:.3}", r.seconds));
            cols.push(r.expected.join(","));
            out.push_str(&cols.join("\t"));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct TableOptions {
    pub max_n: Option<usize>,
    pub large: bool,
}

fn compare(cells: &[String], expected: &[Option<u64>]) -> RowStatus {
    let mut any = false;
    for (c, e) in cells.iter().zip(expected) {
        if let Some(e) = e {
            any = true;
            if c.parse::<u64>().ok() != Some(*e) {
                return RowStatus::Mismatch;
            }
        }
    }
    if any {
        RowStatus::Match
    } else {
        RowStatus::Unchecked
    }
}

/// Circulant specs of order `n` whose graphs have γ∞ < θ, sorted by keys.
pub fn circulants_below_theta(n: usize, opts: RunOptions) -> Result<(Vec<CirculantSpec>, u64), PipelineError> {
    let specs = enumerate_circulants(n)?;
    let spec = FilterSpec::new(vec![Predicate::AlphaLtTheta, Predicate::GammaInfLtTheta]);
    let results: Vec<(Option<CirculantSpec>, bool)> = specs
        .into_par_iter()
        .map(|s| {
            let g = circulant(&s);
            let t = evaluate(&g, &spec, RunOptions { keep_matches: false, ..opts });
            let hit = t.passed.last().copied() == Some(1);
            (hit.then_some(s), t.incomplete > 0)
        })
        .collect();
    let incomplete = results.iter().filter(|(_, i)| *i).count() as u64;
    let mut hits: Vec<CirculantSpec> = results.into_iter().filter_map(|(s, _)| s).collect();
    hits.sort();
    Ok((hits, incomplete))
}

/// Recomputes the rows of a table up to `max_n` and compares them with the
/// published values. Rows beyond the budget are marked skipped.
pub fn reproduce_table(id: TableId, topts: TableOptions, ropts: RunOptions) -> Result<TableReport, PipelineError> {
    let limit = id.order_limit(topts.large);
    let max_n = topts.max_n.unwrap_or(limit);
    let mut rows = Vec::new();
    for n in id.orders().into_iter().filter(|&n| n <= max_n) {
        let start = Instant::now();
        if n > limit {
            let why = if topts.large || id == TableId::T3 || n > id.order_limit(true) {
                "beyond the supported generation budget".to_string()
            } else {
                "needs --large".to_string()
            };
            let expected = match id {
                TableId::T4 => known_circulants(n).unwrap_or_default().iter().map(|k| format!("{k:?}")).collect(),
                _ => known_counts(id, n)
                    .unwrap_or_default()
                    .iter()
                    .map(|c| c.map_or("?".into(), |v| v.to_string()))
                    .collect(),
            };
            rows.push(TableRow { n, cells: Vec::new(), expected, status: RowStatus::Skipped(why), seconds: 0.0 });
            continue;
        }
        if id == TableId::T4 {
            let (hits, incomplete) = circulants_below_theta(n, ropts)?;
            // published key lists need not be the smallest in their class
            let classes = |specs: Vec<CirculantSpec>| {
                let mut forms: Vec<String> = specs.iter().map(|s| canonical_form(&circulant(s)).into_string()).collect();
                forms.sort();
                forms
            };
            let got = classes(hits.clone());
            let known = known_circulants(n);
            let status = if incomplete > 0 {
                RowStatus::Skipped(format!("{incomplete} circulants over the configuration cap"))
            } else {
                match &known {
                    Some(k) if classes(k.iter().map(|keys| CirculantSpec::new(n, keys.clone()).expect("valid keys")).collect()) == got => {
                        RowStatus::Match
                    }
                    Some(_) => RowStatus::Mismatch,
                    None => RowStatus::Unchecked,
                }
            };
            rows.push(TableRow {
                n,
                cells: vec![hits.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")],
                expected: known.unwrap_or_default().iter().map(|k| format!("{k:?}")).collect(),
                status,
                seconds: start.elapsed().as_secs_f64(),
            });
            continue;
        }
        let (constraint, spec) = id.chain();
        let report = run_filter_generated(n, constraint, topts.large, &spec, RunOptions { keep_matches: false, ..ropts })?;
        let mut cells = vec![report.total.to_string()];
        cells.extend(report.steps.iter().map(|(_, c)| c.to_string()));
        let known = known_counts(id, n).unwrap_or_default();
        let status = if !report.authoritative() {
            RowStatus::Skipped(format!("{} graphs over the configuration cap", report.incomplete))
        } else {
            compare(&cells, &known)
        };
        rows.push(TableRow {
            n,
            cells,
            expected: known.iter().map(|c| c.map_or("?".into(), |v| v.to_string())).collect(),
            status,
            seconds: start.elapsed().as_secs_f64(),
        });
    }
    Ok(TableReport { id, columns: id.columns(), rows })
}

/// Appendix graph lists shipped with the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AppendixId {
    /// Critical graphs with α < θ.
    T8,
    /// Connected graphs with γ∞ < θ.
    T9,
    /// Triangle-free graphs with γ∞ < θ.
    T10,
    /// Maximal triangle-free graphs with γ∞ < θ.
    T11,
}

impl AppendixId {
    pub const ALL: [AppendixId; 4] = [AppendixId::T8, AppendixId::T9, AppendixId::T10, AppendixId::T11];

    pub fn parse(s: &str) -> Result<Self, PipelineError> {
        match s.to_ascii_uppercase().as_str() {
            "T8" => Ok(AppendixId::T8),
            "T9" => Ok(AppendixId::T9),
            "T10" => Ok(AppendixId::T10),
            "T11" => Ok(AppendixId::T11),
            _ => Err(PipelineError::UnknownTable(s.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AppendixId::T8 => "T8",
            AppendixId::T9 => "T9",
            AppendixId::T10 => "T10",
            AppendixId::T11 => "T11",
        }
    }

    /// The bundled graph6 list.
    pub fn fixture(self) -> &'static str {
        match self {
            AppendixId::T8 => include_str!("../data/t8_critical_alpha_lt_theta.g6"),
            AppendixId::T9 => include_str!("../data/t9_connected_gamma_inf_lt_theta.g6"),
            AppendixId::T10 => include_str!("../data/t10_triangle_free_gamma_inf_lt_theta.g6"),
            AppendixId::T11 => include_str!("../data/t11_maximal_triangle_free_gamma_inf_lt_theta.g6"),
        }
    }

    /// Property every listed graph must have.
    pub fn property(self) -> FilterSpec {
        use Predicate::*;
        FilterSpec::new(match self {
            AppendixId::T8 => vec![Critical, AlphaLtTheta],
            AppendixId::T9 => vec![Connected, GammaInfLtTheta],
            AppendixId::T10 => vec![TriangleFree, GammaInfLtTheta],
            AppendixId::T11 => vec![MaximalTriangleFree, GammaInfLtTheta],
        })
    }

    /// Generation class and chain whose matches must equal the list, for
    /// completeness checks.
    fn exhaustive_chain(self) -> (Constraint, FilterSpec) {
        use Predicate::*;
        match self {
            AppendixId::T8 => (Constraint::All, FilterSpec::new(vec![AlphaLtTheta, VertexCritical, Critical])),
            AppendixId::T9 => (Constraint::All, FilterSpec::new(vec![AlphaLtTheta, GammaInfLtTheta])),
            AppendixId::T10 => (Constraint::TriangleFree, FilterSpec::new(vec![AlphaLtTheta, GammaInfLtTheta])),
            AppendixId::T11 => (Constraint::MaximalTriangleFree, FilterSpec::new(vec![AlphaLtTheta, GammaInfLtTheta])),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryCheck {
    pub line: usize,
    pub graph6: String,
    pub n: usize,
    pub ok: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Completeness {
    /// The exhaustive match set equals the listed graphs.
    Exact { found: usize },
    /// They differ; canonical forms found but not listed and listed but not found.
    Differs { missing: Vec<String>, extra: Vec<String> },
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AppendixReport {
    pub id: AppendixId,
    pub entries: Vec<EntryCheck>,
    pub completeness: BTreeMap<usize, Completeness>,
}

impl AppendixReport {
    pub fn all_verified(&self) -> bool {
        !self.entries.is_empty() && self.entries.iter().all(|e| e.ok)
    }

    pub fn complete(&self) -> bool {
        !self.completeness.values().any(|c| matches!(c, Completeness::Differs { .. }))
    }

    pub fn first_failure(&self) -> Option<&EntryCheck> {
        self.entries.iter().find(|e| !e.ok)
    }

    pub fn count(&self, n: usize) -> usize {
        self.entries.iter().filter(|e| e.n == n).count()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct AppendixOptions {
    /// Also confirm completeness by exhaustive search for orders up to 10.
    pub exhaustive: bool,
    pub large: bool,
}

/// Orders for which completeness is checked.
pub const COMPLETENESS_MAX_ORDER: usize = 10;

/// Verifies every line of `text` against the list's defining property and,
/// if requested, that the list is complete for small orders.
pub fn check_appendix(id: AppendixId, text: &str, aopts: AppendixOptions, ropts: RunOptions) -> Result<AppendixReport, PipelineError> {
    let spec = id.property();
    let opts = RunOptions { keep_matches: false, ..ropts };
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let entries: Vec<EntryCheck> = lines
        .par_iter()
        .map(|&(line, s)| match graph6::decode(s) {
            Err(e) => EntryCheck { line, graph6: s.to_string(), n: 0, ok: false, detail: format!("decode error: {e}") },
            Ok(g) => {
                let t = evaluate(&g, &spec, opts);
                let failed = spec.predicates.iter().zip(&t.passed).find(|(_, &c)| c == 0).map(|(p, _)| *p);
                let (ok, detail) = match (t.incomplete, failed) {
                    (0, None) => (true, "ok".to_string()),
                    (0, Some(p)) => (false, format!("fails {p}")),
                    _ => (false, "over the configuration cap".to_string()),
                };
                EntryCheck { line, graph6: s.to_string(), n: g.order(), ok, detail }
            }
        })
        .collect();

    let mut completeness = BTreeMap::new();
    if aopts.exhaustive {
        // orders below the smallest listed one must come up empty too
        if let Some(hi) = entries.iter().map(|e| e.n).max() {
            let (constraint, chain) = id.exhaustive_chain();
            for n in 1..=hi.min(COMPLETENESS_MAX_ORDER) {
                let mut listed: Vec<String> = entries
                    .iter()
                    .filter(|e| e.n == n)
                    .filter_map(|e| graph6::decode(&e.graph6).ok())
                    .map(|g| canonical_form(&g).into_string())
                    .collect();
                listed.sort();
                let row = match run_filter_generated(n, constraint, aopts.large, &chain, RunOptions { keep_matches: true, ..ropts }) {
                    Ok(r) => r,
                    Err(PipelineError::Generate(GenerateError::BudgetExceeded { .. })) => {
                        completeness.insert(n, Completeness::Skipped("needs --large".into()));
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                if !row.authoritative() {
                    completeness.insert(n, Completeness::Skipped("over the configuration cap".into()));
                    continue;
                }
                let mut found: Vec<String> = row
                    .matches
                    .iter()
                    .filter_map(|s| graph6::decode(s).ok())
                    .map(|g| canonical_form(&g).into_string())
                    .collect();
                found.sort();
                let c = if found == listed {
                    Completeness::Exact { found: found.len() }
                } else {
                    Completeness::Differs {
                        missing: found.iter().filter(|f| !listed.contains(f)).cloned().collect(),
                        extra: listed.iter().filter(|l| !found.contains(l)).cloned().collect(),
                    }
                };
                completeness.insert(n, c);
            }
        }
    }
    Ok(AppendixReport { id, entries, completeness })
}

/// Graphs the `construct` command can build.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Construction {
    Circulant(CirculantSpec),
    Mycielski(usize),
    /// Bow tie product of a circulant with K2.
    BowtieK2(CirculantSpec),
}

pub fn construct(c: &Construction) -> Result<Graph, PipelineError> {
    Ok(match c {
        Construction::Circulant(s) => circulant(s),
        Construction::Mycielski(k) => mycielski_family(*k)?,
        Construction::BowtieK2(s) => bowtie(&circulant(s), &Graph::complete(2).expect("K2"))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_chain() {
        let s = FilterSpec::parse("connected, alpha_lt_theta,critical").unwrap();
        assert_eq!(s.predicates, vec![Predicate::Connected, Predicate::AlphaLtTheta, Predicate::Critical]);
        assert!(matches!(FilterSpec::parse("connected,bogus"), Err(PipelineError::UnknownPredicate(p)) if p == "bogus"));
        for p in Predicate::ALL {
            assert_eq!(Predicate::from_name(p.name()), Some(p));
        }
    }

    #[test]
    fn small_filters() {
        let spec = FilterSpec::parse("connected").unwrap();
        let r = run_filter_generated(5, Constraint::All, false, &spec, RunOptions::default()).unwrap();
        assert_eq!((r.total, r.final_count()), (21, 21));
        assert_eq!(r.matches.len(), 21);

        let spec = FilterSpec::parse("connected,critical,alpha_lt_theta").unwrap();
        let r = run_filter_generated(7, Constraint::All, false, &spec, RunOptions::default()).unwrap();
        assert_eq!(r.final_count(), 3);
        assert_eq!(r.matches.len(), 3);
    }

    #[test]
    fn stream_counts_decode_errors() {
        let src = "DUW\nD!W\n@\n";
        let spec = FilterSpec::parse("alpha_lt_theta").unwrap();
        let r = run_filter_stream(graph6::read_stream(src.as_bytes(), graph6::OnError::Skip), "stdin", &spec, RunOptions::default());
        assert_eq!((r.total, r.final_count(), r.decode_errors), (2, 1, 1));
        assert_eq!(r.n, None);
        assert_eq!(r.matches, vec!["DUW".to_string()]);
    }

    #[test]
    fn lazy_record_shortcut_agrees() {
        let c5 = Graph::cycle(5).unwrap();
        for shortcut in [true, false] {
            let opts = RunOptions { shortcut, ..Default::default() };
            let mut r = LazyRecord::new(&c5, opts);
            assert!(!r.gamma_inf_lt_theta().unwrap());
            assert!(!r.gamma_eq_gamma_inf().unwrap());
            assert_eq!((r.alpha(), r.theta(), r.gamma()), (2, 3, 2));
        }
    }

    #[test]
    fn over_cap_is_marked() {
        let g = graph6::decode("IEhbtj{ro").unwrap();
        let spec = FilterSpec::new(vec![Predicate::GammaInfLtTheta]);
        let r = run_filter_graphs(&[g], "x", &spec, RunOptions { config_cap: 3, ..Default::default() });
        assert_eq!(r.incomplete, 1);
        assert!(!r.authoritative());
        assert!(r.tsv_line().contains("PARTIAL"));
    }

    #[test]
    fn skipped_rows_are_not_fabricated() {
        let t = reproduce_table(TableId::T3, TableOptions { max_n: Some(17), large: false }, RunOptions::default()).unwrap();
        let r15 = t.row(15).unwrap();
        assert!(matches!(r15.status, RowStatus::Skipped(_)));
        assert!(r15.cells.is_empty());
        assert_eq!(t.counts(5), Some(vec![3, 1, 1, 0]));
        assert!(!t.has_mismatch());
        assert!(t.has_skipped());
    }

    #[test]
    fn constructs() {
        let g = construct(&Construction::Mycielski(4)).unwrap();
        assert_eq!((g.order(), g.edge_count()), (11, 20));
        let s = CirculantSpec::new(13, vec![1, 3, 4]).unwrap();
        assert_eq!(construct(&Construction::BowtieK2(s)).unwrap().order(), 26);
    }
}
