//! Canonical labelling by individualization and refinement.
//!
//! The search tree is the usual one: refine the ordered partition to an
//! equitable one, then branch on every vertex of a target cell. Leaves are
//! ordered by `(node invariants along the path, relabelled adjacency rows)`
//! and the canonical labelling is the greatest leaf. Three prunings apply:
//!
//! * a node whose invariant sequence is below the best path is dropped, unless
//!   it still agrees with the first path (those nodes feed automorphisms);
//! * children in the same orbit of the stored automorphisms that fix the
//!   current path pointwise are explored once;
//! * when a leaf reproduces the first or best leaf, the automorphism is stored
//!   and the search returns to the deepest common ancestor.
//!
//! The stored automorphisms generate the full automorphism group.

use std::cmp::Ordering;

use crate::graph::{Graph, VertexSet};
use crate::graph6;

/// Canonical graph6 encoding of a graph. Equal iff the graphs are isomorphic.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CanonicalForm(String);

impl CanonicalForm {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl std::fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// Result of a canonical labelling search.
#[derive(Clone, Debug)]
pub struct Labeling {
    /// `lab[i]` is the vertex placed at canonical position `i`.
    pub lab: Vec<usize>,
    /// Adjacency rows of the canonically relabelled graph.
    pub rows: Vec<u64>,
    /// Generators of the automorphism group, as vertex maps.
    pub generators: Vec<Vec<u8>>,
}

impl Labeling {
    /// Orbit representative (smallest member) for every vertex.
    pub fn orbits(&self) -> Vec<usize> {
        let n = self.lab.len();
        let mut uf = UnionFind::new(n);
        for g in &self.generators {
            for (v, &w) in g.iter().enumerate() {
                uf.union(v, w as usize);
            }
        }
        (0..n).map(|v| uf.find(v)).collect()
    }

    /// Position of every vertex in the canonical order.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.lab.len()];
        for (i, &v) in self.lab.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }

    pub fn canonical_graph(&self) -> Graph {
        Graph::from_rows_unchecked(&self.rows)
    }

    pub fn form(&self) -> CanonicalForm {
        CanonicalForm(graph6::encode_rows(&self.rows))
    }

    pub fn has_trivial_group(&self) -> bool {
        self.generators.is_empty()
    }
}

pub fn canonical_labeling(g: &Graph) -> Labeling {
    let rows = g.rows();
    let cells = if rows.is_empty() { Vec::new() } else { vec![VertexSet::full(rows.len()).0] };
    label_rows(&rows, cells)
}

/// Canonical labelling respecting an ordered colouring of the vertices.
///
/// `cells` must partition the vertex set; colour classes are never mixed and
/// keep their order in the result.
pub fn canonical_labeling_coloured(g: &Graph, cells: &[VertexSet]) -> Labeling {
    let cover = cells.iter().fold(VertexSet::EMPTY, |a, &c| {
        assert!(!a.intersects(c), "colour classes overlap");
        a | c
    });
    assert_eq!(cover, g.vertices(), "colour classes must partition the vertex set");
    let cells = cells.iter().filter(|c| !c.is_empty()).map(|c| c.0).collect();
    label_rows(&g.rows(), cells)
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    canonical_labeling(g).form()
}

pub fn are_isomorphic(g: &Graph, h: &Graph) -> bool {
    if g.order() != h.order() || g.edge_count() != h.edge_count() {
        return false;
    }
    let mut dg: Vec<usize> = (0..g.order()).map(|v| g.degree(v)).collect();
    let mut dh: Vec<usize> = (0..h.order()).map(|v| h.degree(v)).collect();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return false;
    }
    canonical_labeling(g).rows == canonical_labeling(h).rows
}

pub(crate) fn label_rows(rows: &[u64], cells: Vec<u64>) -> Labeling {
    let n = rows.len();
    if n == 0 {
        return Labeling { lab: Vec::new(), rows: Vec::new(), generators: Vec::new() };
    }
    let mut search = Search::new(rows);
    let mut cells = cells;
    let queue = cells.clone();
    let seed = mix(0x5eed, cells.len() as u64);
    let inv = refine(rows, &mut cells, queue, seed);
    let mut path = Vec::with_capacity(n);
    let mut invs = vec![inv];
    search.explore(&cells, &mut path, &mut invs);
    let best = search.best.expect("search visits at least one leaf");
    Labeling {
        lab: best.lab.iter().map(|&v| v as usize).collect(),
        rows: best.cert,
        generators: search.autos,
    }
}

#[inline]
fn mix(h: u64, x: u64) -> u64 {
    // splitmix64 finaliser over the combined word
    let mut z = (h ^ x.wrapping_mul(0x9e37_79b9_7f4a_7c15)).wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Refines `cells` to the coarsest equitable partition below it, starting
/// from the given splitter queue. Returns a hash of the splitting trace.
fn refine(rows: &[u64], cells: &mut Vec<u64>, mut queue: Vec<u64>, mut trace: u64) -> u64 {
    let n = rows.len();
    let mut buckets = [0u64; 65];
    let mut qi = 0;
    while qi < queue.len() && cells.len() < n {
        let w = queue[qi];
        qi += 1;
        let mut i = 0;
        while i < cells.len() {
            let c = cells[i];
            if c & (c - 1) == 0 {
                i += 1;
                continue;
            }
            let mut used: u128 = 0;
            let mut bits = c;
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let k = (rows[v] & w).count_ones() as usize;
                buckets[k] |= 1u64 << v;
                used |= 1u128 << k;
            }
            if used & (used - 1) == 0 {
                buckets[used.trailing_zeros() as usize] = 0;
                i += 1;
                continue;
            }
            let mut frags = Vec::with_capacity(used.count_ones() as usize);
            while used != 0 {
                let k = used.trailing_zeros() as usize;
                used &= used - 1;
                let part = buckets[k];
                buckets[k] = 0;
                trace = mix(trace, (i as u64) << 48 | (k as u64) << 32 | part.count_ones() as u64);
                frags.push(part);
            }
            let m = frags.len();
            queue.extend_from_slice(&frags);
            cells.splice(i..=i, frags);
            i += m;
        }
    }
    mix(trace, cells.len() as u64)
}

#[derive(Clone)]
struct Leaf {
    path: Vec<u8>,
    invs: Vec<u64>,
    lab: Vec<u8>,
    cert: Vec<u64>,
}

struct Search<'a> {
    rows: &'a [u64],
    first: Option<Leaf>,
    best: Option<Leaf>,
    autos: Vec<Vec<u8>>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.0[v] != v {
            self.0[v] = self.0[self.0[v]];
            v = self.0[v];
        }
        v
    }

    /// Keeps the smaller root.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        match ra.cmp(&rb) {
            Ordering::Less => self.0[rb] = ra,
            Ordering::Greater => self.0[ra] = rb,
            Ordering::Equal => {}
        }
    }
}

/// Compares a node's invariant sequence with a leaf's: the overlap decides,
/// and a sequence extending the other counts as greater.
fn compare_prefix(invs: &[u64], other: &[u64]) -> Ordering {
    let k = invs.len().min(other.len());
    match invs[..k].cmp(&other[..k]) {
        Ordering::Equal if invs.len() > other.len() => Ordering::Greater,
        ord => ord,
    }
}

impl<'a> Search<'a> {
    fn new(rows: &'a [u64]) -> Self {
        Search { rows, first: None, best: None, autos: Vec::new() }
    }

    fn leaf_cert(&self, cells: &[u64]) -> (Vec<u8>, Vec<u64>) {
        let n = self.rows.len();
        let lab: Vec<u8> = cells.iter().map(|c| c.trailing_zeros() as u8).collect();
        let mut pos = [0u8; 64];
        for (i, &v) in lab.iter().enumerate() {
            pos[v as usize] = i as u8;
        }
        let mut cert = vec![0u64; n];
        for (i, &v) in lab.iter().enumerate() {
            let mut bits = self.rows[v as usize];
            let mut out = 0u64;
            while bits != 0 {
                let u = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                out |= 1u64 << pos[u];
            }
            cert[i] = out;
        }
        (lab, cert)
    }

    /// Records the automorphism carrying the current leaf onto `target` and
    /// returns the level to resume at, if the path maps onto the target path.
    fn record_automorphism(&mut self, lab: &[u8], path: &[u8], target_is_first: bool) -> Option<usize> {
        let target = if target_is_first { self.first.as_ref() } else { self.best.as_ref() }?;
        let n = lab.len();
        let mut gamma = vec![0u8; n];
        for i in 0..n {
            gamma[lab[i] as usize] = target.lab[i];
        }
        let common = path.iter().zip(&target.path).take_while(|(a, b)| a == b).count();
        let maps_path = common < path.len()
            && common < target.path.len()
            && (0..=common).all(|i| gamma[path[i] as usize] == target.path[i]);
        if gamma.iter().enumerate().any(|(v, &w)| v != w as usize) {
            self.autos.push(gamma);
        }
        maps_path.then_some(common)
    }

    /// Returns `Some(level)` to unwind to the ancestor at that level.
    fn explore(&mut self, cells: &[u64], path: &mut Vec<u8>, invs: &mut Vec<u64>) -> Option<usize> {
        let n = self.rows.len();
        let level = path.len();
        let eq_first = self.first.as_ref().is_none_or(|f| compare_prefix(invs, &f.invs) == Ordering::Equal);
        let vs_best = self.best.as_ref().map_or(Ordering::Greater, |b| compare_prefix(invs, &b.invs));
        if vs_best == Ordering::Less && !eq_first {
            return None;
        }

        if cells.len() == n {
            let (lab, cert) = self.leaf_cert(cells);
            let Some(first) = &self.first else {
                let leaf = Leaf { path: path.clone(), invs: invs.clone(), lab, cert };
                self.best = Some(leaf.clone());
                self.first = Some(leaf);
                return None;
            };
            if eq_first && first.invs.len() == invs.len() && cert == first.cert {
                return self.record_automorphism(&lab, path, true);
            }
            let best = self.best.as_ref().unwrap();
            let same_best = vs_best == Ordering::Equal && best.invs.len() == invs.len();
            if same_best && cert == best.cert {
                return self.record_automorphism(&lab, path, false);
            }
            if vs_best == Ordering::Greater || (same_best && cert > best.cert) {
                self.best = Some(Leaf { path: path.clone(), invs: invs.clone(), lab, cert });
            }
            return None;
        }

        // first smallest non-singleton cell
        let (target, _) = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.count_ones() > 1)
            .min_by_key(|&(i, c)| (c.count_ones(), i))
            .unwrap();
        let cell = cells[target];
        let mut tried = 0u64;
        let mut orbit_cache: Option<(usize, Vec<usize>)> = None;
        let mut bits = cell;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if tried != 0 && !self.autos.is_empty() {
                let stale = orbit_cache.as_ref().is_none_or(|(k, _)| *k != self.autos.len());
                if stale {
                    orbit_cache = Some((self.autos.len(), self.stabiliser_orbits(path)));
                }
                let roots = &orbit_cache.as_ref().unwrap().1;
                let mut t = tried;
                let mut seen = false;
                while t != 0 {
                    let w = t.trailing_zeros() as usize;
                    t &= t - 1;
                    if roots[w] == roots[v] {
                        seen = true;
                        break;
                    }
                }
                if seen {
                    continue;
                }
            }
            tried |= 1u64 << v;

            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..target]);
            child.push(1u64 << v);
            child.push(cell & !(1u64 << v));
            child.extend_from_slice(&cells[target + 1..]);
            let inv = refine(self.rows, &mut child, vec![1u64 << v], mix(level as u64, target as u64));
            path.push(v as u8);
            invs.push(inv);
            let jump = self.explore(&child, path, invs);
            path.pop();
            invs.pop();
            if let Some(j) = jump {
                if j < level {
                    return Some(j);
                }
            }
        }
        None
    }

    /// Orbit roots of the group generated by stored automorphisms that fix
    /// every vertex of `path`.
    fn stabiliser_orbits(&self, path: &[u8]) -> Vec<usize> {
        let n = self.rows.len();
        let mut uf = UnionFind::new(n);
        for g in &self.autos {
            if path.iter().all(|&p| g[p as usize] == p) {
                for (v, &w) in g.iter().enumerate() {
                    uf.union(v, w as usize);
                }
            }
        }
        (0..n).map(|v| uf.find(v)).collect()
    }
}
