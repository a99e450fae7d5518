//! Isomorph-free generation of small graphs by canonical augmentation.
//!
//! Graphs on `m + 1` vertices are produced from the complete list of graphs on
//! `m` vertices in the same hereditary family, adding vertex `m` adjacent to a
//! subset `S` of the parent. A child is kept only when the new vertex lies in
//! the orbit of the child's canonical deletion vertex: among the vertices
//! maximising `(degree, sum of neighbour degrees)`, the one placed first by a
//! canonical labelling that colours those vertices apart. Children of a parent
//! with a nontrivial automorphism group are additionally deduplicated by
//! canonical form, since distinct subsets in one `Aut(parent)` orbit give the
//! same child.

use std::collections::HashSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::canon::label_rows;
use crate::graph::{Graph, VertexSet};
use crate::invariants::for_each_maximal_independent_set;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constraint {
    All,
    TriangleFree,
    MaximalTriangleFree,
    Cubic,
}

impl Constraint {
    pub fn name(self) -> &'static str {
        match self {
            Constraint::All => "all",
            Constraint::TriangleFree => "triangle_free",
            Constraint::MaximalTriangleFree => "maximal_triangle_free",
            Constraint::Cubic => "cubic",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "all" => Some(Constraint::All),
            "triangle_free" | "tf" => Some(Constraint::TriangleFree),
            "maximal_triangle_free" | "mtf" => Some(Constraint::MaximalTriangleFree),
            "cubic" => Some(Constraint::Cubic),
            _ => None,
        }
    }

    /// Does `g` satisfy the constraint?
    pub fn holds(self, g: &Graph) -> bool {
        match self {
            Constraint::All => true,
            Constraint::TriangleFree => g.is_triangle_free(),
            Constraint::MaximalTriangleFree => g.is_maximal_triangle_free(),
            Constraint::Cubic => g.is_cubic(),
        }
    }

    /// Largest order generated without `large`, and with it.
    pub fn order_limit(self, large: bool) -> usize {
        match (self, large) {
            (Constraint::All, false) => 9,
            (Constraint::All, true) => 10,
            (Constraint::TriangleFree, false) => 12,
            (Constraint::TriangleFree, true) => 13,
            (Constraint::MaximalTriangleFree, _) => 13,
            (Constraint::Cubic, false) => 14,
            (Constraint::Cubic, true) => 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("order {n} is beyond the {constraint} generation budget of {limit} vertices")]
    BudgetExceeded { n: usize, constraint: &'static str, limit: usize },
    #[error("order must be at least 1")]
    ZeroOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenerateOptions {
    /// Only emit connected graphs.
    pub connected_only: bool,
    /// Use the extended order budget.
    pub large: bool,
}

impl Default for GenerateOptions {
    fn default() -> Self {
        GenerateOptions { connected_only: true, large: false }
    }
}

/// All graphs of one order, as a flat array of adjacency rows.
#[derive(Clone, Debug)]
struct Level {
    order: usize,
    rows: Vec<u64>,
}

impl Level {
    fn len(&self) -> usize {
        // the order-0 level holds one empty graph
        self.rows.len().checked_div(self.order).unwrap_or(1)
    }

    fn get(&self, i: usize) -> &[u64] {
        &self.rows[i * self.order..(i + 1) * self.order]
    }
}

/// Generator of one order and constraint, holding every parent on `n - 1`
/// vertices. Children are produced per parent, so callers can stream the
/// output without materialising it.
pub struct Generator {
    n: usize,
    constraint: Constraint,
    connected_only: bool,
    parents: Level,
}

impl Generator {
    pub fn new(n: usize, constraint: Constraint, opts: GenerateOptions) -> Result<Self, GenerateError> {
        if n == 0 {
            return Err(GenerateError::ZeroOrder);
        }
        let limit = constraint.order_limit(opts.large);
        if n > limit {
            return Err(GenerateError::BudgetExceeded { n, constraint: constraint.name(), limit });
        }
        let mut level = Level { order: 0, rows: Vec::new() };
        if !(constraint == Constraint::Cubic && n % 2 == 1) {
            for m in 0..n - 1 {
                level = next_level(&level, n, constraint);
                debug_assert_eq!(level.order, m + 1);
            }
        } else {
            level = Level { order: n - 1, rows: Vec::new() };
        }
        Ok(Generator { n, constraint, connected_only: opts.connected_only, parents: level })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn constraint(&self) -> Constraint {
        self.constraint
    }

    pub fn parent_count(&self) -> usize {
        if self.constraint == Constraint::Cubic && self.n % 2 == 1 {
            0
        } else {
            self.parents.len()
        }
    }

    /// Output graphs grown from parent `i`, in subset order.
    pub fn children_of(&self, i: usize) -> Vec<Graph> {
        let parent = if self.parents.order == 0 { &[][..] } else { self.parents.get(i) };
        let mut out = Vec::new();
        extend(parent, self.n, self.constraint, Some(self.connected_only), &mut |rows| {
            out.push(Graph::from_rows_unchecked(rows))
        });
        out
    }

    /// Maps every output graph and reduces in generation order.
    pub fn map_reduce<T, M, R>(&self, identity: impl Fn() -> T + Sync + Send, map: M, reduce: R) -> T
    where
        T: Send,
        M: Fn(&Graph) -> T + Sync + Send,
        R: Fn(T, T) -> T + Sync + Send,
    {
        (0..self.parent_count())
            .into_par_iter()
            .map(|i| {
                self.children_of(i)
                    .iter()
                    .fold(identity(), |acc, g| reduce(acc, map(g)))
            })
            .reduce(&identity, &reduce)
    }

    /// Every output graph, in deterministic order.
    pub fn collect(&self) -> Vec<Graph> {
        let batches: Vec<Vec<Graph>> =
            (0..self.parent_count()).into_par_iter().map(|i| self.children_of(i)).collect();
        batches.into_iter().flatten().collect()
    }

    pub fn count(&self) -> usize {
        self.map_reduce(|| 0usize, |_| 1, |a, b| a + b)
    }
}

/// One representative per isomorphism class of connected graphs of order
/// `n` satisfying `constraint`, within the default budget.
pub fn generate_connected(n: usize, constraint: Constraint) -> Result<Vec<Graph>, GenerateError> {
    Ok(Generator::new(n, constraint, GenerateOptions::default())?.collect())
}

/// Like [`generate_connected`] but including disconnected graphs.
pub fn generate_all(n: usize, constraint: Constraint) -> Result<Vec<Graph>, GenerateError> {
    let opts = GenerateOptions { connected_only: false, large: false };
    Ok(Generator::new(n, constraint, opts)?.collect())
}

fn next_level(level: &Level, target: usize, constraint: Constraint) -> Level {
    let order = level.order + 1;
    let count = level.len();
    let batches: Vec<Vec<u64>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let parent = if level.order == 0 { &[][..] } else { level.get(i) };
            let mut out = Vec::new();
            extend(parent, target, constraint, None, &mut |rows| out.extend_from_slice(rows));
            out
        })
        .collect();
    Level { order, rows: batches.concat() }
}

/// Cubic deficiency `sum(3 - deg)`.
fn deficiency(rows: &[u64]) -> usize {
    rows.iter().map(|r| 3 - r.count_ones() as usize).sum()
}

/// Pairs of nonadjacent vertices without a common neighbour; returns the
/// union of their endpoints.
fn uncovered_pairs(rows: &[u64]) -> u64 {
    let m = rows.len();
    let mut f = 0u64;
    for x in 0..m {
        for y in x + 1..m {
            if rows[x] >> y & 1 == 0 && rows[x] & rows[y] == 0 {
                f |= 1 << x | 1 << y;
            }
        }
    }
    f
}

/// Calls `f` with every independent set of `rows` inside `allowed` of size at
/// least `min`.
fn independent_sets<F: FnMut(u64)>(rows: &[u64], allowed: u64, chosen: u64, min: usize, f: &mut F) {
    if (chosen.count_ones() + allowed.count_ones()) < min as u32 {
        return;
    }
    let Some(v) = (allowed != 0).then(|| allowed.trailing_zeros() as usize) else {
        f(chosen);
        return;
    };
    let rest = allowed & !(1 << v);
    independent_sets(rows, rest, chosen, min, f);
    independent_sets(rows, rest & !rows[v], chosen | 1 << v, min, f);
}

/// Connected components of `rows` as masks.
fn components(rows: &[u64]) -> Vec<u64> {
    let mut left = if rows.is_empty() { 0 } else { u64::MAX >> (64 - rows.len()) };
    let mut out = Vec::new();
    while left != 0 {
        let mut comp = 1u64 << left.trailing_zeros();
        let mut frontier = comp;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = rows[v] & !comp;
            comp |= new;
            frontier |= new;
        }
        left &= !comp;
        out.push(comp);
    }
    out
}

/// Grows `parent` by one vertex in every admissible way and emits the
/// accepted children. `last` is `Some(connected_only)` when the child has the
/// target order.
fn extend<F: FnMut(&[u64])>(parent: &[u64], target: usize, constraint: Constraint, last: Option<bool>, emit: &mut F) {
    let m = parent.len();
    let all = if m == 0 { 0 } else { u64::MAX >> (64 - m) };
    let max_deg = parent.iter().map(|r| r.count_ones() as usize).max().unwrap_or(0);
    let final_level = last.is_some();
    let comps = if last == Some(true) { components(parent) } else { Vec::new() };

    let mut candidates: Vec<u64> = Vec::new();
    match constraint {
        Constraint::All => {
            if m < 64 {
                for s in 0..=all {
                    if s.count_ones() as usize >= max_deg {
                        candidates.push(s);
                    }
                }
            }
        }
        Constraint::TriangleFree => {
            independent_sets(parent, all, 0, max_deg, &mut |s| candidates.push(s));
        }
        Constraint::MaximalTriangleFree if final_level => {
            let forced = uncovered_pairs(parent);
            if parent.iter().enumerate().any(|(v, r)| forced >> v & 1 == 1 && r & forced != 0) {
                return;
            }
            let dominated = forced | parent.iter().enumerate().filter(|(v, _)| forced >> v & 1 == 1).fold(0, |a, (_, r)| a | r);
            let rest = all & !dominated;
            if rest == 0 {
                candidates.push(forced);
            } else {
                let g = Graph::from_rows_unchecked(parent);
                for_each_maximal_independent_set(&g, VertexSet(rest), &mut |s| candidates.push(forced | s.0));
            }
            candidates.retain(|s| s.count_ones() as usize >= max_deg);
        }
        Constraint::MaximalTriangleFree => {
            independent_sets(parent, all, 0, max_deg, &mut |s| candidates.push(s));
        }
        Constraint::Cubic => {
            let low = parent.iter().enumerate().filter(|(_, r)| r.count_ones() < 3).fold(0u64, |a, (v, _)| a | 1 << v);
            let budget = 3 * (target - m - 1);
            let base = deficiency(parent);
            let mut push = |s: u64| {
                let k = s.count_ones() as usize;
                // the new vertex has deficiency 3 - k; each member of S loses one
                if k >= max_deg && base + 3 - 2 * k <= budget {
                    candidates.push(s);
                }
            };
            push(0);
            let l: Vec<u64> = (0..m).filter(|v| low >> v & 1 == 1).map(|v| 1u64 << v).collect();
            for (i, &a) in l.iter().enumerate() {
                push(a);
                for (j, &b) in l.iter().enumerate().skip(i + 1) {
                    push(a | b);
                    for &c in &l[j + 1..] {
                        push(a | b | c);
                    }
                }
            }
        }
    }

    let parent_trivial = m <= 1 || label_rows(parent, vec![all]).has_trivial_group();
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut child = vec![0u64; m + 1];
    for s in candidates {
        if last == Some(true) && m > 0 && comps.iter().any(|&c| c & s == 0) {
            continue;
        }
        for v in 0..m {
            child[v] = parent[v] | (s >> v & 1) << m;
        }
        child[m] = s;
        let Some(key) = accept(&child, !parent_trivial) else {
            continue;
        };
        if let Some(key) = key {
            if !seen.insert(key) {
                continue;
            }
        }
        debug_assert!(!final_level || constraint.holds(&Graph::from_rows_unchecked(&child)));
        emit(&child);
    }
}

/// Canonical deletion test for the last vertex of `rows`. Returns `None` to
/// reject; on acceptance returns the coloured canonical rows when `want_key`.
fn accept(rows: &[u64], want_key: bool) -> Option<Option<Vec<u64>>> {
    let n = rows.len();
    let v = n - 1;
    let mut deg = [0u64; 64];
    for (d, r) in deg.iter_mut().zip(rows) {
        *d = r.count_ones() as u64;
    }
    if deg[..n].iter().any(|&d| d > deg[v]) {
        return None;
    }
    let key = |u: usize| {
        let mut s = 0;
        let mut r = rows[u];
        while r != 0 {
            s += deg[r.trailing_zeros() as usize];
            r &= r - 1;
        }
        deg[u] << 16 | s
    };
    let kv = key(v);
    let mut cell = 0u64;
    for u in 0..n {
        if deg[u] != deg[v] {
            continue;
        }
        let ku = key(u);
        if ku > kv {
            return None;
        }
        if ku == kv {
            cell |= 1 << u;
        }
    }
    let all = u64::MAX >> (64 - n);
    if cell == 1 << v && !want_key {
        return Some(None);
    }
    let cells = if cell == all { vec![all] } else { vec![all & !cell, cell] };
    let lab = label_rows(rows, cells);
    if cell != 1 << v {
        let first = lab.lab[n - cell.count_ones() as usize];
        let orbits = lab.orbits();
        if orbits[first] != orbits[v] {
            return None;
        }
    }
    Some(want_key.then_some(lab.rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonical_form;

    fn count(n: usize, c: Constraint) -> usize {
        generate_connected(n, c).unwrap().len()
    }

    #[test]
    fn connected_counts_small() {
        let expect = [1, 1, 2, 6, 21, 112, 853];
        for (i, &e) in expect.iter().enumerate() {
            assert_eq!(count(i + 1, Constraint::All), e, "n = {}", i + 1);
        }
    }

    #[test]
    fn all_graph_counts_small() {
        let expect = [1, 2, 4, 11, 34, 156, 1044];
        for (i, &e) in expect.iter().enumerate() {
            assert_eq!(generate_all(i + 1, Constraint::All).unwrap().len(), e, "n = {}", i + 1);
        }
    }

    #[test]
    fn constrained_counts() {
        assert_eq!(count(5, Constraint::TriangleFree), 6);
        assert_eq!(count(7, Constraint::TriangleFree), 59);
        assert_eq!(count(5, Constraint::MaximalTriangleFree), 3);
        assert_eq!(count(7, Constraint::MaximalTriangleFree), 6);
        assert_eq!(count(4, Constraint::Cubic), 1);
        assert_eq!(count(6, Constraint::Cubic), 2);
        assert_eq!(count(8, Constraint::Cubic), 5);
        assert_eq!(count(9, Constraint::Cubic), 0);
    }

    #[test]
    fn outputs_distinct_and_constrained() {
        for c in [Constraint::All, Constraint::TriangleFree, Constraint::MaximalTriangleFree, Constraint::Cubic] {
            let gs = generate_connected(8, c).unwrap();
            let forms: HashSet<_> = gs.iter().map(canonical_form).collect();
            assert_eq!(forms.len(), gs.len());
            assert!(gs.iter().all(|g| g.is_connected() && c.holds(g) && g.order() == 8));
        }
    }

    #[test]
    fn budget_refused() {
        assert!(matches!(
            Generator::new(11, Constraint::All, GenerateOptions { connected_only: true, large: true }),
            Err(GenerateError::BudgetExceeded { limit: 10, .. })
        ));
        assert_eq!(Generator::new(0, Constraint::All, GenerateOptions::default()).err(), Some(GenerateError::ZeroOrder));
    }

    #[test]
    fn deterministic_order() {
        let a = generate_connected(7, Constraint::All).unwrap();
        let b = generate_connected(7, Constraint::All).unwrap();
        assert_eq!(a, b);
    }
}
