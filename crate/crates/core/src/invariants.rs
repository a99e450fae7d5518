//! Exact independence, clique, clique-cover, chromatic, matching and
//! domination numbers, plus criticality with respect to the clique cover
//! number.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::{Graph, VertexSet};

/// Largest order accepted by [`chromatic_number`].
pub const CHROMATIC_MAX_ORDER: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("graph is not triangle-free")]
    NotTriangleFree,
    #[error("chromatic number is only computed for graphs on at most {limit} vertices (got {order})")]
    TooLarge { order: usize, limit: usize },
}

/// Calls `f` once for every maximal clique of `g[candidates]`.
pub(crate) fn for_each_maximal_clique<F: FnMut(VertexSet)>(g: &Graph, candidates: VertexSet, f: &mut F) {
    if candidates.is_empty() {
        return;
    }
    bron_kerbosch(g, VertexSet::EMPTY, candidates, VertexSet::EMPTY, f);
}

fn bron_kerbosch<F: FnMut(VertexSet)>(g: &Graph, r: VertexSet, mut p: VertexSet, mut x: VertexSet, f: &mut F) {
    if p.is_empty() {
        if x.is_empty() {
            f(r);
        }
        return;
    }
    // pivot maximising |P ∩ N(u)|
    let pivot = (p | x).iter().max_by_key(|&u| (p & g.neighbours(u)).len()).unwrap();
    for v in p - g.neighbours(pivot) {
        let nv = g.neighbours(v);
        bron_kerbosch(g, r.with(v), p & nv, x & nv, f);
        p.remove(v);
        x.insert(v);
    }
}

/// All maximal cliques, in Bron–Kerbosch discovery order.
pub fn maximal_cliques(g: &Graph) -> Vec<VertexSet> {
    let mut out = Vec::new();
    for_each_maximal_clique(g, g.vertices(), &mut |c| out.push(c));
    out
}

/// Calls `f` for every maximal independent set of `g[candidates]`.
pub(crate) fn for_each_maximal_independent_set<F: FnMut(VertexSet)>(
    g: &Graph,
    candidates: VertexSet,
    f: &mut F,
) {
    let h = g.complement();
    for_each_maximal_clique(&h, candidates, f);
}

/// Greedy sequential colouring of `p`; returns vertices in colour order with
/// their colour numbers (1-based).
fn colour_order(g: &Graph, p: VertexSet) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(p.len());
    let mut left = p;
    let mut colour = 0;
    while !left.is_empty() {
        colour += 1;
        let mut avail = left;
        while let Some(v) = avail.first() {
            avail = avail - g.neighbours(v);
            avail.remove(v);
            left.remove(v);
            out.push((v, colour));
        }
    }
    out
}

fn max_clique_expand(g: &Graph, p: VertexSet, size: usize, best: &mut usize) {
    let order = colour_order(g, p);
    let mut p = p;
    for &(v, colour) in order.iter().rev() {
        if size + colour <= *best {
            return;
        }
        let next = p & g.neighbours(v);
        if next.is_empty() {
            *best = (*best).max(size + 1);
        } else {
            max_clique_expand(g, next, size + 1, best);
        }
        p.remove(v);
    }
}

/// ω(g) by colour-bounded branch and bound.
pub fn clique_number(g: &Graph) -> usize {
    let mut best = 0;
    max_clique_expand(g, g.vertices(), 0, &mut best);
    best
}

/// α(g) = ω(complement of g).
pub fn independence_number(g: &Graph) -> usize {
    clique_number(&g.complement())
}

/// Greedy independent set in `g[u]`, smallest remaining degree first.
fn greedy_independent(g: &Graph, u: VertexSet) -> usize {
    let mut left = u;
    let mut count = 0;
    while !left.is_empty() {
        let v = left.iter().min_by_key(|&v| (g.neighbours(v) & left).len()).unwrap();
        left = left - g.closed_neighbours(v);
        count += 1;
    }
    count
}

struct CoverSearch<'a> {
    g: &'a Graph,
    cliques: Vec<VertexSet>,
    best: usize,
}

impl CoverSearch<'_> {
    fn search(&mut self, uncovered: VertexSet, used: usize) {
        if uncovered.is_empty() {
            self.best = self.best.min(used);
            return;
        }
        if used + greedy_independent(self.g, uncovered) >= self.best {
            return;
        }
        // branch on the uncovered vertex with the fewest covering options
        let mut choice: Option<(usize, Vec<VertexSet>)> = None;
        for v in uncovered {
            let mut opts: Vec<VertexSet> = self
                .cliques
                .iter()
                .filter(|c| c.contains(v))
                .map(|&c| c & uncovered)
                .collect();
            opts.sort_unstable_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
            opts.dedup();
            let mut kept: Vec<VertexSet> = Vec::with_capacity(opts.len());
            for o in opts {
                if !kept.iter().any(|k| o.is_subset(*k)) {
                    kept.push(o);
                }
            }
            if choice.as_ref().is_none_or(|(_, c)| kept.len() < c.len()) {
                let done = kept.len() == 1;
                choice = Some((v, kept));
                if done {
                    break;
                }
            }
        }
        let (_, opts) = choice.unwrap();
        for c in opts {
            self.search(uncovered - c, used + 1);
        }
    }
}

/// θ(g): minimum number of cliques partitioning V, by branch and bound over
/// maximal cliques.
///
/// Restricting to maximal cliques loses nothing: grow each part of an optimal
/// partition to a maximal clique, then drop repeated vertices from later parts.
pub fn clique_cover_number(g: &Graph) -> usize {
    let n = g.order();
    if n == 0 {
        return 0;
    }
    let mut search = CoverSearch { g, cliques: maximal_cliques(g), best: n + 1 };
    search.search(g.vertices(), 0);
    search.best
}

/// χ(g) by DSATUR backtracking with iterative deepening on the colour count.
pub fn chromatic_number(g: &Graph) -> Result<usize, InvariantError> {
    let n = g.order();
    if n > CHROMATIC_MAX_ORDER {
        return Err(InvariantError::TooLarge { order: n, limit: CHROMATIC_MAX_ORDER });
    }
    if n == 0 {
        return Ok(0);
    }
    let lower = clique_number(g);
    for k in lower..=n {
        let mut colours = vec![usize::MAX; n];
        if dsatur(g, k, &mut colours, 0) {
            return Ok(k);
        }
    }
    unreachable!("n colours always suffice")
}

fn dsatur(g: &Graph, k: usize, colours: &mut [usize], coloured: usize) -> bool {
    let n = g.order();
    if coloured == n {
        return true;
    }
    let saturation = |v: usize, colours: &[usize]| -> (u64, usize) {
        let mut used = 0u64;
        for u in g.neighbours(v) {
            if colours[u] != usize::MAX {
                used |= 1 << colours[u];
            }
        }
        (used, used.count_ones() as usize)
    };
    let mut pick = None;
    let mut pick_key = (0usize, 0usize);
    let mut pick_used = 0u64;
    for v in 0..n {
        if colours[v] != usize::MAX {
            continue;
        }
        let (used, sat) = saturation(v, colours);
        let key = (sat, g.degree(v));
        if pick.is_none() || key > pick_key {
            pick = Some(v);
            pick_key = key;
            pick_used = used;
        }
    }
    let v = pick.unwrap();
    let max_used = colours.iter().filter(|&&c| c != usize::MAX).max().map_or(0, |&c| c + 1);
    for c in 0..k.min(max_used + 1) {
        if pick_used >> c & 1 == 1 {
            continue;
        }
        colours[v] = c;
        if dsatur(g, k, colours, coloured + 1) {
            return true;
        }
    }
    colours[v] = usize::MAX;
    false
}

/// ν(g): size of a maximum matching (Edmonds' blossom algorithm).
pub fn maximum_matching(g: &Graph) -> usize {
    Blossom::new(g).run()
}

const NONE: usize = usize::MAX;

struct Blossom<'a> {
    g: &'a Graph,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    blossom: Vec<bool>,
    queue: std::collections::VecDeque<usize>,
}

impl<'a> Blossom<'a> {
    fn new(g: &'a Graph) -> Self {
        let n = g.order();
        Blossom {
            g,
            mate: vec![NONE; n],
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            blossom: vec![false; n],
            queue: Default::default(),
        }
    }

    fn run(mut self) -> usize {
        let n = self.g.order();
        // greedy start
        for v in 0..n {
            if self.mate[v] == NONE {
                if let Some(u) = self.g.neighbours(v).iter().find(|&u| self.mate[u] == NONE) {
                    self.mate[v] = u;
                    self.mate[u] = v;
                }
            }
        }
        for root in 0..n {
            if self.mate[root] != NONE {
                continue;
            }
            let end = self.find_path(root);
            let mut v = end;
            while v != NONE {
                let pv = self.parent[v];
                let next = self.mate[pv];
                self.mate[v] = pv;
                self.mate[pv] = v;
                v = next;
            }
        }
        self.mate.iter().filter(|&&m| m != NONE).count() / 2
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.g.order()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.blossom[self.base[v]] = true;
            self.blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// BFS for an augmenting path from `root`; returns its free end or NONE.
    fn find_path(&mut self, root: usize) -> usize {
        let n = self.g.order();
        self.used.iter_mut().for_each(|x| *x = false);
        self.parent.iter_mut().for_each(|x| *x = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for to in self.g.neighbours(v) {
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return to;
                    }
                    let m = self.mate[to];
                    self.used[m] = true;
                    self.queue.push_back(m);
                }
            }
        }
        NONE
    }
}

/// θ(g) = n − ν(g) for triangle-free g.
pub fn theta_triangle_free(g: &Graph) -> Result<usize, InvariantError> {
    if !g.is_triangle_free() {
        return Err(InvariantError::NotTriangleFree);
    }
    Ok(g.order() - maximum_matching(g))
}

/// Is there a dominating set of size at most `k`?
fn dominates_within(g: &Graph, undominated: VertexSet, k: usize) -> bool {
    let Some(_) = undominated.first() else {
        return true;
    };
    if k == 0 {
        return false;
    }
    // the undominated vertex with the fewest ways to be dominated
    let u = undominated.iter().min_by_key(|&u| g.closed_neighbours(u).len()).unwrap();
    g.closed_neighbours(u)
        .iter()
        .any(|w| dominates_within(g, undominated - g.closed_neighbours(w), k - 1))
}

/// γ(g): size of a smallest dominating set.
pub fn domination_number(g: &Graph) -> usize {
    (0..=g.order()).find(|&k| dominates_within(g, g.vertices(), k)).unwrap()
}

fn collect_dominating(
    g: &Graph,
    chosen: VertexSet,
    undominated: VertexSet,
    k: usize,
    out: &mut BTreeSet<VertexSet>,
) {
    if undominated.is_empty() {
        // pad with any vertices to reach size exactly k is never needed at k = γ
        if k == 0 {
            out.insert(chosen);
        }
        return;
    }
    if k == 0 {
        return;
    }
    let u = undominated.iter().min_by_key(|&u| g.closed_neighbours(u).len()).unwrap();
    for w in g.closed_neighbours(u) - chosen {
        collect_dominating(g, chosen.with(w), undominated - g.closed_neighbours(w), k - 1, out);
    }
}

/// Every dominating set of size γ(g), in ascending bit order.
pub fn minimum_dominating_sets(g: &Graph) -> Vec<VertexSet> {
    let gamma = domination_number(g);
    let mut out = BTreeSet::new();
    collect_dominating(g, VertexSet::EMPTY, g.vertices(), gamma, &mut out);
    out.into_iter().collect()
}

/// θ(g − v) = θ(g) − 1 for every vertex v.
pub fn is_vertex_critical(g: &Graph) -> bool {
    let theta = clique_cover_number(g);
    is_vertex_critical_with(g, theta)
}

pub(crate) fn is_vertex_critical_with(g: &Graph, theta: usize) -> bool {
    (0..g.order()).all(|v| {
        let h = g.delete_vertex(v).expect("vertex in range");
        clique_cover_number(&h) + 1 == theta
    })
}

/// θ(g + uv) = θ(g) − 1 for every non-edge uv; vacuous for complete graphs.
pub fn is_edge_critical(g: &Graph) -> bool {
    let theta = clique_cover_number(g);
    is_edge_critical_with(g, theta)
}

pub(crate) fn is_edge_critical_with(g: &Graph, theta: usize) -> bool {
    g.complement().edges().all(|(u, v)| {
        let h = g.add_edge(u, v).expect("non-edge");
        clique_cover_number(&h) + 1 == theta
    })
}

/// Per-graph invariant values used by reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantRecord {
    pub n: usize,
    pub alpha: usize,
    pub gamma: usize,
    pub theta: usize,
    /// Filled in by the eternal domination solver.
    pub gamma_inf: Option<usize>,
    pub triangle_free: bool,
    pub claw_free: bool,
    pub cubic: bool,
    pub two_connected: bool,
    pub vertex_critical: bool,
    pub edge_critical: bool,
}

impl InvariantRecord {
    /// Everything except γ∞.
    pub fn compute(g: &Graph) -> Self {
        let theta = clique_cover_number(g);
        InvariantRecord {
            n: g.order(),
            alpha: independence_number(g),
            gamma: domination_number(g),
            theta,
            gamma_inf: None,
            triangle_free: g.is_triangle_free(),
            claw_free: g.is_claw_free(),
            cubic: g.is_cubic(),
            two_connected: g.is_two_connected(),
            vertex_critical: is_vertex_critical_with(g, theta),
            edge_critical: is_edge_critical_with(g, theta),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph6::decode;

    fn grotzsch() -> Graph {
        // outer 5-cycle 0..4, inner 5..9, hub 10
        let mut e = vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)];
        for i in 0..5 {
            e.push((5 + i, 10));
            e.push((5 + i, (i + 1) % 5));
            e.push((5 + i, (i + 4) % 5));
        }
        Graph::from_edges(11, &e).unwrap()
    }

    fn petersen() -> Graph {
        Graph::from_edges(
            10,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
              (5, 7), (7, 9), (9, 6), (6, 8), (8, 5)],
        )
        .unwrap()
    }

    #[test]
    fn maximal_cliques_small() {
        let c5 = Graph::cycle(5).unwrap();
        let mut cl = maximal_cliques(&c5);
        cl.sort();
        assert_eq!(cl.len(), 5);
        assert!(cl.iter().all(|c| c.len() == 2 && c5.is_clique(*c)));
        assert_eq!(maximal_cliques(&Graph::complete(4).unwrap()), vec![VertexSet::full(4)]);
        assert!(maximal_cliques(&Graph::empty(0).unwrap()).is_empty());
    }

    #[test]
    fn grotzsch_complement_cliques_match_independent_sets() {
        let g = grotzsch();
        let h = g.complement();
        let mut brute = 0;
        for bits in 1u64..(1 << 11) {
            let s = VertexSet(bits);
            if g.is_independent_set(s) && (g.vertices() - s).iter().all(|v| g.neighbours(v).intersects(s)) {
                brute += 1;
            }
        }
        assert_eq!(maximal_cliques(&h).len(), brute);
    }

    #[test]
    fn alpha_values() {
        assert_eq!(independence_number(&Graph::cycle(5).unwrap()), 2);
        assert_eq!(independence_number(&grotzsch().complement()), 2);
        assert_eq!(independence_number(&decode("IEhbtj{ro").unwrap()), 3);
        assert_eq!(independence_number(&decode("IEhbtn{ro").unwrap()), 3);
        assert_eq!(clique_number(&Graph::complete(7).unwrap()), 7);
        assert_eq!(clique_number(&Graph::empty(3).unwrap()), 1);
        assert_eq!(clique_number(&Graph::empty(0).unwrap()), 0);
    }

    #[test]
    fn theta_values() {
        for n in 1..=6 {
            assert_eq!(clique_cover_number(&Graph::complete(n).unwrap()), 1);
            assert_eq!(clique_cover_number(&Graph::empty(n).unwrap()), n);
        }
        assert_eq!(clique_cover_number(&Graph::cycle(5).unwrap()), 3);
        assert_eq!(clique_cover_number(&decode("IEhbtj{ro").unwrap()), 4);
        assert_eq!(clique_cover_number(&decode("IEhbtn{ro").unwrap()), 4);
        assert_eq!(clique_cover_number(&grotzsch().complement()), 4);
    }

    #[test]
    fn chromatic_values() {
        assert_eq!(chromatic_number(&grotzsch()).unwrap(), 4);
        assert_eq!(chromatic_number(&Graph::cycle(5).unwrap()).unwrap(), 3);
        assert_eq!(chromatic_number(&Graph::cycle(6).unwrap()).unwrap(), 2);
        for n in 1..=7 {
            assert_eq!(chromatic_number(&Graph::complete(n).unwrap()).unwrap(), n);
        }
        assert!(matches!(chromatic_number(&Graph::empty(21).unwrap()), Err(InvariantError::TooLarge { .. })));
    }

    #[test]
    fn matching_values() {
        assert_eq!(maximum_matching(&Graph::cycle(5).unwrap()), 2);
        assert_eq!(maximum_matching(&Graph::complete(4).unwrap()), 2);
        assert_eq!(maximum_matching(&petersen()), 5);
        assert_eq!(maximum_matching(&Graph::empty(3).unwrap()), 0);
    }

    #[test]
    fn theta_triangle_free_values() {
        assert_eq!(theta_triangle_free(&Graph::cycle(5).unwrap()), Ok(3));
        assert_eq!(theta_triangle_free(&Graph::complete(2).unwrap()), Ok(1));
        let gr = grotzsch();
        assert_eq!(theta_triangle_free(&gr).unwrap(), clique_cover_number(&gr));
        assert_eq!(theta_triangle_free(&Graph::complete(3).unwrap()), Err(InvariantError::NotTriangleFree));
    }

    #[test]
    fn domination_values() {
        for n in 1..=6 {
            assert_eq!(domination_number(&Graph::complete(n).unwrap()), 1);
        }
        assert_eq!(domination_number(&Graph::cycle(5).unwrap()), 2);
        let g = Graph::from_edges(5, &[(1, 2), (4, 3), (0, 1), (3, 2), (1, 4), (0, 4)]).unwrap();
        assert_eq!(domination_number(&g), 2);
        let sets = minimum_dominating_sets(&g);
        assert!(sets.contains(&[1usize, 4].into_iter().collect()));
        assert!(sets.iter().all(|&s| s.len() == 2 && g.is_dominating_set(s)));
        // C5 has exactly the five {i, i+2} gamma-sets
        assert_eq!(minimum_dominating_sets(&Graph::cycle(5).unwrap()).len(), 5);
    }

    #[test]
    fn criticality() {
        let c5 = Graph::cycle(5).unwrap();
        assert!(is_vertex_critical(&c5));
        assert!(is_edge_critical(&c5));
        assert!(!is_vertex_critical(&Graph::complete(4).unwrap()));
        assert!(is_edge_critical(&Graph::complete(4).unwrap()));
        for s in ["FCptO", "FCxv?", "FUzro"] {
            let g = decode(s).unwrap();
            assert!(is_vertex_critical(&g) && is_edge_critical(&g), "{s}");
        }
    }

    #[test]
    fn record_for_c5() {
        let r = InvariantRecord::compute(&Graph::cycle(5).unwrap());
        assert_eq!((r.n, r.alpha, r.gamma, r.theta), (5, 2, 2, 3));
        assert!(r.triangle_free && r.claw_free && r.two_connected && r.vertex_critical && r.edge_critical);
        assert!(!r.cubic);
        assert_eq!(r.gamma_inf, None);
    }
}
