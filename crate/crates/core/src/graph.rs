//! Simple undirected graphs on at most 64 vertices, stored as one adjacency
//! bit mask per vertex.

use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, Not, Sub};

use thiserror::Error;

/// Largest supported order; one machine word per neighbourhood row.
pub const MAX_VERTICES: usize = 64;

/// A set of vertex indices in `0..64`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    /// The set `{0, 1, ..., n-1}`.
    #[inline]
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    #[inline]
    pub fn singleton(v: usize) -> Self {
        VertexSet(1u64 << v)
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u64 << v;
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u64 << v);
    }

    #[inline]
    pub fn with(self, v: usize) -> Self {
        VertexSet(self.0 | 1u64 << v)
    }

    #[inline]
    pub fn without(self, v: usize) -> Self {
        VertexSet(self.0 & !(1u64 << v))
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Smallest member, if any.
    #[inline]
    pub fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    /// Largest member, if any.
    #[inline]
    pub fn last(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(63 - self.0.leading_zeros() as usize)
        }
    }

    #[inline]
    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn intersects(self, other: VertexSet) -> bool {
        self.0 & other.0 != 0
    }

    #[inline]
    pub fn iter(self) -> VertexIter {
        VertexIter(self.0)
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = VertexIter;
    fn into_iter(self) -> VertexIter {
        self.iter()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl BitOr for VertexSet {
    type Output = VertexSet;
    #[inline]
    fn bitor(self, rhs: Self) -> Self {
        VertexSet(self.0 | rhs.0)
    }
}

impl BitOrAssign for VertexSet {
    #[inline]
    fn bitor_assign(&mut self, rhs: Self) {
        self.0 |= rhs.0;
    }
}

impl BitAnd for VertexSet {
    type Output = VertexSet;
    #[inline]
    fn bitand(self, rhs: Self) -> Self {
        VertexSet(self.0 & rhs.0)
    }
}

impl BitAndAssign for VertexSet {
    #[inline]
    fn bitand_assign(&mut self, rhs: Self) {
        self.0 &= rhs.0;
    }
}

impl Sub for VertexSet {
    type Output = VertexSet;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        VertexSet(self.0 & !rhs.0)
    }
}

impl Not for VertexSet {
    type Output = VertexSet;
    #[inline]
    fn not(self) -> Self {
        VertexSet(!self.0)
    }
}

/// Ascending iterator over the members of a [`VertexSet`].
#[derive(Clone)]
pub struct VertexIter(u64);

impl Iterator for VertexIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for VertexIter {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph order {0} exceeds the supported maximum of 64 vertices")]
    TooManyVertices(usize),
    #[error("vertex {vertex} out of range for a graph on {order} vertices")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge {0}-{1} already present")]
    EdgeExists(usize, usize),
    #[error("edge {0}-{1} not present")]
    EdgeMissing(usize, usize),
    #[error("vertex set {0:?} is not contained in the vertex set of the graph")]
    NotSubset(VertexSet),
}

/// Immutable simple graph. `adj[i]` is the open neighbourhood of vertex `i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges().collect::<Vec<_>>())
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        Ok(Graph { n, adj: vec![VertexSet::EMPTY; n] })
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        let g = Graph::empty(n)?;
        Ok(g.complement())
    }

    /// The cycle `0-1-...-(n-1)-0`; for `n < 3` this is a path.
    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        let mut edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        if n >= 3 {
            edges.push((n - 1, 0));
        }
        Graph::from_edges(n, &edges)
    }

    pub fn path(n: usize) -> Result<Self, GraphError> {
        let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges)
    }

    /// Graph on `n` vertices with the given edges; repeated edges collapse.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut adj = Graph::empty(n)?.adj;
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, order: n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(Graph { n, adj })
    }

    /// Builds a graph from adjacency rows, checking symmetry and range.
    pub fn from_rows(rows: &[u64]) -> Result<Self, GraphError> {
        let n = rows.len();
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        let full = VertexSet::full(n);
        for (i, &r) in rows.iter().enumerate() {
            let row = VertexSet(r);
            if !row.is_subset(full) {
                let vertex = (row - full).first().unwrap_or(n);
                return Err(GraphError::VertexOutOfRange { vertex, order: n });
            }
            if row.contains(i) {
                return Err(GraphError::SelfLoop(i));
            }
            for j in row {
                if rows[j] >> i & 1 == 0 {
                    return Err(GraphError::EdgeMissing(j, i));
                }
            }
        }
        Ok(Graph { n, adj: rows.iter().map(|&r| VertexSet(r)).collect() })
    }

    /// Trusted constructor for rows produced by this crate.
    pub(crate) fn from_rows_unchecked(rows: &[u64]) -> Self {
        debug_assert!(Graph::from_rows(rows).is_ok());
        Graph { n: rows.len(), adj: rows.iter().map(|&r| VertexSet(r)).collect() }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    #[inline]
    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    #[inline]
    pub fn neighbours(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    /// Closed neighbourhood `N[v]`.
    #[inline]
    pub fn closed_neighbours(&self, v: usize) -> VertexSet {
        self.adj[v].with(v)
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    /// Adjacency rows as raw bit masks.
    pub fn rows(&self) -> Vec<u64> {
        self.adj.iter().map(|s| s.0).collect()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            (self.adj[u] - VertexSet::full(u + 1)).iter().map(move |v| (u, v))
        })
    }

    /// Union of the closed neighbourhoods of the members of `s`.
    pub fn dominated_by(&self, s: VertexSet) -> VertexSet {
        s.iter().fold(s, |acc, v| acc | self.adj[v])
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.n {
            Err(GraphError::VertexOutOfRange { vertex: v, order: self.n })
        } else {
            Ok(())
        }
    }

    fn check_subset(&self, s: VertexSet) -> Result<(), GraphError> {
        if s.is_subset(self.vertices()) {
            Ok(())
        } else {
            Err(GraphError::NotSubset(s))
        }
    }

    pub fn complement(&self) -> Graph {
        let full = self.vertices();
        let adj = (0..self.n).map(|i| (full - self.adj[i]).without(i)).collect();
        Graph { n: self.n, adj }
    }

    /// Subgraph induced by `s`, relabelled `0..|s|` in ascending original order.
    pub fn induced_subgraph(&self, s: VertexSet) -> Result<Graph, GraphError> {
        self.check_subset(s)?;
        let keep: Vec<usize> = s.iter().collect();
        let adj = keep
            .iter()
            .map(|&v| {
                keep.iter()
                    .enumerate()
                    .filter(|&(_, &u)| self.adj[v].contains(u))
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        Ok(Graph { n: keep.len(), adj })
    }

    pub fn delete_vertex(&self, v: usize) -> Result<Graph, GraphError> {
        self.check_vertex(v)?;
        self.induced_subgraph(self.vertices().without(v))
    }

    pub fn add_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(GraphError::EdgeExists(u, v));
        }
        let mut g = self.clone();
        g.adj[u].insert(v);
        g.adj[v].insert(u);
        Ok(g)
    }

    pub fn delete_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if !self.has_edge(u, v) {
            return Err(GraphError::EdgeMissing(u, v));
        }
        let mut g = self.clone();
        g.adj[u].remove(v);
        g.adj[v].remove(u);
        Ok(g)
    }

    /// Relabels so that vertex `i` becomes `perm[i]`.
    ///
    /// Panics if `perm` is not a permutation of `0..n`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n, "permutation length must equal the order");
        let seen: VertexSet = perm.iter().copied().collect();
        assert_eq!(seen, self.vertices(), "not a permutation");
        let mut adj = vec![VertexSet::EMPTY; self.n];
        for (u, v) in self.edges() {
            adj[perm[u]].insert(perm[v]);
            adj[perm[v]].insert(perm[u]);
        }
        Graph { n: self.n, adj }
    }

    /// Disjoint union; vertices of `other` are shifted by `self.order()`.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph, GraphError> {
        let n = self.n + other.n;
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        let mut adj = self.adj.clone();
        adj.extend(other.adj.iter().map(|s| VertexSet(s.0 << self.n)));
        Ok(Graph { n, adj })
    }

    pub fn is_dominating_set(&self, d: VertexSet) -> bool {
        self.dominated_by(d) & self.vertices() == self.vertices()
    }

    pub fn is_independent_set(&self, s: VertexSet) -> bool {
        s.iter().all(|v| !self.adj[v].intersects(s))
    }

    pub fn is_clique(&self, s: VertexSet) -> bool {
        s.iter().all(|v| s.without(v).is_subset(self.adj[v]))
    }

    /// Vertices reachable from `start` without entering `blocked`.
    fn reach(&self, start: usize, blocked: VertexSet) -> VertexSet {
        let mut seen = VertexSet::singleton(start);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for v in frontier {
                next |= self.adj[v];
            }
            frontier = next - seen - blocked;
            seen |= frontier;
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.reach(0, VertexSet::EMPTY) == self.vertices()
    }

    /// Components ordered by their smallest vertex.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        let mut left = self.vertices();
        let mut out = Vec::new();
        while let Some(v) = left.first() {
            let c = self.reach(v, VertexSet::EMPTY);
            left = left - c;
            out.push(c);
        }
        out
    }

    /// At least three vertices, connected, and no cut vertex.
    pub fn is_two_connected(&self) -> bool {
        if self.n < 3 || !self.is_connected() {
            return false;
        }
        (0..self.n).all(|v| {
            let rest = self.vertices().without(v);
            let start = rest.first().unwrap();
            self.reach(start, VertexSet::singleton(v)) == rest
        })
    }

    pub fn is_triangle_free(&self) -> bool {
        self.edges().all(|(u, v)| !self.adj[u].intersects(self.adj[v]))
    }

    /// Triangle-free, and every non-adjacent pair has a common neighbour.
    pub fn is_maximal_triangle_free(&self) -> bool {
        if !self.is_triangle_free() {
            return false;
        }
        (0..self.n).all(|u| {
            let non = self.vertices() - self.adj[u] - VertexSet::full(u + 1);
            non.iter().all(|v| self.adj[u].intersects(self.adj[v]))
        })
    }

    /// No induced `K_{1,3}`.
    pub fn is_claw_free(&self) -> bool {
        (0..self.n).all(|c| {
            let nb: Vec<usize> = self.adj[c].iter().collect();
            for (i, &a) in nb.iter().enumerate() {
                for (j, &b) in nb.iter().enumerate().skip(i + 1) {
                    if self.has_edge(a, b) {
                        continue;
                    }
                    for &x in &nb[j + 1..] {
                        if !self.has_edge(a, x) && !self.has_edge(b, x) {
                            return false;
                        }
                    }
                }
            }
            true
        })
    }

    pub fn is_cubic(&self) -> bool {
        (0..self.n).all(|v| self.degree(v) == 3)
    }

    pub fn is_regular(&self) -> bool {
        (0..self.n).all(|v| self.degree(v) == self.degree(0))
    }
}
