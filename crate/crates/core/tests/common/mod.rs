//! Independent reference implementations shared by the integration suites.
//! Nothing here calls the solver, canonical augmentation or matching code it
//! is compared against.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use edom_core::{canonical_form, Graph, VertexSet};
use rand::Rng;

/// Every `k`-subset of `0..n` as a bit mask, by plain counting.
fn subsets_of_size(n: usize, k: usize) -> Vec<u64> {
    (0u64..1 << n).filter(|m| m.count_ones() as usize == k).collect()
}

fn dominates(g: &Graph, x: u64) -> bool {
    let n = g.order();
    (0..n).all(|v| x >> v & 1 == 1 || (0..n).any(|u| x >> u & 1 == 1 && g.has_edge(u, v)))
}

/// Game-tree search: does configuration `x` survive `depth` more attacks?
fn survives(g: &Graph, x: u64, depth: usize, memo: &mut HashMap<(u64, usize), bool>) -> bool {
    if !dominates(g, x) {
        return false;
    }
    if depth == 0 {
        return true;
    }
    if let Some(&r) = memo.get(&(x, depth)) {
        return r;
    }
    let n = g.order();
    let mut ok = true;
    'attacks: for v in (0..n).filter(|&v| x >> v & 1 == 0) {
        for w in (0..n).filter(|&w| x >> w & 1 == 1 && g.has_edge(v, w)) {
            let y = x & !(1 << w) | 1 << v;
            if survives(g, y, depth - 1, memo) {
                continue 'attacks;
            }
        }
        ok = false;
        break;
    }
    memo.insert((x, depth), ok);
    ok
}

/// γ∞ by game-tree search. With `C(n, k)` positions, surviving `C(n, k) + 1`
/// attacks means some position repeats, so the defence lasts forever.
pub fn gamma_inf_game_tree(g: &Graph) -> usize {
    let n = g.order();
    for k in 1..=n {
        let positions = subsets_of_size(n, k);
        let depth = positions.len() + 1;
        let mut memo = HashMap::new();
        if positions.iter().any(|&x| survives(g, x, depth, &mut memo)) {
            return k;
        }
    }
    n
}

/// Maximum matching by trying every edge subset.
pub fn matching_brute_force(g: &Graph) -> usize {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    assert!(edges.len() <= 16, "brute force is for small edge sets");
    let mut best = 0;
    for mask in 0u32..1 << edges.len() {
        let mut used = 0u64;
        let mut ok = true;
        for (i, &(a, b)) in edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                if used >> a & 1 == 1 || used >> b & 1 == 1 {
                    ok = false;
                    break;
                }
                used |= 1 << a | 1 << b;
            }
        }
        if ok {
            best = best.max(mask.count_ones() as usize);
        }
    }
    best
}

/// Chromatic number by trying colourings with increasing palette sizes.
pub fn chromatic_brute_force(g: &Graph) -> usize {
    let n = g.order();
    if n == 0 {
        return 0;
    }
    fn colour(g: &Graph, v: usize, k: usize, cols: &mut Vec<usize>) -> bool {
        if v == g.order() {
            return true;
        }
        for c in 0..k {
            if (0..v).all(|u| !g.has_edge(u, v) || cols[u] != c) {
                cols[v] = c;
                if colour(g, v + 1, k, cols) {
                    return true;
                }
            }
        }
        false
    }
    (1..=n).find(|&k| colour(g, 0, k, &mut vec![0; n])).unwrap()
}

/// Canonical forms of all graphs on `n` vertices, grown one vertex at a time
/// with every possible neighbourhood and deduplicated by hashing.
pub fn all_graphs_by_hashing(n: usize) -> Vec<Graph> {
    let mut level: Vec<Graph> = vec![Graph::empty(1).unwrap()];
    for m in 1..n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for g in &level {
            let rows = g.rows();
            for mask in 0u64..1 << m {
                let mut r = rows.clone();
                for (v, row) in r.iter_mut().enumerate() {
                    if mask >> v & 1 == 1 {
                        *row |= 1 << m;
                    }
                }
                r.push(mask);
                let h = Graph::from_rows(&r).unwrap();
                if seen.insert(canonical_form(&h)) {
                    next.push(h);
                }
            }
        }
        level = next;
    }
    level
}

/// A 5-vertex graph with a dominating pair that is not eternal: the cycle
/// u0 u1 u2 u3 u4 with chord u1 u4.
pub fn house() -> Graph {
    Graph::from_edges(5, &[(1, 2), (4, 3), (0, 1), (3, 2), (1, 4), (0, 4)]).unwrap()
}

/// The house with a path `v0 .. v_{k-3}` hung from u0 and a pendant leaf on
/// every path vertex. Returns the graph and the non-eternal dominating set
/// `{u1, u4, v0, .., v_{k-3}}`.
pub fn house_with_tail(k: usize) -> (Graph, VertexSet) {
    assert!(k >= 3);
    let len = k - 2;
    let n = 5 + 2 * len;
    let path = |i: usize| 5 + 2 * i;
    let leaf = |i: usize| 6 + 2 * i;
    let mut edges: Vec<(usize, usize)> = house().edges().collect();
    edges.push((0, path(0)));
    for i in 0..len {
        edges.push((path(i), leaf(i)));
        if i + 1 < len {
            edges.push((path(i), path(i + 1)));
        }
    }
    let mut d = VertexSet::EMPTY;
    d.insert(1);
    d.insert(4);
    for i in 0..len {
        d.insert(path(i));
    }
    (Graph::from_edges(n, &edges).unwrap(), d)
}

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

pub fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
