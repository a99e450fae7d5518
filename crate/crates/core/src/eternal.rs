//! Eternal domination in the one-guard-moves model.
//!
//! With `k` guards, a configuration is a dominating `k`-set. The attacker
//! picks an unguarded vertex `x`; the defender answers by moving one guard
//! `w ∈ N(x)` onto `x`. A configuration survives when every attack has an
//! answer leading to another surviving configuration. The surviving family
//! is the greatest fixpoint of that condition, found by deleting failing
//! configurations from a worklist until nothing changes. `γ∞(G) ≤ k` iff the
//! family is nonempty, since the defender picks the starting configuration.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::invariants::{clique_cover_number, independence_number};

/// Default cap on the number of configurations held in memory.
pub const DEFAULT_CONFIG_CAP: usize = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EternalError {
    #[error("{count}+ dominating sets of size {k} exceed the cap of {cap}")]
    BudgetExceeded { k: usize, count: usize, cap: usize },
    #[error("guard count {k} is outside 1..={n}")]
    InvalidGuardCount { k: usize, n: usize },
    #[error("{0:?} is not a dominating set")]
    NotDominating(VertexSet),
    #[error("vertex {0} already holds a guard")]
    AttackOnGuard(usize),
    #[error("configuration {0:?} is not in the surviving family")]
    NotSurviving(VertexSet),
}

/// Dominating `k`-sets of a graph, with the surviving subfamily.
#[derive(Clone, Debug)]
pub struct ConfigSpace {
    k: usize,
    /// Sorted by bit mask.
    all: Vec<u64>,
    surviving: Vec<bool>,
}

impl ConfigSpace {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.all.len()
    }

    pub fn is_empty(&self) -> bool {
        self.all.is_empty()
    }

    pub fn configs(&self) -> impl Iterator<Item = VertexSet> + '_ {
        self.all.iter().map(|&b| VertexSet(b))
    }

    pub fn surviving(&self) -> impl Iterator<Item = VertexSet> + '_ {
        self.all.iter().zip(&self.surviving).filter(|(_, &s)| s).map(|(&b, _)| VertexSet(b))
    }

    pub fn surviving_count(&self) -> usize {
        self.surviving.iter().filter(|&&s| s).count()
    }

    fn index(&self, x: u64) -> Option<usize> {
        self.all.binary_search(&x).ok()
    }

    pub fn contains(&self, x: VertexSet) -> bool {
        self.index(x.0).is_some()
    }

    pub fn is_surviving(&self, x: VertexSet) -> bool {
        self.index(x.0).is_some_and(|i| self.surviving[i])
    }
}

fn check_k(g: &Graph, k: usize) -> Result<(), EternalError> {
    if k == 0 || k > g.order() {
        return Err(EternalError::InvalidGuardCount { k, n: g.order() });
    }
    Ok(())
}

/// All dominating `k`-sets, refusing more than `cap`.
pub fn dominating_sets_of_size_capped(g: &Graph, k: usize, cap: usize) -> Result<ConfigSpace, EternalError> {
    check_k(g, k)?;
    let n = g.order();
    let full = g.vertices().0;
    let closed: Vec<u64> = (0..n).map(|v| g.closed_neighbours(v).0).collect();
    let mut all = Vec::new();
    // Gosper's hack walks k-subsets in increasing numeric order
    let mut x: u64 = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    loop {
        let mut dom = 0u64;
        let mut bits = x;
        while bits != 0 {
            dom |= closed[bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        if dom == full {
            if all.len() == cap {
                return Err(EternalError::BudgetExceeded { k, count: cap + 1, cap });
            }
            all.push(x);
        }
        let c = x & x.wrapping_neg();
        let r = x.wrapping_add(c);
        if r == 0 || r & !full != 0 {
            break;
        }
        x = (((r ^ x) >> 2) / c) | r;
        if x & !full != 0 {
            break;
        }
    }
    let surviving = vec![true; all.len()];
    Ok(ConfigSpace { k, all, surviving })
}

/// All dominating `k`-sets under [`DEFAULT_CONFIG_CAP`].
pub fn dominating_sets_of_size(g: &Graph, k: usize) -> Result<ConfigSpace, EternalError> {
    dominating_sets_of_size_capped(g, k, DEFAULT_CONFIG_CAP)
}

/// Can `x`'s attack on `a` be answered inside the surviving family?
fn answers(g: &Graph, space: &ConfigSpace, x: u64, a: usize) -> bool {
    let movers = g.neighbours(a).0 & x;
    let mut bits = movers;
    while bits != 0 {
        let w = bits.trailing_zeros();
        bits &= bits - 1;
        let y = (x & !(1u64 << w)) | 1u64 << a;
        if space.is_surviving(VertexSet(y)) {
            return true;
        }
    }
    false
}

fn defends_all(g: &Graph, space: &ConfigSpace, x: u64) -> bool {
    let mut open = g.vertices().0 & !x;
    while open != 0 {
        let a = open.trailing_zeros() as usize;
        open &= open - 1;
        if !answers(g, space, x, a) {
            return false;
        }
    }
    true
}

/// Shrinks the surviving family to the greatest self-defending subfamily.
pub fn prune_to_eternal(g: &Graph, mut space: ConfigSpace) -> ConfigSpace {
    let m = space.all.len();
    let mut queued = vec![true; m];
    let mut queue: VecDeque<usize> = (0..m).collect();
    while let Some(i) = queue.pop_front() {
        queued[i] = false;
        if !space.surviving[i] {
            continue;
        }
        let x = space.all[i];
        if defends_all(g, &space, x) {
            continue;
        }
        space.surviving[i] = false;
        // configurations that could answer an attack by moving into x:
        // z = x - a + w with a ∈ x, w ∉ x, w ~ a
        let mut guards = x;
        while guards != 0 {
            let a = guards.trailing_zeros() as usize;
            guards &= guards - 1;
            let mut from = g.neighbours(a).0 & !x;
            while from != 0 {
                let w = from.trailing_zeros();
                from &= from - 1;
                let z = (x & !(1u64 << a)) | 1u64 << w;
                if let Some(j) = space.index(z) {
                    if space.surviving[j] && !queued[j] {
                        queued[j] = true;
                        queue.push_back(j);
                    }
                }
            }
        }
    }
    space
}

/// Does some configuration of `k` guards defend forever?
pub fn can_defend(g: &Graph, k: usize) -> Result<bool, EternalError> {
    can_defend_capped(g, k, DEFAULT_CONFIG_CAP)
}

pub fn can_defend_capped(g: &Graph, k: usize, cap: usize) -> Result<bool, EternalError> {
    let space = prune_to_eternal(g, dominating_sets_of_size_capped(g, k, cap)?);
    Ok(space.surviving_count() > 0)
}

/// γ∞ of a connected graph, given its independence and clique cover numbers.
pub fn eternal_domination_number_connected(
    g: &Graph,
    alpha: usize,
    theta: usize,
    cap: usize,
) -> Result<usize, EternalError> {
    for k in alpha..theta {
        if can_defend_capped(g, k, cap)? {
            return Ok(k);
        }
    }
    Ok(theta)
}

/// γ∞(g), summed over connected components.
pub fn eternal_domination_number(g: &Graph) -> Result<usize, EternalError> {
    let mut total = 0;
    for comp in g.connected_components() {
        let h = g.induced_subgraph(comp).expect("component lies in the graph");
        let alpha = independence_number(&h);
        let theta = clique_cover_number(&h);
        total += eternal_domination_number_connected(&h, alpha, theta, DEFAULT_CONFIG_CAP)?;
    }
    Ok(total)
}

/// Is `d` an eternal dominating set for `|d|` guards?
pub fn is_eternal_dominating_set(g: &Graph, d: VertexSet) -> Result<bool, EternalError> {
    if !d.is_subset(g.vertices()) || !g.is_dominating_set(d) {
        return Err(EternalError::NotDominating(d));
    }
    let space = prune_to_eternal(g, dominating_sets_of_size(g, d.len())?);
    Ok(space.is_surviving(d))
}

/// The defender's answer to an attack: the lowest-index guard whose move
/// keeps the configuration in the surviving family.
pub fn defense_move(g: &Graph, space: &ConfigSpace, current: VertexSet, attack: usize) -> Result<VertexSet, EternalError> {
    if current.contains(attack) {
        return Err(EternalError::AttackOnGuard(attack));
    }
    if !space.is_surviving(current) {
        return Err(EternalError::NotSurviving(current));
    }
    for w in g.neighbours(attack) & current {
        let y = current.without(w).with(attack);
        if space.is_surviving(y) {
            return Ok(y);
        }
    }
    unreachable!("surviving configurations answer every attack")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    fn g1() -> Graph {
        // u0..u4 with edges u1u2, u4u3, u0u1, u3u2, u1u4, u0u4
        Graph::from_edges(5, &[(1, 2), (4, 3), (0, 1), (3, 2), (1, 4), (0, 4)]).unwrap()
    }

    #[test]
    fn dominating_spaces() {
        let c5 = Graph::cycle(5).unwrap();
        let s = dominating_sets_of_size(&c5, 2).unwrap();
        assert_eq!(s.len(), 5);
        assert!(s.configs().all(|x| c5.is_dominating_set(x)));
        assert_eq!(dominating_sets_of_size(&Graph::complete(3).unwrap(), 1).unwrap().len(), 3);
        assert!(dominating_sets_of_size(&c5, 1).unwrap().is_empty());
        assert_eq!(dominating_sets_of_size(&c5, 5).unwrap().len(), 1);
        assert!(matches!(dominating_sets_of_size(&c5, 0), Err(EternalError::InvalidGuardCount { .. })));
        assert!(matches!(dominating_sets_of_size(&c5, 6), Err(EternalError::InvalidGuardCount { .. })));
        assert!(matches!(
            dominating_sets_of_size_capped(&c5, 3, 4),
            Err(EternalError::BudgetExceeded { cap: 4, .. })
        ));
    }

    #[test]
    fn c5_needs_three() {
        let c5 = Graph::cycle(5).unwrap();
        let two = prune_to_eternal(&c5, dominating_sets_of_size(&c5, 2).unwrap());
        assert_eq!(two.surviving_count(), 0);
        let three = prune_to_eternal(&c5, dominating_sets_of_size(&c5, 3).unwrap());
        assert!(three.surviving_count() > 0);
        assert!(!can_defend(&c5, 2).unwrap());
        assert!(can_defend(&c5, 3).unwrap());
        assert_eq!(eternal_domination_number(&c5).unwrap(), 3);
    }

    #[test]
    fn complete_graphs() {
        for n in 1..=6 {
            let k = Graph::complete(n).unwrap();
            let s = prune_to_eternal(&k, dominating_sets_of_size(&k, 1).unwrap());
            assert_eq!(s.surviving_count(), n);
            assert_eq!(eternal_domination_number(&k).unwrap(), 1);
        }
    }

    #[test]
    fn additive_over_components() {
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(eternal_domination_number(&k3.disjoint_union(&k3).unwrap()).unwrap(), 2);
        assert_eq!(eternal_domination_number(&Graph::empty(4).unwrap()).unwrap(), 4);
    }

    #[test]
    fn g1_sets() {
        let g = g1();
        assert!(!is_eternal_dominating_set(&g, set(&[1, 4])).unwrap());
        assert!(is_eternal_dominating_set(&g, set(&[0, 2])).unwrap());
        assert_eq!(eternal_domination_number(&g).unwrap(), 2);
        assert!(matches!(is_eternal_dominating_set(&g, set(&[0])), Err(EternalError::NotDominating(_))));
        let k3 = Graph::complete(3).unwrap();
        assert!(is_eternal_dominating_set(&k3, set(&[0])).unwrap());
    }

    #[test]
    fn defense_moves() {
        let k3 = Graph::complete(3).unwrap();
        let s = prune_to_eternal(&k3, dominating_sets_of_size(&k3, 1).unwrap());
        assert_eq!(defense_move(&k3, &s, set(&[0]), 2).unwrap(), set(&[2]));
        assert_eq!(defense_move(&k3, &s, set(&[0]), 0), Err(EternalError::AttackOnGuard(0)));

        let c5 = Graph::cycle(5).unwrap();
        let s = prune_to_eternal(&c5, dominating_sets_of_size(&c5, 3).unwrap());
        assert!(s.is_surviving(set(&[0, 1, 3])));
        let next = defense_move(&c5, &s, set(&[0, 1, 3]), 4).unwrap();
        assert!(next.contains(4) && s.is_surviving(next));
        // lowest-index guard adjacent to 4 is 0; moving it leaves {1,3,4}
        assert_eq!(next, set(&[1, 3, 4]));
    }
}
