mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::*;
use edom_core::constructions::{bowtie, circulant, CirculantSpec};
use edom_core::eternal::{defense_move, dominating_sets_of_size, eternal_domination_number, prune_to_eternal};
use edom_core::generate::generate_all;
use edom_core::graph6::{decode, encode};
use edom_core::invariants::{
    clique_cover_number, domination_number, independence_number, maximum_matching, minimum_dominating_sets,
};
use edom_core::{are_isomorphic, canonical_form, generate_connected, Constraint, Graph};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
            let edges: Vec<_> = pairs.zip(bits).filter(|(_, on)| *on).map(|(e, _)| e).collect();
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn canonical_form_ignores_labels(g in graph_strategy(14), seed in any::<u64>()) {
        let mut perm: Vec<usize> = (0..g.order()).collect();
        let mut rng = StdRng::seed_from_u64(seed);
        for i in (1..perm.len()).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let h = g.relabel(&perm);
        prop_assert_eq!(canonical_form(&g), canonical_form(&h));
    }

    #[test]
    fn graph6_round_trips(g in graph_strategy(40)) {
        prop_assert_eq!(decode(&encode(&g).unwrap()).unwrap(), g);
    }
}

#[test]
fn generator_matches_hashing_oracle() {
    for n in 1..=8 {
        let all = all_graphs_by_hashing(n);
        let forms = |gs: &[Graph]| gs.iter().map(canonical_form).collect::<BTreeSet<_>>();
        assert_eq!(forms(&generate_all(n, Constraint::All).unwrap()), forms(&all), "all graphs n={n}");
        for c in [Constraint::All, Constraint::TriangleFree, Constraint::MaximalTriangleFree, Constraint::Cubic] {
            let want: Vec<Graph> = all.iter().filter(|g| g.is_connected() && c.holds(g)).cloned().collect();
            let got = generate_connected(n, c).unwrap();
            assert_eq!(got.len(), want.len(), "{} n={n}", c.name());
            assert_eq!(forms(&got), forms(&want), "{} n={n}", c.name());
        }
    }
}

#[test]
fn matching_matches_brute_force() {
    for n in 1..=7 {
        for g in generate_all(n, Constraint::All).unwrap().into_iter().filter(|g| g.edge_count() <= 12) {
            assert_eq!(maximum_matching(&g), matching_brute_force(&g), "{}", encode(&g).unwrap());
        }
    }
}

#[test]
fn domination_matches_subset_search() {
    for n in 1..=7 {
        for g in generate_all(n, Constraint::All).unwrap() {
            let best = (0u64..1 << n)
                .filter(|&m| g.is_dominating_set(edom_core::VertexSet(m)))
                .map(|m| m.count_ones() as usize)
                .min()
                .unwrap();
            assert_eq!(domination_number(&g), best, "{}", encode(&g).unwrap());
            let sets = minimum_dominating_sets(&g);
            assert!(sets.iter().all(|s| s.len() == best && g.is_dominating_set(*s)));
        }
    }
}

#[test]
fn game_tree_agrees_on_disconnected_graphs() {
    for n in 1..=5 {
        for g in generate_all(n, Constraint::All).unwrap() {
            assert_eq!(eternal_domination_number(&g).unwrap(), gamma_inf_game_tree(&g), "{}", encode(&g).unwrap());
        }
    }
}

#[test]
fn smallest_graphs_with_gamma_inf_below_theta() {
    for s in ["IEhbtj{ro", "IEhbtn{ro"] {
        let g = decode(s).unwrap();
        assert_eq!(gamma_inf_game_tree(&g), 3, "{s}");
        assert_eq!(clique_cover_number(&g), 4, "{s}");
    }
}

#[test]
fn defence_never_runs_out() {
    let mut rng = StdRng::seed_from_u64(7);
    for s in ["IEhbtj{ro", "DUW", "FCxv?"] {
        let g = decode(s).unwrap();
        let k = eternal_domination_number(&g).unwrap();
        let space = prune_to_eternal(&g, dominating_sets_of_size(&g, k).unwrap());
        let starts: Vec<_> = space.surviving().collect();
        let mut current = starts[rng.gen_range(0..starts.len())];
        for _ in 0..1000 {
            let open: Vec<usize> = (g.vertices() & !current).iter().collect();
            if open.is_empty() {
                break;
            }
            let attack = open[rng.gen_range(0..open.len())];
            current = defense_move(&g, &space, current, attack).unwrap();
            assert!(current.contains(attack) && space.is_surviving(current));
        }
    }
}

#[test]
fn named_dominating_set_fails_on_house_family() {
    for k in [3, 4, 5] {
        let (g, d) = house_with_tail(k);
        assert_eq!(g.order(), 5 + 2 * (k - 2));
        assert_eq!(independence_number(&g), k);
        assert!(!edom_core::eternal::is_eternal_dominating_set(&g, d).unwrap());
    }
}

#[test]
fn bowtie_with_k2_is_a_doubled_circulant() {
    // (v, j) -> v + jn
    let k2 = Graph::complete(2).unwrap();
    for (n, keys) in [(13, vec![1, 3, 4]), (13, vec![1, 2, 3, 5]), (9, vec![2]), (6, vec![1, 3])] {
        let spec = CirculantSpec::new(n, keys).unwrap();
        let offsets: Vec<usize> = spec.keys().iter().flat_map(|&k| [k, n - k]).collect();
        let target = CirculantSpec::from_offsets(2 * n, &offsets).unwrap();
        assert!(are_isomorphic(&bowtie(&circulant(&spec), &k2).unwrap(), &circulant(&target)), "{spec}");
    }
    // twins (v,0), (v,1) rule out the interleaved reading
    let product = bowtie(&circulant(&CirculantSpec::new(13, vec![1, 3, 4]).unwrap()), &k2).unwrap();
    let interleaved = circulant(&CirculantSpec::new(26, vec![2, 3, 6, 7, 8, 9]).unwrap());
    let has_twins = |g: &Graph| (0..g.order()).any(|a| (a + 1..g.order()).any(|b| g.neighbours(a) == g.neighbours(b)));
    assert!(has_twins(&product));
    assert!(!has_twins(&interleaved));
}
