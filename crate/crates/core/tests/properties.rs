use std::collections::{BTreeSet, HashSet};
use std::ops::ControlFlow;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use itrans_core::bitset::VertexSet;
use itrans_core::constructions::{random_bipartite, random_multipartite, random_regular_bipartite};
use itrans_core::critical::{criticalize, is_critical};
use itrans_core::graph::{Edge, MultipartiteGraph};
use itrans_core::imc::{decompose_bipartite_union, extract_pit, find_imc_containing_edge, verify_imc};
use itrans_core::solver::{count_its, count_its_naive, find_blowup_it, find_it, find_kss, for_each_it};

fn small_graph() -> impl Strategy<Value = MultipartiteGraph> {
    (prop::collection::vec(1usize..=4, 2..=4), 0.0f64..1.0, any::<u64>())
        .prop_map(|(sizes, p, seed)| random_multipartite(&sizes, p, seed))
}

fn dense_graph() -> impl Strategy<Value = MultipartiteGraph> {
    (prop::collection::vec(1usize..=3, 2..=4), 0.6f64..1.0, any::<u64>())
        .prop_map(|(sizes, p, seed)| random_multipartite(&sizes, p, seed))
}

/// Disjoint union of `r - 1` complete bipartite blocks, scattered over `r`
/// parts at random.
fn bipartite_union(r: usize, seed: u64) -> MultipartiteGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    let mut next = 0;
    for _ in 0..r - 1 {
        let (a, b) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        for u in next..next + a {
            for v in next + a..next + a + b {
                edges.push((u, v));
            }
        }
        next += a + b;
    }
    let mut order: Vec<usize> = (0..next).collect();
    order.shuffle(&mut rng);
    let mut parts = vec![Vec::new(); r];
    for (i, &v) in order.iter().enumerate() {
        let p = if i < r { i } else { rng.gen_range(0..r) };
        parts[p].push(v);
    }
    MultipartiteGraph::new(parts, &edges).unwrap()
}

fn kss_exists_naive(b: &MultipartiteGraph, s: usize) -> bool {
    fn subsets(items: &[usize], s: usize) -> Vec<Vec<usize>> {
        if s == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for i in 0..items.len() {
            for mut rest in subsets(&items[i + 1..], s - 1) {
                rest.insert(0, items[i]);
                out.push(rest);
            }
        }
        out
    }
    let left = subsets(b.part(0), s);
    let right = subsets(b.part(1), s);
    left.iter().any(|l| {
        right
            .iter()
            .any(|r| l.iter().all(|&u| r.iter().all(|&v| b.has_edge(u, v))))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn complement_is_involution(g in small_graph()) {
        prop_assert_eq!(g.multipartite_complement().multipartite_complement(), g.clone());
        let c = g.multipartite_complement();
        for e in g.edges() {
            prop_assert!(!c.has_edge(e.0, e.1));
        }
    }

    #[test]
    fn serialize_round_trip(g in small_graph()) {
        let text = g.serialize();
        let back = MultipartiteGraph::deserialize(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(back.serialize(), text);
    }

    #[test]
    fn count_matches_naive(g in small_graph()) {
        prop_assert_eq!(count_its(&g), count_its_naive(&g));
    }

    #[test]
    fn deleting_edges_never_lowers_count(g in small_graph(), pick in any::<prop::sample::Index>()) {
        let edges = g.edges();
        prop_assume!(!edges.is_empty());
        let e = edges[pick.index(edges.len())];
        prop_assert!(count_its(&g.without_edge(e)) >= count_its(&g));
    }

    #[test]
    fn find_agrees_with_count(g in small_graph()) {
        let found = find_it(&g);
        prop_assert_eq!(found.is_some(), count_its(&g) > 0);
        if let Some(t) = found {
            prop_assert!(t.is_valid(&g));
        }
    }

    #[test]
    fn enumeration_is_exact(g in small_graph()) {
        let mut seen = HashSet::new();
        let finished = for_each_it(&g, |t| {
            assert!(t.is_valid(&g));
            assert!(seen.insert(t.clone()));
            ControlFlow::Continue(())
        });
        prop_assert!(finished);
        prop_assert_eq!(seen.len() as u128, count_its(&g));
    }

    #[test]
    fn blowup_of_one_is_an_it(g in small_graph()) {
        let b = find_blowup_it(&g, 1).unwrap();
        prop_assert_eq!(b.is_some(), find_it(&g).is_some());
        if let Some(b) = find_blowup_it(&g, 2).unwrap() {
            prop_assert!(b.is_valid(&g, 2));
        }
    }

    #[test]
    fn pit_from_found_imcs(g in dense_graph(), pick in any::<prop::sample::Index>()) {
        let edges: Vec<Edge> = g.edges().into_iter().filter(|&(u, v)| g.part_of(u) != g.part_of(v)).collect();
        prop_assume!(!edges.is_empty());
        let e = edges[pick.index(edges.len())];
        if let Some(imc) = find_imc_containing_edge(&g, e) {
            prop_assert!(verify_imc(&g, imc.pairs()).is_ok());
            prop_assert!(imc.canonical().iter().any(|&(a, b)| (a.min(b), a.max(b)) == e));
            for q in 0..g.r() {
                let pit = extract_pit(&g, &imc, q).unwrap();
                prop_assert_eq!(pit.check(&g), Ok(()));
            }
        }
    }

    #[test]
    fn decompose_rebuilds_unions(r in 2usize..=5, seed in any::<u64>()) {
        let g = bipartite_union(r, seed);
        let ps = decompose_bipartite_union(&g).unwrap();
        prop_assert_eq!(ps.len(), r - 1);
        prop_assert!(ps.is_well_formed());
        prop_assert_eq!(ps.union_edges(), g.edges());
        for e in g.edges() {
            prop_assert!(decompose_bipartite_union(&g.without_edge(e)).is_err());
        }
    }

    #[test]
    fn kss_matches_naive(n in 1usize..=6, p in 0.3f64..1.0, seed in any::<u64>(), s in 1usize..=3) {
        let b = random_bipartite(n, p, seed);
        let found = find_kss(&b, s).unwrap();
        prop_assert_eq!(found.is_some(), kss_exists_naive(&b, s));
        if let Some(k) = found {
            prop_assert_eq!(k.left.len(), s);
            prop_assert_eq!(k.right.len(), s);
            for u in k.left.iter() {
                prop_assert_eq!(b.part_of(u), 0);
                for v in k.right.iter() {
                    prop_assert!(b.has_edge(u, v));
                }
            }
        }
    }

    #[test]
    fn regular_bipartite_is_regular(n in 1usize..=12, d_frac in 0.0f64..=1.0, seed in any::<u64>()) {
        let d = (d_frac * n as f64).round() as usize;
        let h = random_regular_bipartite(n, d, seed).unwrap();
        prop_assert_eq!(h.r(), 2);
        prop_assert_eq!(h.min_degree(), d);
        prop_assert_eq!(h.max_degree(), d);
        prop_assert!(h.is_multipartite());
        prop_assert_eq!(&h, &random_regular_bipartite(n, d, seed).unwrap());
    }

    #[test]
    fn criticalize_gives_critical_subgraph(g in dense_graph()) {
        prop_assume!(find_it(&g).is_none());
        let (out, rep) = criticalize(&g).unwrap();
        prop_assert!(rep.is_critical);
        prop_assert!(is_critical(&out).is_critical);
        prop_assert!(find_it(&out).is_none());
        let kept: BTreeSet<Edge> = out.edges().into_iter().collect();
        prop_assert!(kept.iter().all(|&(u, v)| g.has_edge(u, v)));
        prop_assert_eq!(kept.len() + rep.removed_edges.len(), g.edge_count());
        for w in &rep.per_edge_witness {
            prop_assert!(w.transversal.is_valid(&out.without_edge(w.edge)));
        }
    }

    #[test]
    fn bitset_matches_btreeset(
        a in prop::collection::btree_set(0usize..130, 0..40),
        b in prop::collection::btree_set(0usize..130, 0..40),
    ) {
        let sa = VertexSet::from_iter_in(130, a.iter().copied());
        let sb = VertexSet::from_iter_in(130, b.iter().copied());
        prop_assert_eq!(sa.to_vec(), a.iter().copied().collect::<Vec<_>>());
        prop_assert_eq!(sa.intersection(&sb).to_vec(), a.intersection(&b).copied().collect::<Vec<_>>());
        prop_assert_eq!(sa.difference(&sb).to_vec(), a.difference(&b).copied().collect::<Vec<_>>());
        let mut u = sa.clone();
        u.union_with(&sb);
        prop_assert_eq!(u.to_vec(), a.union(&b).copied().collect::<Vec<_>>());
        prop_assert_eq!(sa.intersection_len(&sb), a.intersection(&b).count());
        prop_assert_eq!(sa.is_subset(&sb), a.is_subset(&b));
        prop_assert_eq!(sa.complement().len(), 130 - a.len());
    }
}
