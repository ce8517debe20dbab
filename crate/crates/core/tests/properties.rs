use std::sync::Arc;

use proptest::prelude::*;

use catml::category::Budget;
use catml::fincat::{check_category_laws, free_category, quotient_by_paths, Certification, PathSpec};
use catml::finset::{pullback, verify_limit_cone, FinSetMap, FinSetObj};
use catml::foundations::{equiv_refines, DiGraph, EquivRelation};
use catml::mlsys::{entity, merge_entities, order_map, MLSystem, Merge, PartialGroupoid};
use catml::presheaf::yoneda_embed;

fn partition(keys: &[usize]) -> EquivRelation {
    let carrier: Vec<String> = (0..keys.len()).map(|i| format!("e{i}")).collect();
    EquivRelation::by_key(&carrier, |x| keys[x[1..].parse::<usize>().unwrap()])
}

/// Random partition keys for `n` elements, with two successive coarsenings.
fn chain_of_partitions() -> impl Strategy<Value = (Vec<usize>, Vec<usize>, Vec<usize>)> {
    (1..=6usize).prop_flat_map(|n| {
        (prop::collection::vec(0..n, n), prop::collection::vec(0..n, n), prop::collection::vec(0..n, n))
            .prop_map(|(k1, m2, m3)| {
                let k2: Vec<usize> = k1.iter().map(|&k| m2[k]).collect();
                let k3: Vec<usize> = k2.iter().map(|&k| m3[k]).collect();
                (k1, k2, k3)
            })
    })
}

/// Acyclic graph on up to 4 nodes: edges only go up in index.
fn dag() -> impl Strategy<Value = DiGraph> {
    (1..=4usize).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..6).prop_map(move |pairs| {
            let nodes: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let edges: Vec<(String, String, String)> = pairs
                .iter()
                .enumerate()
                .filter(|(_, (a, b))| a < b)
                .map(|(i, (a, b))| (format!("e{i}"), nodes[*a].clone(), nodes[*b].clone()))
                .collect();
            let refs: Vec<&str> = nodes.iter().map(|s| s.as_str()).collect();
            let e: Vec<(&str, &str, &str)> = edges.iter().map(|(i, a, b)| (i.as_str(), a.as_str(), b.as_str())).collect();
            DiGraph::from_parts(&refs, &e).unwrap()
        })
    })
}

/// Paths from `a` to `b`, counted by dynamic programming over the node order.
fn count_paths(g: &DiGraph, a: usize, b: usize) -> usize {
    let n = g.nodes().len();
    let mut ways = vec![0usize; n];
    ways[a] = 1;
    for v in a..n {
        for e in g.out_edges(&g.nodes()[v]) {
            ways[g.node_pos(&e.dst).unwrap()] += ways[v];
        }
    }
    ways[b]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn refinement_is_a_preorder((k1, k2, k3) in chain_of_partitions()) {
        let (a, b, c) = (partition(&k1), partition(&k2), partition(&k3));
        prop_assert!(equiv_refines(&a, &a).unwrap());
        prop_assert!(equiv_refines(&a, &b).unwrap() && equiv_refines(&b, &c).unwrap());
        prop_assert!(equiv_refines(&a, &c).unwrap());
        let carrier: Vec<String> = a.carrier().iter().cloned().collect();
        prop_assert!(equiv_refines(&EquivRelation::discrete(&carrier), &a).unwrap());
        prop_assert!(equiv_refines(&a, &EquivRelation::indiscrete(&carrier, None).unwrap()).unwrap());
    }

    #[test]
    fn order_maps_compose((k1, k2, k3) in chain_of_partitions(), edges in prop::collection::vec((0..6usize, 0..6usize), 0..8)) {
        let n = k1.len();
        let nodes: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
        let es: Vec<(String, String, String)> = edges
            .iter()
            .enumerate()
            .filter(|(_, (a, b))| *a < n && *b < n)
            .map(|(i, (a, b))| (format!("r{i}"), nodes[*a].clone(), nodes[*b].clone()))
            .collect();
        let refs: Vec<&str> = nodes.iter().map(|s| s.as_str()).collect();
        let e: Vec<(&str, &str, &str)> = es.iter().map(|(i, a, b)| (i.as_str(), a.as_str(), b.as_str())).collect();
        let s = Arc::new(MLSystem::relation(DiGraph::from_parts(&refs, &e).unwrap()));
        let (a, b, c) = (partition(&k1), partition(&k2), partition(&k3));
        let budget = Budget::default();
        let ab = order_map(&s, &a, &b, budget).unwrap();
        let bc = order_map(&s, &b, &c, budget).unwrap();
        let ac = order_map(&s, &a, &c, budget).unwrap();
        prop_assert!(ab.passed() && bc.passed() && ac.passed());
        prop_assert!(ab.map.then(&bc.map).unwrap().agrees_with(&ac.map));
        // ρ ≤ ρ gives the identity
        let aa = order_map(&s, &a, &a, budget).unwrap();
        let em = aa.map.element_map();
        prop_assert!(em.iter().all(|(x, y)| x == y));
    }

    #[test]
    fn record_merges_commute_and_associate(sets in prop::collection::vec(1u8..16, 3)) {
        let universe = ["a", "b", "c", "d"];
        let all: Vec<Vec<&str>> = (1u8..16)
            .map(|m| universe.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, x)| *x).collect())
            .collect();
        let p = PartialGroupoid::record_sets(&all).unwrap();
        let ent = |m: u8| entity(&all[m as usize - 1]);
        let (x, y, z) = (ent(sets[0]), ent(sets[1]), ent(sets[2]));
        prop_assert_eq!(merge_entities(&p, &x, &y).unwrap(), merge_entities(&p, &y, &x).unwrap());
        let overlap = |a: u8, b: u8| a & b != 0;
        prop_assert_eq!(matches!(merge_entities(&p, &x, &y).unwrap(), Merge::Merged(_)), overlap(sets[0], sets[1]));
        if let (Merge::Merged(xy), Merge::Merged(yz)) = (merge_entities(&p, &x, &y).unwrap(), merge_entities(&p, &y, &z).unwrap()) {
            let left = merge_entities(&p, &xy, &z).unwrap();
            let right = merge_entities(&p, &x, &yz).unwrap();
            // both sides are defined: y meets z, and xy contains y
            prop_assert_eq!(&left, &right);
            prop_assert_eq!(left, Merge::Merged(ent(sets[0] | sets[1] | sets[2])));
        }
    }

    #[test]
    fn pullback_counts_fiberwise(p in prop::collection::vec(0..4usize, 0..=5), r in prop::collection::vec(0..4usize, 0..=5)) {
        let base = FinSetObj::range(4);
        let pm = FinSetMap::new(FinSetObj::range(p.len()), base.clone(), p.clone()).unwrap();
        let rm = FinSetMap::new(FinSetObj::range(r.len()), base, r.clone()).unwrap();
        let pb = pullback(&pm, &rm).unwrap();
        let oracle: usize = (0..4).map(|b| p.iter().filter(|&&x| x == b).count() * r.iter().filter(|&&x| x == b).count()).sum();
        prop_assert_eq!(pb.apex.len(), oracle);
        prop_assert!(verify_limit_cone(&pb.diagram().unwrap(), &pb.cone().unwrap(), Budget::default()).unwrap().passed());
    }

    #[test]
    fn free_category_on_a_dag(g in dag()) {
        let c = Arc::new(free_category(&g, 4).unwrap());
        prop_assert_eq!(c.certification(), Certification::Exact);
        prop_assert!(check_category_laws(&c).passed());
        for x in c.object_ids() {
            for y in c.object_ids() {
                prop_assert_eq!(c.hom_set(x, y).unwrap().len(), count_paths(&g, x.0, y.0));
            }
        }
        let (_, rep) = yoneda_embed(&c, Budget::default()).unwrap();
        prop_assert!(rep.passed());
        prop_assert!(rep.pairs.iter().all(|p| p.nat == p.hom));
    }

    /// `l^k = l^j` presents the cyclic monoid with index `j` and period `k - j`.
    #[test]
    fn cyclic_monoids_are_certified(k in 2..=5usize, j in 0..5usize) {
        prop_assume!(j < k);
        let g = DiGraph::from_parts(&["*"], &[("l", "*", "*")]).unwrap();
        let c = Arc::new(free_category(&g, k).unwrap());
        let rel = (PathSpec::new("*", &vec!["l"; k]), PathSpec::new("*", &vec!["l"; j]));
        let (q, _) = quotient_by_paths(&c, &[rel]).unwrap();
        prop_assert_eq!(q.certification(), Certification::Exact);
        prop_assert_eq!(q.num_morphisms(), k);
        prop_assert!(check_category_laws(&q).passed());
        let long = q.mor_by_path(&PathSpec::new("*", &vec!["l"; k + (k - j)])).unwrap();
        prop_assert_eq!(long, q.mor_by_path(&PathSpec::new("*", &vec!["l"; k])).unwrap());
    }
}
