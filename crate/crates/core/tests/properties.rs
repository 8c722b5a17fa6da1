use std::collections::BTreeSet;

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use surfsplit::decomp::{compute_middle_sets, BranchDecomposition};
use surfsplit::engine::{engine, ENGINES};
use surfsplit::generators;
use surfsplit::iso::canonical_form;
use surfsplit::layered::{count_isomorphs, list_isomorphs};
use surfsplit::oracle::{binomial, brute_count, brute_list};
use surfsplit::ssd::construct_ssd;
use surfsplit::{Graph, Map, Subgraph};

fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::new(n, edges.to_vec()).unwrap()
}

fn patterns() -> Vec<Graph> {
    vec![
        graph(2, &[(0, 1)]),
        graph(3, &[(0, 1), (1, 2)]),
        graph(3, &[(0, 1), (1, 2), (2, 0)]),
        graph(4, &[(0, 1), (1, 2), (2, 3)]),
        graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]),
        graph(4, &[(0, 1), (0, 2), (0, 3)]),
        graph(4, &[(0, 1), (2, 3)]),
        graph(5, &[(0, 1), (2, 3), (3, 4), (4, 2)]),
        graph(6, &[(0, 1), (2, 3), (4, 5)]),
    ]
}

/// A small random host of genus at most two.
fn host(seed: u64) -> Map {
    let mut rng = StdRng::seed_from_u64(seed);
    match seed % 3 {
        0 => generators::random_planar(11, &mut rng),
        1 => generators::random_toroidal(11, &mut rng),
        _ => generators::random_surface(8, 3, 2, &mut rng),
    }
}

fn with_isolated(p: &Graph, t: usize) -> Graph {
    Graph::new(p.vertex_count() + t, p.edges().to_vec()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn count_equals_oracle(seed in any::<u64>(), pick in 0usize..9, induced in any::<bool>()) {
        let map = host(seed);
        let p = &patterns()[pick];
        let root = seed as usize % map.vertex_count();
        let (got, _) = count_isomorphs(&map, root, p, induced).unwrap();
        prop_assert_eq!(got, brute_count(&map.underlying(), p, induced));
    }

    #[test]
    fn listing_is_the_oracle_set(seed in any::<u64>(), pick in 0usize..9, induced in any::<bool>()) {
        let map = host(seed);
        let p = &patterns()[pick];
        let (list, _) = list_isomorphs(&map, 0, p, induced, 0).unwrap();
        let set: BTreeSet<Subgraph> = list.iter().cloned().collect();
        prop_assert_eq!(set.len(), list.len());
        let (count, _) = count_isomorphs(&map, 0, p, induced).unwrap();
        prop_assert_eq!(BigUint::from(list.len()), count);
        prop_assert_eq!(set, brute_list(&map.underlying(), p, induced));
    }

    #[test]
    fn isolated_vertices_multiply_by_a_binomial(seed in any::<u64>(), pick in 0usize..6, t in 1usize..3) {
        let map = host(seed);
        let p = &patterns()[pick];
        let n = map.vertex_count();
        let (base, _) = count_isomorphs(&map, 0, p, false).unwrap();
        let (padded, _) = count_isomorphs(&map, 0, &with_isolated(p, t), false).unwrap();
        prop_assert_eq!(padded, base * binomial(n.saturating_sub(p.vertex_count()), t));
    }

    #[test]
    fn count_does_not_depend_on_the_root(seed in any::<u64>(), pick in 0usize..9) {
        let map = host(seed);
        let p = &patterns()[pick];
        let first = count_isomorphs(&map, 0, p, false).unwrap().0;
        let last = count_isomorphs(&map, map.vertex_count() - 1, p, false).unwrap().0;
        prop_assert_eq!(first, last);
    }

    #[test]
    fn engines_agree(seed in any::<u64>(), pick in 0usize..9) {
        let map = host(seed);
        let p = &patterns()[pick];
        let counts: Vec<BigUint> = ENGINES.iter().map(|e| engine(e, 0).unwrap().count(&map, p, true).unwrap()).collect();
        prop_assert!(counts.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn map_text_round_trips(seed in any::<u64>()) {
        let map = host(seed);
        let again = Map::parse(&map.to_text()).unwrap();
        prop_assert_eq!(again.to_text(), map.to_text());
        prop_assert_eq!(again.genus().unwrap(), map.genus().unwrap());
    }

    #[test]
    fn ssd_is_a_decomposition_within_its_bound(seed in any::<u64>()) {
        let map = host(seed);
        let root = seed as usize % map.vertex_count();
        let ssd = construct_ssd(&map, root).unwrap();
        prop_assert!(ssd.width() <= ssd.bound());
        prop_assert_eq!(ssd.bd.host_edge_count(), map.edge_count());
        let text = ssd.bd.to_text(Some(&ssd.mids));
        let (bd, _) = BranchDecomposition::parse_annotated(&text).unwrap();
        prop_assert_eq!(&bd, &ssd.bd);
        let mids = compute_middle_sets(&bd, &map.underlying()).unwrap();
        prop_assert_eq!(mids.width(), ssd.width());
    }

    #[test]
    fn relabeling_keeps_counts(seed in any::<u64>(), pick in 0usize..9) {
        let map = host(seed);
        let n = map.vertex_count();
        let perm: Vec<usize> = (0..n).map(|v| (v + seed as usize) % n).rev().collect();
        let moved = generators::relabel(&map, &perm);
        let p = &patterns()[pick];
        prop_assert_eq!(
            count_isomorphs(&map, 0, p, false).unwrap().0,
            count_isomorphs(&moved, 0, p, false).unwrap().0
        );
    }

    #[test]
    fn canonical_forms_ignore_vertex_names(edges in proptest::collection::btree_set((0usize..7, 0usize..7), 0..14), shift in 1usize..7) {
        let edges: Vec<(usize, usize)> = edges.into_iter().filter(|(u, v)| u < v).collect();
        let g = graph(7, &edges);
        let renamed = graph(7, &edges.iter().map(|&(u, v)| ((u + shift) % 7, (v + shift) % 7)).collect::<Vec<_>>());
        prop_assert_eq!(canonical_form(&g, &[(1, 0)]).unwrap(), canonical_form(&renamed, &[(1, shift)]).unwrap());
    }
}

#[test]
fn small_known_counts() {
    let k4 = generators::planar_k4();
    let k3 = graph(3, &[(0, 1), (1, 2), (2, 0)]);
    assert_eq!(count_isomorphs(&k4, 0, &k3, false).unwrap().0, BigUint::from(4u32));
    assert_eq!(count_isomorphs(&k4, 0, &k3, true).unwrap().0, BigUint::from(4u32));
    let c4 = generators::cycle(4);
    assert_eq!(count_isomorphs(&c4, 0, &graph(4, &[(0, 1), (2, 3)]), false).unwrap().0, BigUint::from(2u32));
    assert_eq!(count_isomorphs(&c4, 0, &graph(1, &[]), false).unwrap().0, BigUint::from(4u32));
}

#[test]
fn listing_rejects_isolated_pattern_vertices() {
    let host = generators::cycle(5);
    assert!(list_isomorphs(&host, 0, &graph(3, &[(0, 1)]), false, 0).is_err());
    assert!(count_isomorphs(&host, 0, &graph(3, &[(0, 1)]), true).is_err());
}
