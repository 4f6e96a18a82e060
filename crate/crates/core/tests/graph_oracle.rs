mod common;

use std::collections::HashSet;

use common::{oracle_edges, random_landscape};
use fitland::features::navigability::{global_accessibility, mean_accessible_path_length, mean_basin_hamming};
use fitland::Landscape;

const COMPLETENESS: [f64; 3] = [1.0, 0.8, 0.5];

fn corpus() -> impl Iterator<Item = Landscape> {
    (0..100u64).map(|s| random_landscape(s, COMPLETENESS[s as usize % 3], 4096))
}

#[test]
fn edges_match_all_pairs_oracle() {
    for (i, l) in corpus().enumerate() {
        let mut edges = l.edges();
        edges.sort();
        assert_eq!(edges, oracle_edges(&l), "landscape {i}");
        assert_eq!(l.edge_count(), edges.len());
    }
}

#[test]
fn greedy_basins_partition_nodes() {
    for l in corpus() {
        let basins = l.greedy_basins();
        let total: usize = basins.sizes.iter().map(|&(_, s)| s).sum();
        assert_eq!(total, l.node_count());
        assert_eq!(basins.sizes.len(), l.local_optima().local_optima.len());
        for (u, &e) in basins.endpoint.iter().enumerate() {
            let walk = l.greedy_walk(l.code(u)).unwrap();
            assert_eq!(walk.endpoint, l.code(e as usize));
        }
    }
}

/// Nodes with an increasing path to `target`, by repeated relaxation over
/// the oracle edge list.
fn oracle_ancestors(l: &Landscape, target: usize) -> HashSet<usize> {
    let edges = oracle_edges(l);
    let mut reach: HashSet<_> = HashSet::from([l.code(target)]);
    loop {
        let before = reach.len();
        for (u, v) in &edges {
            if reach.contains(v) {
                reach.insert(*u);
            }
        }
        if reach.len() == before {
            break;
        }
    }
    reach.into_iter().map(|c| l.node_of(c).unwrap()).collect()
}

#[test]
fn accessibility_matches_path_search() {
    for l in corpus().filter(|l| l.node_count() <= 1024) {
        let (gstar, _) = l.global_optimum();
        let expected = oracle_ancestors(&l, gstar);
        let alpha = global_accessibility(&l);
        assert!((alpha - expected.len() as f64 / l.node_count() as f64).abs() < 1e-15);
        let opt = l.local_optima();
        if opt.local_optima.len() == 1 {
            assert_eq!(alpha, 1.0);
        }
        assert!(mean_accessible_path_length(&l) >= mean_basin_hamming(&l) - 1e-12);
    }
}

#[test]
fn additive_paths_are_direct() {
    use fitland::generators::{generate, GeneratorConfig, Model};
    for seed in 0..10 {
        let cfg = GeneratorConfig {
            model: Model::Additive {
                mu_a: 0.0,
                sigma_a: 1.0,
            },
            alphabet_sizes: vec![2, 3, 2, 4, 2],
            seed,
        };
        let l = generate(&cfg).unwrap();
        assert_eq!(global_accessibility(&l), 1.0);
        assert!((mean_accessible_path_length(&l) - mean_basin_hamming(&l)).abs() < 1e-12);
    }
}
