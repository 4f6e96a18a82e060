#![allow(dead_code)]

use fitland::genotype::{GenotypeCode, SequenceSpace};
use fitland::landscape::{Landscape, Node};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random landscape over a mixed-radix space of at most `max_size`
/// genotypes. Fitness values lie on a 1/64 grid so that ties occur and affine
/// transforms with dyadic coefficients are exact.
pub fn random_landscape(seed: u64, completeness: f64, max_size: u64) -> Landscape {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sizes = Vec::new();
    let mut total = 1u64;
    loop {
        let m = rng.random_range(2..=4usize);
        if total * m as u64 > max_size || sizes.len() >= 8 {
            break;
        }
        total *= m as u64;
        sizes.push(m);
    }
    if sizes.len() < 2 {
        sizes = vec![2, 2];
        total = 4;
    }
    let space = SequenceSpace::from_sizes(&sizes).unwrap();
    let levels = rng.random_range(3..200u32);
    let mut nodes = Vec::new();
    for c in 0..total {
        if rng.random::<f64>() < completeness {
            nodes.push(Node {
                code: GenotypeCode(c),
                fitness: rng.random_range(0..levels) as f64 / 64.0,
                variance: None,
            });
        }
    }
    if nodes.is_empty() {
        nodes.push(Node {
            code: GenotypeCode(0),
            fitness: 0.0,
            variance: None,
        });
    }
    Landscape::build(space, nodes).unwrap()
}

/// Edge set by comparing every pair of observed genotypes.
pub fn oracle_edges(l: &Landscape) -> Vec<(GenotypeCode, GenotypeCode)> {
    let space = l.space();
    let decoded: Vec<Vec<&str>> = l.codes().iter().map(|&c| space.decode(c).unwrap()).collect();
    let mut edges = Vec::new();
    for u in 0..l.node_count() {
        for v in 0..l.node_count() {
            let d = decoded[u]
                .iter()
                .zip(&decoded[v])
                .filter(|(a, b)| a != b)
                .count();
            if d == 1 && l.fitness()[v] > l.fitness()[u] {
                edges.push((l.code(u), l.code(v)));
            }
        }
    }
    edges.sort();
    edges
}
