//! Navigability: fitness-distance correlation, accessibility of the global
//! optimum, basin-fitness correlations, evolvability-enhancing mutations,
//! neutrality, and accessible path lengths.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::landscape::{BasinScratch, Landscape};
use crate::stats::{chunked, merge_all, Moments, PearsonAcc};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasinMode {
    Accessible,
    Greedy,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BasinCorrelation {
    pub value: Option<f64>,
    pub optima_used: usize,
    pub sampled: bool,
}

/// Pearson correlation of fitness with Hamming distance to the tie-broken
/// global optimum.
pub fn fdc(landscape: &Landscape) -> Option<f64> {
    let (gstar, _) = landscape.global_optimum();
    let target = landscape.code(gstar);
    let space = landscape.space();
    let f = landscape.fitness();
    let parts = chunked(landscape.node_count(), |range| {
        let mut acc = PearsonAcc::default();
        for g in range {
            acc.push(f[g], space.hamming_unchecked(landscape.code(g), target) as f64);
        }
        acc
    });
    merge_all(PearsonAcc::default(), &parts, PearsonAcc::merge).correlation()
}

/// Fraction of nodes with an increasing path to the global optimum.
pub fn global_accessibility(landscape: &Landscape) -> f64 {
    let (gstar, _) = landscape.global_optimum();
    let mut scratch = BasinScratch::default();
    landscape.ancestor_count(gstar, &mut scratch) as f64 / landscape.node_count() as f64
}

/// Correlation of optimum fitness with basin size. In accessible mode a
/// seeded sample of `max_optima` optima is used when there are more.
pub fn basin_fitness_correlation(
    landscape: &Landscape,
    mode: BasinMode,
    max_optima: usize,
    seed: u64,
) -> BasinCorrelation {
    let f = landscape.fitness();
    let (pairs, sampled): (Vec<(f64, f64)>, bool) = match mode {
        BasinMode::Greedy => {
            let basins = landscape.greedy_basins();
            (
                basins
                    .sizes
                    .iter()
                    .map(|&(o, size)| (f[o], size as f64))
                    .collect(),
                false,
            )
        }
        BasinMode::Accessible => {
            let mut optima = landscape.local_optima().local_optima;
            let sampled = optima.len() > max_optima;
            if sampled {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut pick =
                    rand::seq::index::sample(&mut rng, optima.len(), max_optima).into_vec();
                pick.sort_unstable();
                optima = pick.into_iter().map(|i| optima[i]).collect();
            }
            let sizes = chunked(optima.len(), |range| {
                let mut scratch = BasinScratch::default();
                range
                    .map(|i| landscape.ancestor_count(optima[i], &mut scratch))
                    .collect::<Vec<_>>()
            })
            .concat();
            (
                optima
                    .iter()
                    .zip(sizes)
                    .map(|(&o, s)| (f[o], s as f64))
                    .collect(),
                sampled,
            )
        }
    };
    let mut acc = PearsonAcc::default();
    for &(x, y) in &pairs {
        acc.push(x, y);
    }
    BasinCorrelation {
        value: acc.correlation(),
        optima_used: pairs.len(),
        sampled,
    }
}

/// Differences smaller than this fraction of the operands' magnitude are
/// treated as ties in the evolvability tests.
const EE_RTOL: f64 = 1e-12;

fn exceeds(lhs: f64, rhs: f64, scale: f64) -> bool {
    lhs - rhs > EE_RTOL * scale
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct EeCounts {
    pub evaluated: u64,
    pub enhancing: u64,
}

/// Mean fitness of the observed neighbors of `node` at loci other than
/// `skip`.
fn mean_off_locus(landscape: &Landscape, node: usize, skip: usize) -> Option<f64> {
    let f = landscape.fitness();
    let mut sum = 0.0;
    let mut count = 0usize;
    landscape.for_each_present_neighbor(node, |locus, _, v| {
        if locus != skip {
            sum += f[v];
            count += 1;
        }
    });
    (count > 0).then(|| sum / count as f64)
}

pub fn ee_counts(landscape: &Landscape, sigma: f64) -> EeCounts {
    let f = landscape.fitness();
    let parts = chunked(landscape.node_count(), |range| {
        let mut c = EeCounts::default();
        for g in range {
            landscape.for_each_present_neighbor(g, |locus, _, v| {
                let s = f[v] - f[g];
                let beneficial = s > sigma;
                let neutral = s.abs() < sigma;
                if !beneficial && !neutral {
                    return;
                }
                let (Some(after), Some(before)) = (
                    mean_off_locus(landscape, v, locus),
                    mean_off_locus(landscape, g, locus),
                ) else {
                    return;
                };
                c.evaluated += 1;
                let scale = after.abs().max(before.abs()).max(f[v].abs()).max(f[g].abs());
                let enhancing = if beneficial {
                    exceeds(after - f[v], before - f[g], scale)
                } else {
                    exceeds(after, before, scale)
                };
                if enhancing {
                    c.enhancing += 1;
                }
            });
        }
        c
    });
    parts.iter().fold(EeCounts::default(), |a, b| EeCounts {
        evaluated: a.evaluated + b.evaluated,
        enhancing: a.enhancing + b.enhancing,
    })
}

/// Fraction of evaluated beneficial (and σ-neutral) mutations that are
/// evolvability-enhancing; `None` when nothing could be evaluated.
pub fn ee_fraction(landscape: &Landscape, sigma: f64) -> Option<f64> {
    let c = ee_counts(landscape, sigma);
    (c.evaluated > 0).then(|| c.enhancing as f64 / c.evaluated as f64)
}

/// Mean over nodes with observed neighbors of the fraction of neighbors
/// whose fitness differs by less than `sigma`.
pub fn neutrality(landscape: &Landscape, sigma: f64) -> Option<f64> {
    let f = landscape.fitness();
    let parts = chunked(landscape.node_count(), |range| {
        let mut m = Moments::default();
        for g in range {
            let mut neutral = 0usize;
            let mut total = 0usize;
            landscape.for_each_present_neighbor(g, |_, _, v| {
                total += 1;
                if (f[v] - f[g]).abs() < sigma {
                    neutral += 1;
                }
            });
            if total > 0 {
                m.push(neutral as f64 / total as f64);
            }
        }
        m
    });
    let m = merge_all(Moments::default(), &parts, Moments::merge);
    (m.count > 0).then(|| m.mean())
}

/// Mean shortest increasing-path length to the global optimum over its
/// accessible basin, the optimum itself included at distance zero.
pub fn mean_accessible_path_length(landscape: &Landscape) -> f64 {
    let (gstar, _) = landscape.global_optimum();
    let dist = landscape.accessible_distances(gstar);
    dist.iter().map(|&(_, d)| d as f64).sum::<f64>() / dist.len() as f64
}

/// Mean Hamming distance to the global optimum over its accessible basin.
pub fn mean_basin_hamming(landscape: &Landscape) -> f64 {
    let (gstar, _) = landscape.global_optimum();
    let target = landscape.code(gstar);
    let dist = landscape.accessible_distances(gstar);
    dist.iter()
        .map(|&(g, _)| landscape.space().hamming_unchecked(landscape.code(g), target) as f64)
        .sum::<f64>()
        / dist.len() as f64
}
