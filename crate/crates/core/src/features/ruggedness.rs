//! Ruggedness: fraction of local optima, roughness–slope ratio, random-walk
//! autocorrelation, the single-step gamma statistic, and neighbor fitness
//! correlation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::landscape::Landscape;
use crate::ols::{fit_indicator, IndicatorFit};
use crate::stats::{chunked, merge_all, PearsonAcc};

const ZERO_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuggednessReport {
    pub phi_lo: f64,
    pub rs_ratio: Option<f64>,
    pub rho_a: Option<f64>,
    pub gamma1: Option<f64>,
    pub nfc: Option<f64>,
    pub n_walks: usize,
    pub walk_length: usize,
}

/// Computes all five ruggedness features. Failures of individual features
/// are reported as `None`.
pub fn ruggedness(
    landscape: &Landscape,
    n_walks: usize,
    walk_length: usize,
    seed: u64,
) -> RuggednessReport {
    RuggednessReport {
        phi_lo: fraction_local_optima(landscape),
        rs_ratio: rs_ratio(landscape).ok().flatten(),
        rho_a: autocorrelation(landscape, n_walks, walk_length, seed)
            .ok()
            .flatten(),
        gamma1: gamma1(landscape).ok().flatten(),
        nfc: neighbor_fitness_correlation(landscape),
        n_walks,
        walk_length,
    }
}

/// Local optima over observed nodes.
pub fn fraction_local_optima(landscape: &Landscape) -> f64 {
    let sinks = (0..landscape.node_count())
        .filter(|&i| landscape.is_sink(i))
        .count();
    sinks as f64 / landscape.node_count() as f64
}

/// Column of the first one-hot indicator for each locus; the reference
/// allele (index 0) has no column. Column 0 is the intercept.
pub(crate) fn main_effect_offsets(landscape: &Landscape) -> (Vec<usize>, usize) {
    let space = landscape.space();
    let mut offsets = Vec::with_capacity(space.n_loci());
    let mut next = 1;
    for locus in 0..space.n_loci() {
        offsets.push(next);
        next += space.radix(locus) - 1;
    }
    (offsets, next)
}

/// Least-squares additive model with one dropped reference allele per locus.
pub fn additive_fit(landscape: &Landscape) -> Result<IndicatorFit> {
    let (offsets, columns) = main_effect_offsets(landscape);
    let space = landscape.space();
    fit_indicator(
        landscape.node_count(),
        columns,
        |r, buf| {
            buf.push(0);
            let code = landscape.code(r);
            for (locus, &off) in offsets.iter().enumerate() {
                let a = space.digit(code, locus);
                if a > 0 {
                    buf.push(off + a - 1);
                }
            }
        },
        landscape.fitness(),
    )
}

/// Roughness (RMSE of the additive fit) over slope (mean absolute additive
/// coefficient). `None` when the slope vanishes.
pub fn rs_ratio(landscape: &Landscape) -> Result<Option<f64>> {
    let fit = additive_fit(landscape)?;
    let effects = &fit.coefficients[1..];
    let slope = effects.iter().map(|b| b.abs()).sum::<f64>() / effects.len() as f64;
    let roughness = fit.rmse();
    if slope <= ZERO_EPS {
        return Ok(None);
    }
    if roughness <= ZERO_EPS {
        return Ok(Some(0.0));
    }
    Ok(Some(roughness / slope))
}

/// Lag-1 autocorrelation of fitness along fitness-blind random walks.
///
/// Walk `w` starts at a uniformly random node and is driven by a generator
/// seeded with `seed + w`. Each step moves to a uniformly random observed
/// neighbor; a walk stops early at a node without observed neighbors. The
/// estimate is the Pearson correlation over all pooled consecutive pairs.
pub fn autocorrelation(
    landscape: &Landscape,
    n_walks: usize,
    walk_length: usize,
    seed: u64,
) -> Result<Option<f64>> {
    if n_walks == 0 || walk_length == 0 {
        return Err(Error::InvalidParameter(
            "walk count and walk length must be positive".into(),
        ));
    }
    let has_neighbors = (0..landscape.node_count()).any(|i| {
        let mut found = false;
        landscape.for_each_present_neighbor(i, |_, _, _| found = true);
        found
    });
    if !has_neighbors {
        return Err(Error::NoNeighbors);
    }
    let f = landscape.fitness();
    let parts = chunked(n_walks, |walks| {
        let mut acc = PearsonAcc::default();
        let mut nbrs = Vec::new();
        for w in walks {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(w as u64));
            let mut cur = rng.random_range(0..landscape.node_count());
            for _ in 0..walk_length {
                nbrs.clear();
                landscape.for_each_present_neighbor(cur, |_, _, v| nbrs.push(v));
                if nbrs.is_empty() {
                    break;
                }
                let next = nbrs[rng.random_range(0..nbrs.len())];
                acc.push(f[cur], f[next]);
                cur = next;
            }
        }
        acc
    });
    Ok(merge_all(PearsonAcc::default(), &parts, PearsonAcc::merge).correlation())
}

/// Aggregate gamma statistic at distance one:
/// Σ s_j(g)·s_j(g_[i]) / Σ s_j(g)² over backgrounds g, ordered locus pairs
/// i ≠ j and all substitutions at both loci for which g, g_[i], g_[j] and
/// g_[ij] are all observed.
pub fn gamma1(landscape: &Landscape) -> Result<Option<f64>> {
    let space = landscape.space();
    let n = space.n_loci();
    if n < 2 {
        return Err(Error::SingleLocus);
    }
    let f = landscape.fitness();
    let parts = chunked(landscape.node_count(), |range| {
        let mut num = 0.0;
        let mut den = 0.0;
        for g in range {
            let code = landscape.code(g);
            for j in 0..n {
                let aj = space.digit(code, j);
                for bj in 0..space.radix(j) {
                    if bj == aj {
                        continue;
                    }
                    let Some(gj) = landscape.mutant(g, j, bj) else {
                        continue;
                    };
                    let sj = f[gj] - f[g];
                    for i in 0..n {
                        if i == j {
                            continue;
                        }
                        let ai = space.digit(code, i);
                        for bi in 0..space.radix(i) {
                            if bi == ai {
                                continue;
                            }
                            let (Some(gi), Some(gij)) =
                                (landscape.mutant(g, i, bi), landscape.mutant(gj, i, bi))
                            else {
                                continue;
                            };
                            num += sj * (f[gij] - f[gi]);
                            den += sj * sj;
                        }
                    }
                }
            }
        }
        (num, den)
    });
    let (num, den) = parts
        .iter()
        .fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    if den <= ZERO_EPS {
        return Ok(None);
    }
    Ok(Some((num / den).clamp(-1.0, 1.0)))
}

/// Pearson correlation between f(g) and the mean fitness of g's observed
/// neighbors, over nodes with at least one observed neighbor.
pub fn neighbor_fitness_correlation(landscape: &Landscape) -> Option<f64> {
    let f = landscape.fitness();
    let parts = chunked(landscape.node_count(), |range| {
        let mut acc = PearsonAcc::default();
        for g in range {
            let mut sum = 0.0;
            let mut count = 0usize;
            landscape.for_each_present_neighbor(g, |_, _, v| {
                sum += f[v];
                count += 1;
            });
            if count > 0 {
                acc.push(f[g], sum / count as f64);
            }
        }
        acc
    });
    merge_all(PearsonAcc::default(), &parts, PearsonAcc::merge).correlation()
}
