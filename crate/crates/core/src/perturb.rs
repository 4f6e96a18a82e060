//! Data perturbations for robustness studies: random deletion, Gaussian
//! fitness noise, and libraries drawn by biased mutagenesis around a focal
//! genotype.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genotype::GenotypeCode;
use crate::landscape::Landscape;
use crate::stats::Moments;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PerturbSpec {
    Missing {
        alpha: f64,
        /// Allow the global optimum to be deleted.
        #[serde(default)]
        drop_global: bool,
    },
    Noise {
        beta: f64,
    },
    Biased {
        focal: GenotypeCode,
        rate: f64,
        draws: usize,
    },
}

#[derive(Debug, Clone)]
pub struct Perturbed {
    pub landscape: Landscape,
    /// Realized library size for biased sampling.
    pub library_size: Option<usize>,
}

pub fn apply(landscape: &Landscape, spec: &PerturbSpec, seed: u64) -> Result<Perturbed> {
    Ok(match *spec {
        PerturbSpec::Missing { alpha, drop_global } => Perturbed {
            landscape: subsample(landscape, alpha, !drop_global, seed)?,
            library_size: None,
        },
        PerturbSpec::Noise { beta } => Perturbed {
            landscape: add_noise(landscape, beta, seed)?,
            library_size: None,
        },
        PerturbSpec::Biased { focal, rate, draws } => {
            let (l, size) = biased_sample(landscape, focal, rate, draws, seed)?;
            Perturbed {
                landscape: l,
                library_size: Some(size),
            }
        }
    })
}

/// Deletes ⌊α·N⌋ nodes chosen uniformly without replacement and returns the
/// induced landscape. With `keep_global` the tie-broken global optimum is
/// never deleted. Deletions for one seed are nested: a larger `alpha`
/// deletes a superset of the nodes deleted by a smaller one.
pub fn subsample(landscape: &Landscape, alpha: f64, keep_global: bool, seed: u64) -> Result<Landscape> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!(
            "deletion fraction must lie in [0, 1), got {alpha}"
        )));
    }
    let n = landscape.node_count();
    let remove = (alpha * n as f64).floor() as usize;
    let mut order: Vec<usize> = (0..n).collect();
    if keep_global {
        order.remove(landscape.global_optimum().0);
    }
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut keep = vec![true; n];
    for &i in &order[..remove] {
        keep[i] = false;
    }
    Ok(landscape.induced(&keep))
}

/// Adds independent N(0, (β·σ_f)²) noise to every fitness, σ_f being the
/// population standard deviation of the original fitness, and rebuilds the
/// edges.
pub fn add_noise(landscape: &Landscape, beta: f64, seed: u64) -> Result<Landscape> {
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "noise level must be finite and non-negative, got {beta}"
        )));
    }
    let mut m = Moments::default();
    for &f in landscape.fitness() {
        m.push(f);
    }
    let sd = beta * m.variance().sqrt();
    if sd == 0.0 {
        return Ok(landscape.clone());
    }
    let dist = Normal::new(0.0, sd).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fitness = landscape
        .fitness()
        .iter()
        .map(|&f| f + dist.sample(&mut rng))
        .collect();
    landscape.with_fitness(fitness)
}

fn mutagenesis_draw(
    landscape: &Landscape,
    focal: GenotypeCode,
    rate: f64,
    rng: &mut ChaCha8Rng,
) -> GenotypeCode {
    let space = landscape.space();
    let mut code = focal;
    for locus in 0..space.n_loci() {
        if rng.random_bool(rate) {
            let m = space.radix(locus);
            let cur = space.digit(focal, locus);
            let mut alt = rng.random_range(0..m - 1);
            if alt >= cur {
                alt += 1;
            }
            code = space.with_digit(code, locus, alt);
        }
    }
    code
}

fn check_biased(landscape: &Landscape, focal: GenotypeCode, rate: f64) -> Result<usize> {
    if !(0.0..=1.0).contains(&rate) {
        return Err(Error::InvalidParameter(format!(
            "mutation rate must lie in [0, 1], got {rate}"
        )));
    }
    landscape.node_of(focal).ok_or(Error::FocalNotFound(focal.0))
}

fn library(landscape: &Landscape, members: &HashSet<usize>) -> Landscape {
    let mut keep = vec![false; landscape.node_count()];
    for &i in members {
        keep[i] = true;
    }
    landscape.induced(&keep)
}

/// Performs `draws` mutagenesis draws from `focal`, each site substituted
/// independently with probability `rate` by a uniformly chosen other allele,
/// and keeps the distinct draws that are observed. The focal genotype is
/// always included. Returns the induced landscape and the library size.
pub fn biased_sample(
    landscape: &Landscape,
    focal: GenotypeCode,
    rate: f64,
    draws: usize,
    seed: u64,
) -> Result<(Landscape, usize)> {
    let f = check_biased(landscape, focal, rate)?;
    if draws == 0 {
        return Err(Error::InvalidParameter("draws must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut members = HashSet::from([f]);
    for _ in 0..draws {
        if let Some(i) = landscape.node_of(mutagenesis_draw(landscape, focal, rate, &mut rng)) {
            members.insert(i);
        }
    }
    Ok((library(landscape, &members), members.len()))
}

/// Like [`biased_sample`], but keeps drawing until the library reaches
/// `target` members or `max_draws` draws have been made. Returns the
/// landscape, the library size, and the number of draws used.
pub fn biased_sample_to_size(
    landscape: &Landscape,
    focal: GenotypeCode,
    rate: f64,
    target: usize,
    max_draws: usize,
    seed: u64,
) -> Result<(Landscape, usize, usize)> {
    let f = check_biased(landscape, focal, rate)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut members = HashSet::from([f]);
    let mut draws = 0;
    while members.len() < target && draws < max_draws {
        draws += 1;
        if let Some(i) = landscape.node_of(mutagenesis_draw(landscape, focal, rate, &mut rng)) {
            members.insert(i);
        }
    }
    Ok((library(landscape, &members), members.len(), draws))
}

/// Accessibility measured on data with a fraction `alpha` deleted, scaled by
/// the fraction of data remaining. This is only a partial correction.
pub fn accessibility_correction(measured: f64, alpha: f64) -> f64 {
    (measured / (1.0 - alpha)).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::navigability::global_accessibility;
    use crate::generators::{generate, GeneratorConfig, Model, NkNeighborhood};
    use crate::landscape::fixtures::*;

    fn nk(n: usize, k: usize, seed: u64) -> Landscape {
        generate(&GeneratorConfig::binary(
            Model::Nk {
                k,
                neighborhood: NkNeighborhood::Random,
            },
            n,
            seed,
        ))
        .unwrap()
    }

    #[test]
    fn subsample_counts() {
        let l = nk(10, 3, 1);
        let same = subsample(&l, 0.0, true, 0).unwrap();
        assert_eq!(same.codes(), l.codes());
        assert_eq!(same.edges(), l.edges());
        let half = subsample(&l, 0.5, true, 0).unwrap();
        assert_eq!(half.node_count(), 512);
        let gstar = l.code(l.global_optimum().0);
        assert!(half.node_of(gstar).is_some());
        assert!(subsample(&l, 1.0, true, 0).is_err());
    }

    #[test]
    fn subsample_is_nested() {
        let l = nk(9, 3, 5);
        let small = subsample(&l, 0.2, true, 4).unwrap();
        let large = subsample(&l, 0.6, true, 4).unwrap();
        for &c in large.codes() {
            assert!(small.node_of(c).is_some());
        }
    }

    #[test]
    fn subsample_matches_rebuild() {
        let l = nk(10, 5, 2);
        for seed in 0..5 {
            let sub = subsample(&l, 0.3, seed % 2 == 0, seed).unwrap();
            let rebuilt = Landscape::build(l.space().clone(), sub.nodes()).unwrap();
            assert_eq!(sub.edges(), rebuilt.edges());
        }
    }

    #[test]
    fn subsample_shrinks_accessibility() {
        let l = nk(10, 4, 3);
        let full = global_accessibility(&l) * l.node_count() as f64;
        let sub = subsample(&l, 0.4, true, 9).unwrap();
        let part = global_accessibility(&sub) * sub.node_count() as f64;
        assert!(part <= full);
    }

    #[test]
    fn noise_behaviour() {
        let l = nk(14, 4, 0);
        assert_eq!(add_noise(&l, 0.0, 1).unwrap().fitness(), l.fitness());
        assert_eq!(
            add_noise(&constant(), 1.0, 1).unwrap().fitness(),
            constant().fitness()
        );
        let a = add_noise(&l, 0.5, 7).unwrap();
        let b = add_noise(&l, 0.5, 7).unwrap();
        assert_eq!(a.fitness(), b.fitness());
        let mut m = Moments::default();
        for &f in l.fitness() {
            m.push(f);
        }
        let expected = 0.5 * m.variance().sqrt() * (2.0 / std::f64::consts::PI).sqrt();
        let mean_abs = a
            .fitness()
            .iter()
            .zip(l.fitness())
            .map(|(x, y)| (x - y).abs())
            .sum::<f64>()
            / l.node_count() as f64;
        assert!((mean_abs / expected - 1.0).abs() < 0.05, "{mean_abs} vs {expected}");
    }

    #[test]
    fn biased_forced_outcomes() {
        let l = nk(8, 2, 0);
        let focal = GenotypeCode(0b1010_0110);
        let (lib, size) = biased_sample(&l, focal, 0.0, 50, 0).unwrap();
        assert_eq!(size, 1);
        assert_eq!(lib.codes(), &[focal]);
        let (lib, size) = biased_sample(&l, focal, 1.0, 50, 0).unwrap();
        assert_eq!(size, 2);
        assert_eq!(lib.codes(), &[GenotypeCode(0b0101_1001), focal]);
        assert!(matches!(
            biased_sample(&l1(), GenotypeCode(99), 0.1, 5, 0),
            Err(Error::FocalNotFound(99))
        ));
    }

    #[test]
    fn biased_library_members_observed() {
        let l = nk(10, 3, 4);
        let sub = subsample(&l, 0.3, true, 1).unwrap();
        let focal = sub.code(sub.global_optimum().0);
        let (lib, size) = biased_sample(&sub, focal, 0.2, 300, 5).unwrap();
        assert_eq!(lib.node_count(), size);
        assert!(lib.node_of(focal).is_some());
        for &c in lib.codes() {
            assert!(sub.node_of(c).is_some());
        }
        let (_, size, draws) = biased_sample_to_size(&sub, focal, 0.2, 100, 100_000, 5).unwrap();
        assert_eq!(size, 100);
        assert!(draws >= 99);
    }

    #[test]
    fn correction() {
        assert_eq!(accessibility_correction(0.4, 0.5), 0.8);
        assert_eq!(accessibility_correction(0.9, 0.5), 1.0);
    }
}
