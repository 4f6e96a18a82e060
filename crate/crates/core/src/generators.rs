//! Synthetic landscape models: additive, House-of-Cards, Rough Mount Fuji,
//! NK, and eggbox.
//!
//! Generation is deterministic in the configuration and seed. Model
//! parameters (additive effects, NK partners and tables) come from stream 0
//! of a ChaCha8 generator seeded with `seed`; the House-of-Cards term of each
//! genotype is drawn from its own stream keyed by the genotype code, so the
//! output does not depend on how the code range is partitioned.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genotype::{Alphabet, GenotypeCode, SequenceSpace};
use crate::landscape::{Landscape, Node};
use crate::stats::chunked;

/// Largest space a generator will enumerate.
pub const MAX_GENERATED: u64 = 1 << 28;

/// Largest total NK contribution table (entries over all loci).
const MAX_NK_TABLE: usize = 1 << 28;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NkNeighborhood {
    /// K partners per locus drawn uniformly without replacement.
    #[default]
    Random,
    /// Partners are the next K loci, wrapping around.
    Adjacent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum Model {
    Additive {
        mu_a: f64,
        sigma_a: f64,
    },
    Hoc {
        sigma_hoc: f64,
    },
    Rmf {
        mu_a: f64,
        sigma_a: f64,
        sigma_hoc: f64,
    },
    Nk {
        k: usize,
        #[serde(default)]
        neighborhood: NkNeighborhood,
    },
    Eggbox {
        base: f64,
        amplitude: f64,
    },
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Model::Additive { .. } => "additive",
            Model::Hoc { .. } => "hoc",
            Model::Rmf { .. } => "rmf",
            Model::Nk { .. } => "nk",
            Model::Eggbox { .. } => "eggbox",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub model: Model,
    /// Alleles per locus; the number of entries is the number of loci.
    pub alphabet_sizes: Vec<usize>,
    pub seed: u64,
}

impl GeneratorConfig {
    /// A configuration over `n` binary loci.
    pub fn binary(model: Model, n: usize, seed: u64) -> Self {
        GeneratorConfig {
            model,
            alphabet_sizes: vec![2; n],
            seed,
        }
    }

    pub fn space(&self) -> Result<SequenceSpace> {
        if self.alphabet_sizes.iter().all(|&m| m == 2) {
            SequenceSpace::uniform(Alphabet::Binary, self.alphabet_sizes.len())
        } else {
            SequenceSpace::from_sizes(&self.alphabet_sizes)
        }
    }
}

fn check_sd(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be finite and non-negative"
        )))
    }
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite")))
    }
}

/// Per-(locus, allele) effects; the reference allele has effect 0.
fn additive_effects(
    space: &SequenceSpace,
    mu: f64,
    sigma: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Vec<f64>>> {
    let dist = Normal::new(mu, sigma).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok((0..space.n_loci())
        .map(|locus| {
            let mut row = vec![0.0; space.radix(locus)];
            for v in row.iter_mut().skip(1) {
                *v = dist.sample(rng);
            }
            row
        })
        .collect())
}

fn additive_value(space: &SequenceSpace, effects: &[Vec<f64>], code: GenotypeCode) -> f64 {
    effects
        .iter()
        .enumerate()
        .map(|(locus, row)| row[space.digit(code, locus)])
        .sum()
}

/// The House-of-Cards draw for one genotype.
fn hoc_value(base: &ChaCha8Rng, dist: &Normal<f64>, code: GenotypeCode) -> f64 {
    let mut rng = base.clone();
    rng.set_stream(code.0 | 1 << 63);
    dist.sample(&mut rng)
}

struct NkTables {
    /// `partners[i]` lists the K loci that interact with locus i.
    partners: Vec<Vec<usize>>,
    /// Row i holds 2^(K+1) contributions indexed by the context bits:
    /// bit 0 is locus i, bit t+1 is `partners[i][t]`.
    tables: Vec<Vec<f64>>,
}

impl NkTables {
    fn new(n: usize, k: usize, hood: NkNeighborhood, rng: &mut ChaCha8Rng) -> Result<Self> {
        if k >= n {
            return Err(Error::InvalidK { k, n });
        }
        if n.saturating_mul(1usize << (k + 1)) > MAX_NK_TABLE {
            return Err(Error::SpaceTooLarge);
        }
        let partners: Vec<Vec<usize>> = (0..n)
            .map(|i| match hood {
                NkNeighborhood::Random => rand::seq::index::sample(rng, n - 1, k)
                    .into_iter()
                    .map(|j| if j >= i { j + 1 } else { j })
                    .collect(),
                NkNeighborhood::Adjacent => (1..=k).map(|d| (i + d) % n).collect(),
            })
            .collect();
        let tables = (0..n)
            .map(|_| (0..1usize << (k + 1)).map(|_| rng.random::<f64>()).collect())
            .collect();
        Ok(NkTables { partners, tables })
    }

    fn value(&self, code: GenotypeCode) -> f64 {
        let bit = |l: usize| ((code.0 >> l) & 1) as usize;
        let total: f64 = self
            .partners
            .iter()
            .zip(&self.tables)
            .enumerate()
            .map(|(i, (p, t))| {
                let mut ctx = bit(i);
                for (s, &j) in p.iter().enumerate() {
                    ctx |= bit(j) << (s + 1);
                }
                t[ctx]
            })
            .sum();
        total / self.partners.len() as f64
    }
}

/// Fitness of every genotype in code order.
pub fn generate_fitness(config: &GeneratorConfig) -> Result<(SequenceSpace, Vec<f64>)> {
    let space = config.space()?;
    if space.total_size() > MAX_GENERATED {
        return Err(Error::SpaceTooLarge);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let base = rng.clone();
    let total = space.total_size() as usize;
    let eval = |f: &(dyn Fn(GenotypeCode) -> f64 + Sync)| -> Vec<f64> {
        chunked(total, |range| {
            range
                .map(|c| f(GenotypeCode(c as u64)))
                .collect::<Vec<_>>()
        })
        .concat()
    };
    let fitness = match config.model {
        Model::Additive { mu_a, sigma_a } => {
            check_finite("mu_a", mu_a)?;
            check_sd("sigma_a", sigma_a)?;
            let effects = additive_effects(&space, mu_a, sigma_a, &mut rng)?;
            eval(&|c| additive_value(&space, &effects, c))
        }
        Model::Hoc { sigma_hoc } => {
            check_sd("sigma_hoc", sigma_hoc)?;
            let dist = Normal::new(0.0, sigma_hoc).unwrap();
            eval(&|c| hoc_value(&base, &dist, c))
        }
        Model::Rmf {
            mu_a,
            sigma_a,
            sigma_hoc,
        } => {
            check_finite("mu_a", mu_a)?;
            check_sd("sigma_a", sigma_a)?;
            check_sd("sigma_hoc", sigma_hoc)?;
            let effects = additive_effects(&space, mu_a, sigma_a, &mut rng)?;
            let dist = Normal::new(0.0, sigma_hoc).unwrap();
            eval(&|c| additive_value(&space, &effects, c) + hoc_value(&base, &dist, c))
        }
        Model::Nk { k, neighborhood } => {
            if !space.is_binary() {
                return Err(Error::InvalidParameter(
                    "the NK model is defined on binary loci only".into(),
                ));
            }
            let nk = NkTables::new(space.n_loci(), k, neighborhood, &mut rng)?;
            eval(&|c| nk.value(c))
        }
        Model::Eggbox { base, amplitude } => {
            check_finite("base", base)?;
            check_finite("amplitude", amplitude)?;
            eval(&|c| {
                let parity = (0..space.n_loci())
                    .map(|l| space.digit(c, l))
                    .sum::<usize>()
                    % 2;
                base + amplitude * parity as f64
            })
        }
    };
    Ok((space, fitness))
}

/// Generates a complete landscape.
pub fn generate(config: &GeneratorConfig) -> Result<Landscape> {
    let (space, fitness) = generate_fitness(config)?;
    let nodes = fitness
        .into_iter()
        .enumerate()
        .map(|(c, fitness)| Node {
            code: GenotypeCode(c as u64),
            fitness,
            variance: None,
        })
        .collect();
    Landscape::build(space, nodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::{epistasis, navigability, ruggedness};

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
    fn additive_is_smooth() {
        for seed in 0..5 {
            let cfg = GeneratorConfig::binary(
                Model::Additive {
                    mu_a: 0.5,
                    sigma_a: 0.1,
                },
                8,
                seed,
            );
            let l = generate(&cfg).unwrap();
            assert_eq!(l.local_optima().local_optima.len(), 1);
            assert!(ruggedness::rs_ratio(&l).unwrap().unwrap() <= 1e-9);
            assert!((ruggedness::gamma1(&l).unwrap().unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn nk_k0_single_optimum() {
        for seed in 0..5 {
            let l = nk(10, 0, seed);
            assert_eq!(l.local_optima().local_optima.len(), 1);
            assert_eq!(navigability::global_accessibility(&l), 1.0);
        }
    }

    #[test]
    fn eggbox_reciprocal() {
        let cfg = GeneratorConfig::binary(
            Model::Eggbox {
                base: 1.0,
                amplitude: 1.0,
            },
            6,
            0,
        );
        let l = generate(&cfg).unwrap();
        assert!((ruggedness::gamma1(&l).unwrap().unwrap() + 1.0).abs() < 1e-9);
        let e = epistasis::classify_squares(&l, 1e-9).unwrap();
        assert_eq!(e.eps_reci, 1.0);
        let mut distinct: Vec<f64> = l.fitness().to_vec();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup();
        assert_eq!(distinct, vec![1.0, 2.0]);
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        let cfg = GeneratorConfig::binary(
            Model::Rmf {
                mu_a: 0.1,
                sigma_a: 0.2,
                sigma_hoc: 0.3,
            },
            9,
            11,
        );
        let (_, a) = generate_fitness(&cfg).unwrap();
        let (_, b) = generate_fitness(&cfg).unwrap();
        assert_eq!(a, b);
        let (_, c) = generate_fitness(&GeneratorConfig { seed: 12, ..cfg }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn rmf_without_hoc_is_additive() {
        let rmf = GeneratorConfig::binary(
            Model::Rmf {
                mu_a: 0.5,
                sigma_a: 0.2,
                sigma_hoc: 0.0,
            },
            7,
            3,
        );
        let add = GeneratorConfig::binary(
            Model::Additive {
                mu_a: 0.5,
                sigma_a: 0.2,
            },
            7,
            3,
        );
        assert_eq!(generate_fitness(&rmf).unwrap(), generate_fitness(&add).unwrap());
        let l = generate(&rmf).unwrap();
        assert!((ruggedness::gamma1(&l).unwrap().unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rmf_without_additive_behaves_like_hoc() {
        let mut total = 0.0;
        for seed in 0..20 {
            let cfg = GeneratorConfig::binary(
                Model::Rmf {
                    mu_a: 0.0,
                    sigma_a: 0.0,
                    sigma_hoc: 1.0,
                },
                8,
                seed,
            );
            total += ruggedness::gamma1(&generate(&cfg).unwrap()).unwrap().unwrap();
        }
        assert!((total / 20.0).abs() < 0.1);
    }

    #[test]
    fn nk_ruggedness_increases_with_k() {
        let mean_phi = |k: usize| {
            (0..20)
                .map(|s| ruggedness::fraction_local_optima(&nk(12, k, s)))
                .sum::<f64>()
                / 20.0
        };
        let phis: Vec<f64> = (0..12).map(mean_phi).collect();
        for w in phis.windows(2) {
            assert!(w[1] > w[0], "{phis:?}");
        }
    }

    #[test]
    fn eggbox_odd_distance_differs_by_amplitude() {
        let cfg = GeneratorConfig {
            model: Model::Eggbox {
                base: 0.5,
                amplitude: 2.0,
            },
            alphabet_sizes: vec![2; 7],
            seed: 0,
        };
        let l = generate(&cfg).unwrap();
        let space = l.space();
        for a in 0..l.node_count() {
            for b in 0..l.node_count() {
                let d = space.hamming(l.code(a), l.code(b)).unwrap();
                let diff = (l.fitness()[a] - l.fitness()[b]).abs();
                assert_eq!(diff, if d % 2 == 1 { 2.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn parameter_errors() {
        let bad_k = GeneratorConfig::binary(
            Model::Nk {
                k: 5,
                neighborhood: NkNeighborhood::Random,
            },
            5,
            0,
        );
        assert!(matches!(generate(&bad_k), Err(Error::InvalidK { k: 5, n: 5 })));
        let huge = GeneratorConfig::binary(Model::Hoc { sigma_hoc: 1.0 }, 40, 0);
        assert!(matches!(generate(&huge), Err(Error::SpaceTooLarge)));
        let neg = GeneratorConfig::binary(Model::Hoc { sigma_hoc: -1.0 }, 3, 0);
        assert!(generate(&neg).is_err());
        let nonbinary = GeneratorConfig {
            model: Model::Nk {
                k: 1,
                neighborhood: NkNeighborhood::Adjacent,
            },
            alphabet_sizes: vec![3, 3],
            seed: 0,
        };
        assert!(generate(&nonbinary).is_err());
    }

    #[test]
    fn nk_adjacent_partners() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let t = NkTables::new(5, 2, NkNeighborhood::Adjacent, &mut rng).unwrap();
        assert_eq!(t.partners[4], vec![0, 1]);
        let t = NkTables::new(6, 3, NkNeighborhood::Random, &mut rng).unwrap();
        for (i, p) in t.partners.iter().enumerate() {
            assert_eq!(p.len(), 3);
            assert!(!p.contains(&i));
            let mut q = p.clone();
            q.sort_unstable();
            q.dedup();
            assert_eq!(q.len(), 3);
        }
    }
}
