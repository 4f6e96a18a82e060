//! Directed-evolution baseline: repeated adaptive walks from random starts,
//! scored by the fitness percentile of the endpoint.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genotype::GenotypeCode;
use crate::landscape::Landscape;
use crate::stats::chunked;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WalkMethod {
    Greedy,
    Stochastic,
}

impl std::str::FromStr for WalkMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greedy" => Ok(WalkMethod::Greedy),
            "stochastic" => Ok(WalkMethod::Stochastic),
            other => Err(Error::InvalidParameter(format!("unknown walk method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DERun {
    pub start: GenotypeCode,
    pub endpoint: GenotypeCode,
    pub endpoint_fitness: f64,
    pub steps: usize,
    pub percentile: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DEResult {
    pub method: WalkMethod,
    pub runs: usize,
    pub seed: u64,
    pub mean_percentile: f64,
    pub per_run: Vec<DERun>,
}

/// Fraction of nodes whose fitness does not exceed `f`.
struct Percentiles(Vec<f64>);

impl Percentiles {
    fn new(landscape: &Landscape) -> Self {
        let mut sorted = landscape.fitness().to_vec();
        sorted.sort_by(f64::total_cmp);
        Percentiles(sorted)
    }

    fn of(&self, f: f64) -> f64 {
        self.0.partition_point(|&x| x <= f) as f64 / self.0.len() as f64
    }
}

fn execute<S>(
    landscape: &Landscape,
    method: WalkMethod,
    runs: usize,
    seed: u64,
    start: S,
) -> DEResult
where
    S: Fn(usize, &mut ChaCha8Rng) -> usize + Sync + Send,
{
    let pct = Percentiles::new(landscape);
    let per_run: Vec<DERun> = chunked(runs, |range| {
        range
            .map(|r| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(r as u64));
                let s = start(r, &mut rng);
                let out = match method {
                    WalkMethod::Greedy => landscape.greedy_walk_from(s),
                    WalkMethod::Stochastic => landscape.stochastic_walk_from(s, &mut rng),
                };
                DERun {
                    start: out.start,
                    endpoint: out.endpoint,
                    endpoint_fitness: out.endpoint_fitness,
                    steps: out.steps,
                    percentile: pct.of(out.endpoint_fitness),
                }
            })
            .collect::<Vec<_>>()
    })
    .concat();
    let mean_percentile = per_run.iter().map(|r| r.percentile).sum::<f64>() / runs as f64;
    DEResult {
        method,
        runs,
        seed,
        mean_percentile,
        per_run,
    }
}

/// Runs `runs` adaptive walks from uniformly random start nodes. Run `r`
/// draws its start and its stochastic choices from a generator seeded with
/// `seed + r`.
pub fn run_de(landscape: &Landscape, method: WalkMethod, runs: usize, seed: u64) -> Result<DEResult> {
    if runs == 0 {
        return Err(Error::InvalidParameter("runs must be at least 1".into()));
    }
    let n = landscape.node_count();
    Ok(execute(landscape, method, runs, seed, |_, rng| {
        rng.random_range(0..n)
    }))
}

/// Runs one walk from each supplied start genotype, in order. External tools
/// use this to seed the baseline with their own starting sets.
pub fn run_de_from(
    landscape: &Landscape,
    method: WalkMethod,
    starts: &[GenotypeCode],
    seed: u64,
) -> Result<DEResult> {
    if starts.is_empty() {
        return Err(Error::InvalidParameter("no start genotypes given".into()));
    }
    let nodes = starts
        .iter()
        .map(|&c| landscape.node_of(c).ok_or(Error::StartNotFound(c.0)))
        .collect::<Result<Vec<_>>>()?;
    Ok(execute(landscape, method, nodes.len(), seed, |r, _| nodes[r]))
}
