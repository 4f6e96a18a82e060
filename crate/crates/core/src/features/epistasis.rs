//! Pairwise epistasis classification, global epistasis trends, the
//! idiosyncrasy index, and variance explained by a second-order model.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::genotype::GenotypeCode;
use crate::landscape::Landscape;
use crate::ols::fit_indicator;
use crate::stats::{chunked, merge_all, Moments, PearsonAcc, VARIANCE_EPS};

use super::ruggedness::main_effect_offsets;

/// Four observed genotypes `g, g_[i], g_[j], g_[ij]`, with `g` carrying the
/// lower allele index at both loci.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpistasisSquare {
    pub background: GenotypeCode,
    pub loci: (usize, usize),
    pub targets: (usize, usize),
    /// `[f(g), f(g_[i]), f(g_[j]), f(g_[ij])]`
    pub corners: [f64; 4],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EpistasisKind {
    None,
    Magnitude,
    Sign,
    ReciprocalSign,
}

impl EpistasisSquare {
    pub fn epsilon(&self) -> f64 {
        let [g, gi, gj, gij] = self.corners;
        gij - gi - gj + g
    }

    /// Classification by the sign products s_i(g)·s_i(g_[j]) and
    /// s_j(g)·s_j(g_[i]); a zero product counts as no sign change.
    pub fn classify(&self, eps_tol: f64) -> EpistasisKind {
        if self.epsilon().abs() <= eps_tol {
            return EpistasisKind::None;
        }
        let [g, gi, gj, gij] = self.corners;
        let flip_i = (gi - g) * (gij - gj) < 0.0;
        let flip_j = (gj - g) * (gij - gi) < 0.0;
        match (flip_i, flip_j) {
            (true, true) => EpistasisKind::ReciprocalSign,
            (false, false) => EpistasisKind::Magnitude,
            _ => EpistasisKind::Sign,
        }
    }
}

/// Visits every complete square exactly once, in node order.
pub fn for_each_square(
    landscape: &Landscape,
    range: std::ops::Range<usize>,
    mut visit: impl FnMut(EpistasisSquare),
) {
    let space = landscape.space();
    let n = space.n_loci();
    let f = landscape.fitness();
    for g in range {
        let code = landscape.code(g);
        for i in 0..n {
            let ai = space.digit(code, i);
            for bi in ai + 1..space.radix(i) {
                let Some(gi) = landscape.mutant(g, i, bi) else {
                    continue;
                };
                for j in i + 1..n {
                    let aj = space.digit(code, j);
                    for bj in aj + 1..space.radix(j) {
                        let (Some(gj), Some(gij)) =
                            (landscape.mutant(g, j, bj), landscape.mutant(gi, j, bj))
                        else {
                            continue;
                        };
                        visit(EpistasisSquare {
                            background: code,
                            loci: (i, j),
                            targets: (bi, bj),
                            corners: [f[g], f[gi], f[gj], f[gij]],
                        });
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SquareCounts {
    pub total: u64,
    pub epistatic: u64,
    pub magnitude: u64,
    pub sign: u64,
    pub reciprocal: u64,
    pub positive: u64,
    pub negative: u64,
}

impl SquareCounts {
    fn add(&mut self, o: &SquareCounts) {
        self.total += o.total;
        self.epistatic += o.epistatic;
        self.magnitude += o.magnitude;
        self.sign += o.sign;
        self.reciprocal += o.reciprocal;
        self.positive += o.positive;
        self.negative += o.negative;
    }
}

/// Epistasis-type fractions over epistatic squares (|ε| > tolerance).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpistasisFractions {
    pub eps_mag: f64,
    pub eps_sign: f64,
    pub eps_reci: f64,
    pub eps_pos: f64,
    pub eps_neg: f64,
    pub counts: SquareCounts,
    /// Set when no square is epistatic; all fractions are then 0.
    pub no_epistatic_squares: bool,
}

pub fn square_counts(landscape: &Landscape, eps_tol: f64) -> SquareCounts {
    let parts = chunked(landscape.node_count(), |range| {
        let mut c = SquareCounts::default();
        for_each_square(landscape, range, |sq| {
            c.total += 1;
            let kind = sq.classify(eps_tol);
            if kind == EpistasisKind::None {
                return;
            }
            c.epistatic += 1;
            match kind {
                EpistasisKind::Magnitude => c.magnitude += 1,
                EpistasisKind::Sign => c.sign += 1,
                EpistasisKind::ReciprocalSign => c.reciprocal += 1,
                EpistasisKind::None => unreachable!(),
            }
            if sq.epsilon() > 0.0 {
                c.positive += 1;
            } else {
                c.negative += 1;
            }
        });
        c
    });
    merge_all(SquareCounts::default(), &parts, SquareCounts::add)
}

pub fn classify_squares(landscape: &Landscape, eps_tol: f64) -> Result<EpistasisFractions> {
    if landscape.space().n_loci() < 2 {
        return Err(Error::SingleLocus);
    }
    let counts = square_counts(landscape, eps_tol);
    if counts.total == 0 {
        return Err(Error::NoCompleteSquares);
    }
    let frac = |k: u64| {
        if counts.epistatic == 0 {
            0.0
        } else {
            k as f64 / counts.epistatic as f64
        }
    };
    Ok(EpistasisFractions {
        eps_mag: frac(counts.magnitude),
        eps_sign: frac(counts.sign),
        eps_reci: frac(counts.reciprocal),
        eps_pos: frac(counts.positive),
        eps_neg: frac(counts.negative),
        counts,
        no_epistatic_squares: counts.epistatic == 0,
    })
}

/// Diminishing returns and increasing costs: correlation of background
/// fitness with beneficial effects, and with the magnitude of deleterious
/// effects, over all observed single-step mutations.
pub fn global_epistasis(landscape: &Landscape) -> (Option<f64>, Option<f64>) {
    let f = landscape.fitness();
    let parts = chunked(landscape.node_count(), |range| {
        let mut dr = PearsonAcc::default();
        let mut ic = PearsonAcc::default();
        for g in range {
            landscape.for_each_present_neighbor(g, |_, _, v| {
                let s = f[v] - f[g];
                if s > 0.0 {
                    dr.push(f[g], s);
                } else if s < 0.0 {
                    ic.push(f[g], -s);
                }
            });
        }
        (dr, ic)
    });
    let mut dr = PearsonAcc::default();
    let mut ic = PearsonAcc::default();
    for (a, b) in &parts {
        dr.merge(a);
        ic.merge(b);
    }
    (dr.correlation(), ic.correlation())
}

/// Mean over directed mutation types (i, a→b) of sd(s across backgrounds) /
/// sd(all selection coefficients). Types observed in fewer than two
/// backgrounds are skipped.
pub fn idiosyncrasy_index(landscape: &Landscape) -> Result<Option<f64>> {
    let space = landscape.space();
    let n = space.n_loci();
    let mut type_offset = Vec::with_capacity(n);
    let mut types = 0;
    for locus in 0..n {
        type_offset.push(types);
        types += space.radix(locus) * space.radix(locus);
    }
    let f = landscape.fitness();
    let parts = chunked(landscape.node_count(), |range| {
        let mut per_type = vec![Moments::default(); types];
        let mut global = Moments::default();
        for g in range {
            let code = landscape.code(g);
            landscape.for_each_present_neighbor(g, |locus, b, v| {
                let a = space.digit(code, locus);
                let s = f[v] - f[g];
                per_type[type_offset[locus] + a * space.radix(locus) + b].push(s);
                global.push(s);
            });
        }
        (per_type, global)
    });
    let mut per_type = vec![Moments::default(); types];
    let mut global = Moments::default();
    for (pt, gl) in &parts {
        for (acc, m) in per_type.iter_mut().zip(pt) {
            acc.merge(m);
        }
        global.merge(gl);
    }
    let vs = global.variance();
    if vs <= VARIANCE_EPS {
        return Err(Error::DegenerateVariance);
    }
    let sd = vs.sqrt();
    let mut total = 0.0;
    let mut used = 0usize;
    for m in per_type.iter().filter(|m| m.count >= 2) {
        total += m.variance().sqrt() / sd;
        used += 1;
    }
    Ok((used > 0).then(|| total / used as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairwiseFit {
    pub r2: Option<f64>,
    pub sampled: bool,
    pub rows: usize,
}

/// R² of a least-squares model with one-hot main effects and all pairwise
/// products of one-hot columns at distinct loci. Landscapes larger than
/// `max_fit_nodes` are fitted on a seeded uniform subsample.
pub fn pairwise_r2(landscape: &Landscape, max_fit_nodes: usize, seed: u64) -> Result<PairwiseFit> {
    let space = landscape.space();
    let n = space.n_loci();
    let (main, mut columns) = main_effect_offsets(landscape);
    let mut pair_offset = vec![0usize; n * n];
    for i in 0..n {
        for j in i + 1..n {
            pair_offset[i * n + j] = columns;
            columns += (space.radix(i) - 1) * (space.radix(j) - 1);
        }
    }
    let (rows, sampled): (Vec<usize>, bool) = if landscape.node_count() > max_fit_nodes {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut idx = rand::seq::index::sample(&mut rng, landscape.node_count(), max_fit_nodes)
            .into_vec();
        idx.sort_unstable();
        (idx, true)
    } else {
        ((0..landscape.node_count()).collect(), false)
    };
    let y: Vec<f64> = rows.iter().map(|&r| landscape.fitness()[r]).collect();
    let fit = fit_indicator(
        rows.len(),
        columns,
        |r, buf| {
            let code = landscape.code(rows[r]);
            buf.push(0);
            let mut alleles = [(0usize, 0usize); 64];
            let mut k = 0;
            for (locus, &offset) in main[..n].iter().enumerate() {
                let a = space.digit(code, locus);
                if a > 0 {
                    buf.push(offset + a - 1);
                    if k < alleles.len() {
                        alleles[k] = (locus, a);
                    }
                    k += 1;
                }
            }
            if k > alleles.len() {
                // rare wide case: recompute without the stack buffer
                let nonref: Vec<(usize, usize)> = (0..n)
                    .map(|l| (l, space.digit(code, l)))
                    .filter(|&(_, a)| a > 0)
                    .collect();
                push_pairs(&nonref, &pair_offset, n, space, buf);
            } else {
                push_pairs(&alleles[..k], &pair_offset, n, space, buf);
            }
        },
        &y,
    )?;
    Ok(PairwiseFit {
        r2: fit.r_squared(),
        sampled,
        rows: rows.len(),
    })
}

fn push_pairs(
    nonref: &[(usize, usize)],
    pair_offset: &[usize],
    n: usize,
    space: &crate::genotype::SequenceSpace,
    buf: &mut Vec<usize>,
) {
    for (x, &(i, ai)) in nonref.iter().enumerate() {
        for &(j, aj) in &nonref[x + 1..] {
            buf.push(pair_offset[i * n + j] + (ai - 1) * (space.radix(j) - 1) + (aj - 1));
        }
    }
}
