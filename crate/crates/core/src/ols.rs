//! Ordinary least squares for 0/1 indicator designs.
//!
//! Rows are described by the list of columns that are 1. The Gram matrix is
//! then a table of co-occurrence counts, accumulated exactly in integers, and
//! the normal equations are solved by Cholesky after an eigenvalue rank check.
//! Ill-conditioned but full-rank designs fall back to a thin QR of the
//! explicit design matrix.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Largest design the solver accepts.
pub const MAX_COLUMNS: usize = 2048;

const RANK_RTOL: f64 = 1e-10;
const QR_CONDITION: f64 = 1e8;
const QR_MAX_CELLS: usize = 50_000_000;

#[derive(Debug, Clone)]
pub struct IndicatorFit {
    pub coefficients: Vec<f64>,
    pub residual_ss: f64,
    pub total_ss: f64,
    pub rows: usize,
}

impl IndicatorFit {
    pub fn rmse(&self) -> f64 {
        (self.residual_ss / self.rows as f64).sqrt()
    }

    /// Coefficient of determination; `None` when `y` has no spread.
    pub fn r_squared(&self) -> Option<f64> {
        if self.total_ss / self.rows as f64 <= crate::stats::VARIANCE_EPS {
            None
        } else {
            Some((1.0 - self.residual_ss / self.total_ss).clamp(0.0, 1.0))
        }
    }
}

/// Fits `y ≈ X β` where row `r` of `X` has ones at the columns written by
/// `active(r, buf)` and zeros elsewhere.
pub fn fit_indicator<F>(rows: usize, columns: usize, active: F, y: &[f64]) -> Result<IndicatorFit>
where
    F: Fn(usize, &mut Vec<usize>),
{
    if columns > MAX_COLUMNS {
        return Err(Error::InvalidParameter(format!(
            "design has {columns} columns; limit is {MAX_COLUMNS}"
        )));
    }
    if rows < columns {
        return Err(Error::DegenerateFit { rank: rows, columns });
    }
    let mut gram = vec![0u64; columns * columns];
    let mut xty = vec![0.0f64; columns];
    let mut buf = Vec::new();
    for (r, &yr) in y[..rows].iter().enumerate() {
        buf.clear();
        active(r, &mut buf);
        for (k, &a) in buf.iter().enumerate() {
            xty[a] += yr;
            for &b in &buf[k..] {
                gram[a * columns + b] += 1;
            }
        }
    }
    let mut g = DMatrix::<f64>::zeros(columns, columns);
    for a in 0..columns {
        for b in 0..columns {
            let c = gram[a * columns + b] + if a != b { gram[b * columns + a] } else { 0 };
            g[(a, b)] = c as f64;
        }
    }

    let eig = g.clone().symmetric_eigenvalues();
    let max_eig = eig.iter().cloned().fold(0.0f64, f64::max);
    let min_eig = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    let rank = eig.iter().filter(|&&e| e > max_eig * RANK_RTOL).count();
    if max_eig <= 0.0 || rank < columns {
        return Err(Error::DegenerateFit { rank, columns });
    }

    let beta: DVector<f64> = if max_eig / min_eig > QR_CONDITION && rows * columns <= QR_MAX_CELLS
    {
        let mut x = DMatrix::<f64>::zeros(rows, columns);
        for r in 0..rows {
            buf.clear();
            active(r, &mut buf);
            for &a in &buf {
                x[(r, a)] = 1.0;
            }
        }
        let qr = x.qr();
        let qty = qr.q().transpose() * DVector::from_column_slice(y);
        qr.r()
            .solve_upper_triangular(&qty)
            .ok_or(Error::DegenerateFit { rank, columns })?
    } else {
        let chol = g
            .cholesky()
            .ok_or(Error::DegenerateFit { rank, columns })?;
        chol.solve(&DVector::from_vec(xty))
    };

    let mean = y.iter().sum::<f64>() / rows as f64;
    let mut residual_ss = 0.0;
    let mut total_ss = 0.0;
    for (r, &yr) in y[..rows].iter().enumerate() {
        buf.clear();
        active(r, &mut buf);
        let pred: f64 = buf.iter().map(|&a| beta[a]).sum();
        residual_ss += (yr - pred).powi(2);
        total_ss += (yr - mean).powi(2);
    }
    Ok(IndicatorFit {
        coefficients: beta.iter().cloned().collect(),
        residual_ss,
        total_ss,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_factorial_two_locus() {
        // rows 00, 10, 01, 11 (locus 0 first); columns: intercept, x0, x1
        let bits = [(0, 0), (1, 0), (0, 1), (1, 1)];
        let y = [0.0, 1.0, 1.0, 0.5];
        let fit = fit_indicator(
            4,
            3,
            |r, buf| {
                buf.push(0);
                if bits[r].0 == 1 {
                    buf.push(1);
                }
                if bits[r].1 == 1 {
                    buf.push(2);
                }
            },
            &y,
        )
        .unwrap();
        assert!((fit.coefficients[0] - 0.375).abs() < 1e-12);
        assert!((fit.coefficients[1] - 0.25).abs() < 1e-12);
        assert!((fit.coefficients[2] - 0.25).abs() < 1e-12);
        assert!((fit.rmse() - 0.375).abs() < 1e-12);
    }

    #[test]
    fn rank_deficient_is_reported() {
        // column 2 duplicates column 1
        let y = [1.0, 2.0, 3.0];
        let r = fit_indicator(
            3,
            3,
            |r, buf| {
                buf.push(0);
                if r > 0 {
                    buf.push(1);
                    buf.push(2);
                }
            },
            &y,
        );
        assert!(matches!(r, Err(Error::DegenerateFit { rank: 2, columns: 3 })));
    }
}
