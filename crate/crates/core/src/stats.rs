//! Streaming moment accumulators and deterministic parallel reduction.
//!
//! Every parallel reduction in the crate splits its index range into chunks
//! of a fixed size, reduces each chunk sequentially, and merges the chunk
//! results in index order. The partition never depends on the thread count,
//! so results are bit-identical for any pool size.

use rayon::prelude::*;

/// Variances at or below this are treated as zero.
pub const VARIANCE_EPS: f64 = 1e-12;

pub(crate) const CHUNK: usize = 4096;

/// Maps `f` over `[0, len)` in fixed-size chunks and returns the per-chunk
/// results in chunk order.
pub(crate) fn chunked<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(std::ops::Range<usize>) -> T + Sync + Send,
{
    let chunks = len.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| f(c * CHUNK..((c + 1) * CHUNK).min(len)))
        .collect()
}

/// Univariate running mean and centered second moment.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    #[inline]
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        self.mean += delta * other.count as f64 / n;
        self.m2 += other.m2 + delta * delta * self.count as f64 * other.count as f64 / n;
        self.count += other.count;
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Population variance (divides by the count).
    pub fn variance(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.m2 / self.count as f64).max(0.0)
        }
    }
}

/// Running bivariate moments for a Pearson correlation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PearsonAcc {
    count: u64,
    mean_x: f64,
    mean_y: f64,
    m2_x: f64,
    m2_y: f64,
    c_xy: f64,
}

impl PearsonAcc {
    #[inline]
    pub fn push(&mut self, x: f64, y: f64) {
        self.count += 1;
        let n = self.count as f64;
        let dx = x - self.mean_x;
        let dy = y - self.mean_y;
        self.mean_x += dx / n;
        self.mean_y += dy / n;
        self.m2_x += dx * (x - self.mean_x);
        self.m2_y += dy * (y - self.mean_y);
        self.c_xy += dx * (y - self.mean_y);
    }

    pub fn merge(&mut self, o: &PearsonAcc) {
        if o.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *o;
            return;
        }
        let na = self.count as f64;
        let nb = o.count as f64;
        let n = na + nb;
        let dx = o.mean_x - self.mean_x;
        let dy = o.mean_y - self.mean_y;
        self.mean_x += dx * nb / n;
        self.mean_y += dy * nb / n;
        self.m2_x += o.m2_x + dx * dx * na * nb / n;
        self.m2_y += o.m2_y + dy * dy * na * nb / n;
        self.c_xy += o.c_xy + dx * dy * na * nb / n;
        self.count += o.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// Pearson coefficient, or `None` with fewer than two points or when
    /// either population variance is at most [`VARIANCE_EPS`].
    pub fn correlation(&self) -> Option<f64> {
        if self.count < 2 {
            return None;
        }
        let n = self.count as f64;
        let vx = self.m2_x / n;
        let vy = self.m2_y / n;
        if vx <= VARIANCE_EPS || vy <= VARIANCE_EPS {
            return None;
        }
        Some((self.c_xy / (self.m2_x.sqrt() * self.m2_y.sqrt())).clamp(-1.0, 1.0))
    }
}

pub fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let mut acc = PearsonAcc::default();
    for (&x, &y) in xs.iter().zip(ys) {
        acc.push(x, y);
    }
    acc.correlation()
}

pub(crate) fn merge_all<T, F: Fn(&mut T, &T)>(init: T, parts: &[T], merge: F) -> T {
    let mut acc = init;
    for p in parts {
        merge(&mut acc, p);
    }
    acc
}
