//! Shared helpers for the acceptance suite: random instances and the
//! exhaustive grid-search oracle. The oracle evaluates the penalized
//! objective from precomputed sufficient statistics and never touches the
//! solver path it validates.

use ndarray::{Array1, Array2};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use varsigma::{standardize_columns, Dataset, StandardizedDesign};

pub fn uniform_instance(seed: u64, n: usize, p: usize) -> (StandardizedDesign, Array1<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = Array2::from_shape_fn((n, p), |_| rng.random_range(-2.0..2.0));
    let y = Array1::from_shape_fn(n, |_| rng.random_range(-2.0..2.0));
    let ds = Dataset::new(y.clone(), x).unwrap();
    (standardize_columns(&ds, ds.default_drop_tol()).unwrap(), y)
}

pub fn gaussian_instance(seed: u64, n: usize, p: usize) -> (StandardizedDesign, Array1<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = Array2::from_shape_fn((n, p), |_| {
        rng.sample::<f64, _>(rand_distr::StandardNormal)
    });
    let y = Array1::from_shape_fn(n, |_| rng.sample::<f64, _>(rand_distr::StandardNormal));
    let ds = Dataset::new(y.clone(), x).unwrap();
    (standardize_columns(&ds, ds.default_drop_tol()).unwrap(), y)
}

/// Sufficient statistics of `n^-1 ||y - X b||^2`:
/// `c - 2 b' xty + b' xtx b` with everything divided by n.
pub struct QuadStats {
    pub c: f64,
    pub xty: Vec<f64>,
    pub xtx: Vec<Vec<f64>>,
    pub p: usize,
}

impl QuadStats {
    pub fn new(sd: &StandardizedDesign, y: &Array1<f64>) -> Self {
        let n = sd.n() as f64;
        let p = sd.p();
        let x = sd.x();
        let c = y.iter().map(|v| v * v).sum::<f64>() / n;
        let xty: Vec<f64> = (0..p).map(|j| x.column(j).dot(y) / n).collect();
        let xtx: Vec<Vec<f64>> = (0..p)
            .map(|j| (0..p).map(|k| x.column(j).dot(&x.column(k)) / n).collect())
            .collect();
        Self { c, xty, xtx, p }
    }

    #[inline]
    pub fn value(&self, beta: &[f64], lambda: f64, squared: bool) -> f64 {
        let mut quad = self.c;
        let mut l1 = 0.0;
        for j in 0..self.p {
            quad -= 2.0 * beta[j] * self.xty[j];
            l1 += beta[j].abs();
            for k in 0..self.p {
                quad += beta[j] * self.xtx[j][k] * beta[k];
            }
        }
        quad + if squared { 2.0 * lambda * l1 * l1 } else { 2.0 * lambda * l1 }
    }
}

/// Exhaustive grid search over `[-2, 2]^p` (p <= 2) at the coarse step,
/// refined locally at the fine step. Returns the minimum objective values
/// of the l1 and squared-l1 problems.
pub fn grid_search_minima(
    stats: &QuadStats,
    lambda: f64,
    coarse: f64,
    fine: f64,
) -> (f64, f64) {
    assert!(stats.p == 1 || stats.p == 2, "oracle covers p in {{1, 2}}");
    let coarse_pts = axis_points(-2.0, 2.0, coarse);

    match stats.p {
        1 => {
            let (arg1, min1) = scan_1d(stats, lambda, false, &coarse_pts);
            let (arg2, min2) = scan_1d(stats, lambda, true, &coarse_pts);
            let fine1 = axis_points(arg1 - 1.5 * coarse, arg1 + 1.5 * coarse, fine);
            let fine2 = axis_points(arg2 - 1.5 * coarse, arg2 + 1.5 * coarse, fine);
            let (_, m1) = scan_1d(stats, lambda, false, &fine1);
            let (_, m2) = scan_1d(stats, lambda, true, &fine2);
            (min1.min(m1), min2.min(m2))
        }
        _ => {
            let ((a1, b1), min1, (a2, b2), min2) = scan_2d_both(stats, lambda, &coarse_pts, &coarse_pts);
            let f1a = axis_points(a1 - 1.5 * coarse, a1 + 1.5 * coarse, fine);
            let f1b = axis_points(b1 - 1.5 * coarse, b1 + 1.5 * coarse, fine);
            let f2a = axis_points(a2 - 1.5 * coarse, a2 + 1.5 * coarse, fine);
            let f2b = axis_points(b2 - 1.5 * coarse, b2 + 1.5 * coarse, fine);
            let (_, m1) = scan_2d(stats, lambda, false, &f1a, &f1b);
            let (_, m2) = scan_2d(stats, lambda, true, &f2a, &f2b);
            (min1.min(m1), min2.min(m2))
        }
    }
}

fn axis_points(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let count = ((hi - lo) / step).round() as usize + 1;
    (0..count).map(|i| lo + step * i as f64).collect()
}

fn scan_1d(stats: &QuadStats, lambda: f64, squared: bool, pts: &[f64]) -> (f64, f64) {
    let mut best = (0.0, f64::INFINITY);
    for &b in pts {
        let v = stats.value(&[b], lambda, squared);
        if v < best.1 {
            best = (b, v);
        }
    }
    best
}

fn scan_2d(
    stats: &QuadStats,
    lambda: f64,
    squared: bool,
    pts_a: &[f64],
    pts_b: &[f64],
) -> ((f64, f64), f64) {
    let mut best = ((0.0, 0.0), f64::INFINITY);
    for &a in pts_a {
        for &b in pts_b {
            let v = stats.value(&[a, b], lambda, squared);
            if v < best.1 {
                best = ((a, b), v);
            }
        }
    }
    best
}

/// One coarse pass scoring both penalties at once; the quadratic part is
/// shared, so this costs barely more than a single scan.
fn scan_2d_both(
    stats: &QuadStats,
    lambda: f64,
    pts_a: &[f64],
    pts_b: &[f64],
) -> ((f64, f64), f64, (f64, f64), f64) {
    let (c, xty, xtx) = (stats.c, &stats.xty, &stats.xtx);
    let (a00, a01, a11) = (xtx[0][0], xtx[0][1], xtx[1][1]);
    let mut best1 = ((0.0, 0.0), f64::INFINITY);
    let mut best2 = ((0.0, 0.0), f64::INFINITY);
    for &a in pts_a {
        let qa = c - 2.0 * a * xty[0] + a * a * a00;
        let abs_a = a.abs();
        for &b in pts_b {
            let quad = qa - 2.0 * b * xty[1] + 2.0 * a * b * a01 + b * b * a11;
            let l1 = abs_a + b.abs();
            let v1 = quad + 2.0 * lambda * l1;
            if v1 < best1.1 {
                best1 = ((a, b), v1);
            }
            let v2 = quad + 2.0 * lambda * l1 * l1;
            if v2 < best2.1 {
                best2 = ((a, b), v2);
            }
        }
    }
    (best1.0, best1.1, best2.0, best2.1)
}
