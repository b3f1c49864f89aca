//! Tuning-parameter selection: log-spaced lambda grids, seeded K-fold
//! cross-validation with warm starts, the fixed theoretical values
//! `lambda0 = (2 log(p) / n)^(1/2)` and `lambda2 = log(p) / n`, the Monte
//! Carlo value `lambda3 = E(n^-2 ||X^T eps||_inf^2)`, and the exact mapping
//! between the l1 and squared-l1 solution paths.

use ndarray::Array1;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::design::{FitResult, PenaltyKind, StandardizedDesign};
use crate::error::{Error, Result};
use crate::solvers::{
    dot, lambda_max_lasso, lasso_core, organic_core, sqrt_core, sqrt_lambda_max, CorePolicy,
    DesignRef, SolverOptions,
};

/// Strictly decreasing positive tuning values plus the anchor they started
/// from.
#[derive(Debug, Clone)]
pub struct LambdaGrid {
    values: Vec<f64>,
    anchor: f64,
}

impl LambdaGrid {
    /// Log-spaced grid of `count` values from `anchor` down to
    /// `anchor * ratio`.
    pub fn from_anchor(anchor: f64, count: usize, ratio: f64) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidParameter("grid needs at least 2 values".into()));
        }
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "grid ratio must lie in (0, 1), got {ratio}"
            )));
        }
        if !anchor.is_finite() || anchor <= 0.0 {
            return Err(Error::DegenerateGrid(format!(
                "anchor must be a positive real, got {anchor}"
            )));
        }
        let m = (count - 1) as f64;
        let values = (0..count)
            .map(|i| anchor * ratio.powf(i as f64 / m))
            .collect();
        Ok(Self { values, anchor })
    }

    pub fn single(value: f64) -> Result<Self> {
        if !value.is_finite() || value <= 0.0 {
            return Err(Error::DegenerateGrid(format!(
                "grid value must be a positive real, got {value}"
            )));
        }
        Ok(Self { values: vec![value], anchor: value })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn anchor(&self) -> f64 {
        self.anchor
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub const DEFAULT_GRID_COUNT: usize = 50;
pub const DEFAULT_GRID_RATIO: f64 = 1e-3;
pub const DEFAULT_CV_FOLDS: usize = 5;

/// Which fitting family a cross-validation run tunes. The naive,
/// degrees-of-freedom adjusted, and natural estimators all share the
/// `Lasso` family (one fit serves all three).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FitFamily {
    Lasso,
    Organic,
    Sqrt,
}

/// Builds a grid for a penalty kind. The L1 anchor is the smallest lambda
/// with a zero lasso solution; the squared-l1 anchor maps it through the
/// path correspondence `nu = lambda / (2 ||b||_1)` using a pilot fit at
/// `log(p) / n`, falling back to the L1 anchor when the pilot is degenerate.
pub fn make_grid(
    sd: &StandardizedDesign,
    y: &Array1<f64>,
    kind: PenaltyKind,
    count: usize,
    ratio: f64,
) -> Result<LambdaGrid> {
    let lmax = lambda_max_lasso(sd, y);
    if lmax.is_nan() || lmax <= 0.0 {
        return Err(Error::DegenerateGrid(
            "X^T y = 0: no penalized path exists for this data".into(),
        ));
    }
    let anchor = match kind {
        PenaltyKind::L1 => lmax,
        PenaltyKind::L1Squared => {
            let pilot_lambda = (sd.p().max(1) as f64).ln() / sd.n() as f64;
            if pilot_lambda > 0.0 {
                let pilot = organic_core(
                    &DesignRef::from_standardized(sd),
                    y.as_slice().expect("owned responses are contiguous"),
                    pilot_lambda,
                    &CorePolicy::strict(&SolverOptions::default()),
                    None,
                );
                let l1: f64 = pilot.beta.iter().map(|b| b.abs()).sum();
                if l1 > 0.0 {
                    lmax / (2.0 * l1)
                } else {
                    lmax
                }
            } else {
                lmax
            }
        }
    };
    LambdaGrid::from_anchor(anchor, count, ratio)
}

/// Grid for a fit family; `Sqrt` anchors at the smallest lambda with a zero
/// square-root-lasso solution.
pub fn make_grid_for_family(
    sd: &StandardizedDesign,
    y: &Array1<f64>,
    family: FitFamily,
    count: usize,
    ratio: f64,
) -> Result<LambdaGrid> {
    match family {
        FitFamily::Lasso => make_grid(sd, y, PenaltyKind::L1, count, ratio),
        FitFamily::Organic => make_grid(sd, y, PenaltyKind::L1Squared, count, ratio),
        FitFamily::Sqrt => {
            let anchor = sqrt_lambda_max(sd, y);
            if anchor.is_nan() || anchor <= 0.0 {
                return Err(Error::DegenerateGrid(
                    "X^T y = 0: no penalized path exists for this data".into(),
                ));
            }
            LambdaGrid::from_anchor(anchor, count, ratio)
        }
    }
}

/// Per-lambda cross-validation summary.
#[derive(Debug, Clone, PartialEq)]
pub struct CvPoint {
    pub lambda: f64,
    /// Mean over folds of the validation prediction MSE.
    pub mean_mse: f64,
    /// Standard error of that mean across folds.
    pub se_mse: f64,
}

/// Outcome of a K-fold cross-validation run.
#[derive(Debug, Clone, PartialEq)]
pub struct CvResult {
    pub chosen_lambda: f64,
    pub cv_curve: Vec<CvPoint>,
    pub fold_assignment_seed: u64,
}

struct Fold {
    train: Vec<f64>,
    y_train: Vec<f64>,
    norm2: Vec<f64>,
    val: Vec<f64>,
    y_val: Vec<f64>,
    n_train: usize,
    n_val: usize,
}

fn build_folds(sd: &StandardizedDesign, y: &Array1<f64>, k: usize, seed: u64) -> Result<Vec<Fold>> {
    let n = sd.n();
    let p = sd.p();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    // Contiguous blocks of the permuted indices; the first n % k folds take
    // one extra row.
    let base = n / k;
    let rem = n % k;
    let mut folds = Vec::with_capacity(k);
    let mut start = 0usize;
    for f in 0..k {
        let size = base + usize::from(f < rem);
        let val_rows = &perm[start..start + size];
        start += size;
        if val_rows.is_empty() {
            return Err(Error::InvalidParameter(format!("fold {f} has zero rows")));
        }
        let train_rows: Vec<usize> = perm[..start - size]
            .iter()
            .chain(perm[start..].iter())
            .copied()
            .collect();

        let n_train = train_rows.len();
        let n_val = val_rows.len();
        let mut train = vec![0.0; n_train * p];
        let mut val = vec![0.0; n_val * p];
        let mut norm2 = vec![0.0; p];
        let x = sd.x();
        for j in 0..p {
            let tcol = &mut train[j * n_train..(j + 1) * n_train];
            let mut s = 0.0;
            for (i, &row) in train_rows.iter().enumerate() {
                let v = x[[row, j]];
                tcol[i] = v;
                s += v * v;
            }
            norm2[j] = s;
            let vcol = &mut val[j * n_val..(j + 1) * n_val];
            for (i, &row) in val_rows.iter().enumerate() {
                vcol[i] = x[[row, j]];
            }
        }
        let y_train: Vec<f64> = train_rows.iter().map(|&r| y[r]).collect();
        let y_val: Vec<f64> = val_rows.iter().map(|&r| y[r]).collect();
        folds.push(Fold { train, y_train, norm2, val, y_val, n_train, n_val });
    }
    Ok(folds)
}

fn validation_mse(fold: &Fold, p: usize, beta: &Array1<f64>) -> f64 {
    let mut fitted = vec![0.0; fold.n_val];
    for j in 0..p {
        let b = beta[j];
        if b != 0.0 {
            let col = &fold.val[j * fold.n_val..(j + 1) * fold.n_val];
            for (fi, &xv) in fitted.iter_mut().zip(col) {
                *fi += b * xv;
            }
        }
    }
    let sse: f64 = fold
        .y_val
        .iter()
        .zip(&fitted)
        .map(|(&yv, &fv)| (yv - fv) * (yv - fv))
        .sum();
    sse / fold.n_val as f64
}

/// Deterministic seeded K-fold cross-validation over a lambda grid.
///
/// Folds are contiguous blocks of a seeded permutation; each fold fits the
/// family along the descending grid with warm starts and accumulates the
/// validation prediction MSE. The chosen lambda minimizes the mean MSE,
/// with ties broken toward the larger lambda.
///
/// Fold fits run under a bounded, certificate-free policy (they exist only
/// to produce validation errors); refit the chosen lambda on the full data
/// with [`crate::solvers::SolverOptions`] defaults to get a certified fit.
pub fn kfold_cv(
    sd: &StandardizedDesign,
    y: &Array1<f64>,
    family: FitFamily,
    grid: &LambdaGrid,
    k: usize,
    seed: u64,
) -> Result<CvResult> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("K must be at least 2, got {k}")));
    }
    if sd.n() < k {
        return Err(Error::InvalidParameter(format!(
            "n = {} observations cannot form K = {k} folds",
            sd.n()
        )));
    }
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty lambda grid".into()));
    }

    let p = sd.p();
    let policy = CorePolicy::cv();
    let folds = build_folds(sd, y, k, seed)?;
    let mut mse = vec![vec![0.0_f64; k]; grid.len()];

    for (fi, fold) in folds.iter().enumerate() {
        let d = DesignRef { x: &fold.train, n: fold.n_train, p, col_norm2: &fold.norm2 };
        let mut warm: Option<Array1<f64>> = None;
        for (gi, &lambda) in grid.values().iter().enumerate() {
            let warm_slice = warm.as_ref().map(|w: &Array1<f64>| {
                w.as_slice().expect("owned warm starts are contiguous")
            });
            let fit: Result<FitResult> = match family {
                FitFamily::Lasso => {
                    Ok(lasso_core(&d, &fold.y_train, lambda, &policy, warm_slice))
                }
                FitFamily::Organic => {
                    Ok(organic_core(&d, &fold.y_train, lambda, &policy, warm_slice))
                }
                FitFamily::Sqrt => {
                    sqrt_core(&d, &fold.y_train, lambda, &policy, warm_slice).map(|(f, _)| f)
                }
            };
            match fit {
                Ok(fit) => {
                    mse[gi][fi] = validation_mse(fold, p, &fit.beta);
                    warm = Some(fit.beta);
                }
                Err(_) => {
                    // A degenerate fold fit (exact interpolation at a small
                    // lambda) disqualifies this lambda rather than aborting
                    // CV, and every smaller lambda interpolates as well.
                    for row in mse.iter_mut().skip(gi) {
                        row[fi] = f64::INFINITY;
                    }
                    break;
                }
            }
        }
    }

    let kf = k as f64;
    let mut curve = Vec::with_capacity(grid.len());
    for (gi, &lambda) in grid.values().iter().enumerate() {
        let mean = mse[gi].iter().sum::<f64>() / kf;
        let var = mse[gi].iter().map(|m| (m - mean) * (m - mean)).sum::<f64>() / (kf - 1.0);
        curve.push(CvPoint { lambda, mean_mse: mean, se_mse: (var / kf).sqrt() });
    }

    // Grid is descending, so strict improvement keeps the largest lambda on
    // ties.
    let mut best = 0usize;
    for gi in 1..curve.len() {
        if curve[gi].mean_mse < curve[best].mean_mse {
            best = gi;
        }
    }
    if !curve[best].mean_mse.is_finite() {
        return Err(Error::DegenerateGrid(
            "every lambda in the grid produced a degenerate fold fit".into(),
        ));
    }

    Ok(CvResult {
        chosen_lambda: curve[best].lambda,
        cv_curve: curve,
        fold_assignment_seed: seed,
    })
}

/// The two closed-form tuning values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedLambda {
    /// `(2 log(p) / n)^(1/2)`
    Lambda0,
    /// `log(p) / n`
    Lambda2,
}

/// Evaluates a fixed tuning value. Natural logarithm throughout; requires
/// `n >= 1` and `p >= 2`.
pub fn lambda_fixed(n: usize, p: usize, variant: FixedLambda) -> f64 {
    assert!(n >= 1, "n must be at least 1");
    assert!(p >= 2, "p must be at least 2");
    let ratio = (p as f64).ln() / n as f64;
    match variant {
        FixedLambda::Lambda0 => (2.0 * ratio).sqrt(),
        FixedLambda::Lambda2 => ratio,
    }
}

/// Monte Carlo estimate of `E(n^-2 ||X^T eps||_inf^2)` over
/// `eps ~ N(0, I_n)`, drawn from a seeded generator.
pub fn lambda3_monte_carlo(sd: &StandardizedDesign, reps: usize, seed: u64) -> f64 {
    assert!(reps >= 1, "reps must be at least 1");
    let n = sd.n();
    let nf = n as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut eps = vec![0.0_f64; n];
    let mut acc = 0.0;
    for _ in 0..reps {
        for e in eps.iter_mut() {
            *e = rng.sample(StandardNormal);
        }
        let mut best = 0.0_f64;
        for j in 0..sd.p() {
            best = best.max(dot(sd.col_slice(j), &eps).abs());
        }
        let scaled = best / nf;
        acc += scaled * scaled;
    }
    acc / reps as f64
}

/// Direction of the path correspondence between the l1 and squared-l1
/// problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathDirection {
    NaturalToOrganic,
    OrganicToNatural,
}

/// Maps a tuning value across the two solution paths at a shared solution
/// `beta`: `nu = lambda / (2 ||beta||_1)` forward, `lambda = 2 nu ||beta||_1`
/// back. Refitting the other problem at the mapped value reproduces `beta`.
pub fn path_map(beta: &Array1<f64>, lambda: f64, direction: PathDirection) -> Result<f64> {
    let l1: f64 = beta.iter().map(|b| b.abs()).sum();
    match direction {
        PathDirection::NaturalToOrganic => {
            if l1 == 0.0 {
                return Err(Error::InvalidParameter(
                    "path map is undefined at a zero coefficient vector".into(),
                ));
            }
            Ok(lambda / (2.0 * l1))
        }
        PathDirection::OrganicToNatural => Ok(2.0 * lambda * l1),
    }
}
