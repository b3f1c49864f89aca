//! Data model, column standardization, and the penalized objectives shared
//! by every solver and estimator in the crate.
//!
//! All formulas downstream assume columns scaled so that `||X_j||^2 = n`;
//! [`standardize_columns`] produces that representation and records the
//! scale factors needed to map coefficients back to the original units.

use ndarray::{Array1, Array2, ArrayView1, ShapeBuilder};

use crate::error::{Error, Result};

/// A response vector paired with its design matrix, validated at
/// construction: no NaN/Inf entries, `n >= 1`, `p >= 1`, matching shapes.
#[derive(Debug, Clone)]
pub struct Dataset {
    y: Array1<f64>,
    x: Array2<f64>,
}

impl Dataset {
    pub fn new(y: Array1<f64>, x: Array2<f64>) -> Result<Self> {
        let (n, p) = x.dim();
        if n == 0 || p == 0 {
            return Err(Error::InvalidData(format!(
                "design must have n >= 1 and p >= 1, got {n} x {p}"
            )));
        }
        if y.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "response has length {} but design has {n} rows",
                y.len()
            )));
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidData("response contains NaN/Inf".into()));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidData("design contains NaN/Inf".into()));
        }
        Ok(Self { y, x })
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    pub fn y(&self) -> &Array1<f64> {
        &self.y
    }

    pub fn x(&self) -> &Array2<f64> {
        &self.x
    }

    /// Default tolerance below which a column norm counts as zero.
    pub fn default_drop_tol(&self) -> f64 {
        1e-10 * (self.n() as f64).sqrt()
    }

    /// Returns a copy with `y` and every column of `X` centered to mean
    /// zero. Off by default; the model carries no intercept.
    pub fn centered(&self) -> Dataset {
        let n = self.n() as f64;
        let y_mean = self.y.sum() / n;
        let y = self.y.mapv(|v| v - y_mean);
        let mut x = self.x.clone();
        for mut col in x.columns_mut() {
            let m = col.sum() / n;
            col.mapv_inplace(|v| v - m);
        }
        Dataset { y, x }
    }
}

/// Design matrix rescaled column-wise so that `||X_j||^2 = n` for every
/// column whose original norm exceeded the drop tolerance.
///
/// Columns below tolerance are recorded in `dropped`, kept in `X` as zero
/// columns, and never updated by solvers. Stored column-major so solvers
/// get contiguous column slices.
#[derive(Debug, Clone)]
pub struct StandardizedDesign {
    x: Array2<f64>,
    scales: Array1<f64>,
    dropped: Vec<usize>,
    col_norm2: Vec<f64>,
}

impl StandardizedDesign {
    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    pub fn x(&self) -> &Array2<f64> {
        &self.x
    }

    /// Original column norms divided by sqrt(n); zero for dropped columns.
    /// Coefficients map back to the original scale via
    /// `beta_orig[j] = beta_std[j] / scales[j]`.
    pub fn scales(&self) -> &Array1<f64> {
        &self.scales
    }

    pub fn dropped(&self) -> &[usize] {
        &self.dropped
    }

    pub fn is_dropped(&self, j: usize) -> bool {
        self.col_norm2[j] == 0.0
    }

    /// True when every column fell below the drop tolerance. Solvers then
    /// return `beta = 0`.
    pub fn all_dropped(&self) -> bool {
        self.dropped.len() == self.p()
    }

    /// Post-standardization squared column norms (`~ n` for kept columns,
    /// exactly 0 for dropped ones).
    pub fn col_norm2(&self) -> &[f64] {
        &self.col_norm2
    }

    /// Contiguous slice of column `j`.
    pub fn col_slice(&self, j: usize) -> &[f64] {
        let n = self.n();
        &self.buf()[j * n..(j + 1) * n]
    }

    pub(crate) fn buf(&self) -> &[f64] {
        self.x
            .as_slice_memory_order()
            .expect("standardized design is always stored contiguously")
    }

    /// `X beta` on the standardized scale.
    pub fn predict(&self, beta: &Array1<f64>) -> Array1<f64> {
        self.x.dot(beta)
    }

    /// Maps standardized coefficients back to the original column scale;
    /// dropped columns stay exactly zero.
    pub fn to_original_scale(&self, beta_std: &Array1<f64>) -> Array1<f64> {
        Array1::from_iter(
            beta_std
                .iter()
                .zip(self.scales.iter())
                .map(|(&b, &s)| if s > 0.0 { b / s } else { 0.0 }),
        )
    }
}

/// Rescales each column with `||X_j|| > drop_tol` so that `||X_j||^2 = n`;
/// columns at or below tolerance are zeroed and recorded as dropped.
///
/// Idempotent: standardizing an already standardized design changes nothing
/// beyond rounding at the 1e-12 level.
pub fn standardize_columns(data: &Dataset, drop_tol: f64) -> Result<StandardizedDesign> {
    if drop_tol.is_nan() || drop_tol < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "drop_tol must be nonnegative, got {drop_tol}"
        )));
    }
    let n = data.n();
    let p = data.p();
    let sqrt_n = (n as f64).sqrt();

    let mut buf = vec![0.0; n * p];
    let mut scales = Array1::zeros(p);
    let mut dropped = Vec::new();
    let mut col_norm2 = vec![0.0; p];

    for j in 0..p {
        let col = data.x.column(j);
        let norm = col.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > drop_tol {
            let scale = norm / sqrt_n;
            scales[j] = scale;
            let out = &mut buf[j * n..(j + 1) * n];
            for (o, &v) in out.iter_mut().zip(col.iter()) {
                *o = v / scale;
            }
            col_norm2[j] = out.iter().map(|v| v * v).sum::<f64>();
        } else {
            dropped.push(j);
        }
    }

    let x = Array2::from_shape_vec((n, p).f(), buf)
        .expect("buffer length matches the requested shape");
    Ok(StandardizedDesign {
        x,
        scales,
        dropped,
        col_norm2,
    })
}

/// Which penalty the objective carries: `2 lambda ||b||_1` or
/// `2 lambda ||b||_1^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PenaltyKind {
    L1,
    L1Squared,
}

/// A tuning parameter paired with its penalty kind.
#[derive(Debug, Clone, Copy)]
pub struct PenaltySpec {
    pub lambda: f64,
    pub kind: PenaltyKind,
}

impl PenaltySpec {
    pub fn new(lambda: f64, kind: PenaltyKind) -> Result<Self> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "lambda must be a finite nonnegative real, got {lambda}"
            )));
        }
        Ok(Self { lambda, kind })
    }

    pub fn l1(lambda: f64) -> Result<Self> {
        Self::new(lambda, PenaltyKind::L1)
    }

    pub fn l1_squared(lambda: f64) -> Result<Self> {
        Self::new(lambda, PenaltyKind::L1Squared)
    }
}

/// Soft-threshold operator `sign(a) * max(|a| - b, 0)`, `b >= 0`.
///
/// Produces exact zeros inside the dead zone; coordinate descent relies on
/// that for exact sparsity.
#[inline]
pub fn soft_threshold(a: f64, b: f64) -> f64 {
    debug_assert!(b >= 0.0);
    if a > b {
        a - b
    } else if a < -b {
        a + b
    } else {
        0.0
    }
}

/// Penalized objective `n^-1 ||y - X b||^2 + 2 lambda ||b||_1` (L1) or
/// `n^-1 ||y - X b||^2 + 2 lambda ||b||_1^2` (L1Squared).
pub fn objective(
    sd: &StandardizedDesign,
    y: ArrayView1<'_, f64>,
    beta: &Array1<f64>,
    pen: PenaltySpec,
) -> f64 {
    assert_eq!(y.len(), sd.n(), "response length must match the design");
    assert_eq!(beta.len(), sd.p(), "coefficient length must match the design");
    let fitted = sd.predict(beta);
    let rss: f64 = y
        .iter()
        .zip(fitted.iter())
        .map(|(&yi, &fi)| (yi - fi) * (yi - fi))
        .sum();
    let l1: f64 = beta.iter().map(|b| b.abs()).sum();
    let pen_val = match pen.kind {
        PenaltyKind::L1 => 2.0 * pen.lambda * l1,
        PenaltyKind::L1Squared => 2.0 * pen.lambda * l1 * l1,
    };
    rss / sd.n() as f64 + pen_val
}

/// `n^-1 ||X^T r||_inf`, the largest absolute column-residual correlation.
pub fn max_abs_correlation(sd: &StandardizedDesign, r: ArrayView1<'_, f64>) -> f64 {
    assert_eq!(r.len(), sd.n(), "residual length must match the design");
    let n = sd.n();
    let owned;
    let r = match r.as_slice() {
        Some(s) => s,
        None => {
            owned = r.to_vec();
            &owned
        }
    };
    let mut best = 0.0_f64;
    for j in 0..sd.p() {
        let dot: f64 = crate::solvers::dot(sd.col_slice(j), r);
        best = best.max(dot.abs());
    }
    best / n as f64
}

/// Output of a coordinate-descent solve on the standardized scale.
#[derive(Debug, Clone)]
pub struct FitResult {
    /// Coefficients on the standardized scale; exactly zero for dropped
    /// columns.
    pub beta: Array1<f64>,
    /// Value of the penalized objective at `beta`.
    pub objective: f64,
    /// Coordinate sweeps performed (full cyclic plus active-set-restricted
    /// passes, all in ascending coordinate order).
    pub iterations: usize,
    pub converged: bool,
    /// Primal objective minus a feasible dual value, when a certificate was
    /// evaluated (`lambda > 0`).
    pub duality_gap: Option<f64>,
}

impl FitResult {
    /// Count of exactly nonzero coefficients.
    pub fn nnz(&self) -> usize {
        self.beta.iter().filter(|b| **b != 0.0).count()
    }
}
