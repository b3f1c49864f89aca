//! The error variance estimators, each returning a [`VarianceEstimate`]
//! with tuning, sparsity, convergence, and identity diagnostics.

use ndarray::Array1;
use serde::Serialize;

use crate::design::{PenaltyKind, PenaltySpec, StandardizedDesign};
use crate::error::{Error, Result};
use crate::solvers::{lasso_cd, organic_cd, sqrt_lasso, SolverOptions};

/// Which estimator produced a [`VarianceEstimate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Naive,
    Reid,
    Natural,
    Organic,
    SqrtLasso,
    Oracle,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Naive,
        Method::Reid,
        Method::Natural,
        Method::Organic,
        Method::SqrtLasso,
        Method::Oracle,
    ];

    /// Stable short tag used in CSV reports and CLI flags.
    pub fn tag(&self) -> &'static str {
        match self {
            Method::Naive => "naive",
            Method::Reid => "reid",
            Method::Natural => "natural",
            Method::Organic => "organic",
            Method::SqrtLasso => "sqrt",
            Method::Oracle => "oracle",
        }
    }

    pub fn parse(s: &str) -> Result<Method> {
        match s {
            "naive" => Ok(Method::Naive),
            "reid" => Ok(Method::Reid),
            "natural" => Ok(Method::Natural),
            "organic" => Ok(Method::Organic),
            "sqrt" | "sqrt_lasso" | "sqrt-lasso" => Ok(Method::SqrtLasso),
            "oracle" => Ok(Method::Oracle),
            other => Err(Error::InvalidParameter(format!("unknown method `{other}`"))),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// An estimated error variance plus diagnostics.
#[derive(Debug, Clone)]
pub struct VarianceEstimate {
    /// Estimated error variance, in squared response units.
    pub sigma2: f64,
    pub method: Method,
    /// Tuning value used, when the method has one.
    pub lambda: Option<f64>,
    /// Count of exactly nonzero coefficients (present whenever a fit was
    /// run; always present for the degrees-of-freedom adjusted method).
    pub nnz: Option<usize>,
    /// Underlying coefficients on the standardized scale, when available.
    pub beta: Option<Array1<f64>>,
    /// False when the underlying solver hit its sweep budget; the estimate
    /// is still the best iterate and the caller decides severity.
    pub converged: bool,
    /// Certificate from the underlying solve, when one exists.
    pub duality_gap: Option<f64>,
    /// Absolute discrepancy of the optimal-value identity
    /// (`n^-1 (||y||^2 - ||X b||^2)` for the natural lasso and its
    /// squared-penalty analogue), recorded as a diagnostic.
    pub identity_residual: Option<f64>,
}

fn sum_sq(v: &Array1<f64>) -> f64 {
    v.iter().map(|x| x * x).sum()
}

/// Natural lasso: the optimal value of the l1-penalized least-squares
/// objective. Also verifies the energy identity
/// `sigma2 = n^-1 (||y||^2 - ||X beta||^2)` and records the discrepancy.
pub fn natural_variance(
    sd: &StandardizedDesign,
    y: &Array1<f64>,
    lambda: f64,
    opts: &SolverOptions,
) -> VarianceEstimate {
    let fit = lasso_cd(sd, y, lambda, opts);
    let n = sd.n() as f64;
    let fitted = sd.predict(&fit.beta);
    let identity = (sum_sq(y) - sum_sq(&fitted)) / n;
    let residual = (fit.objective - identity).abs();
    VarianceEstimate {
        sigma2: fit.objective,
        method: Method::Natural,
        lambda: Some(lambda),
        nnz: Some(fit.nnz()),
        converged: fit.converged,
        duality_gap: fit.duality_gap,
        identity_residual: Some(residual),
        beta: Some(fit.beta),
    }
}

/// Organic lasso: the optimal value of the squared-l1-penalized
/// least-squares objective. Verifies the identity
/// `sigma2 = n^-1 (||y||^2 - ||X beta||^2 - 2 n lambda ||beta||_1^2)`.
pub fn organic_variance(
    sd: &StandardizedDesign,
    y: &Array1<f64>,
    lambda: f64,
    opts: &SolverOptions,
) -> VarianceEstimate {
    let fit = organic_cd(sd, y, lambda, opts);
    let n = sd.n() as f64;
    let fitted = sd.predict(&fit.beta);
    let l1: f64 = fit.beta.iter().map(|b| b.abs()).sum();
    let identity = (sum_sq(y) - sum_sq(&fitted) - 2.0 * n * lambda * l1 * l1) / n;
    let residual = (fit.objective - identity).abs();
    VarianceEstimate {
        sigma2: fit.objective,
        method: Method::Organic,
        lambda: Some(lambda),
        nnz: Some(fit.nnz()),
        converged: fit.converged,
        duality_gap: fit.duality_gap,
        identity_residual: Some(residual),
        beta: Some(fit.beta),
    }
}

/// Mean squared residual `n^-1 ||y - X beta||^2` at a given coefficient
/// vector; biased downward when `beta` overfits.
pub fn naive_variance(
    sd: &StandardizedDesign,
    y: &Array1<f64>,
    beta: &Array1<f64>,
) -> VarianceEstimate {
    assert_eq!(beta.len(), sd.p(), "coefficient length must match the design");
    let fitted = sd.predict(beta);
    let rss: f64 = y
        .iter()
        .zip(fitted.iter())
        .map(|(&yi, &fi)| (yi - fi) * (yi - fi))
        .sum();
    VarianceEstimate {
        sigma2: rss / sd.n() as f64,
        method: Method::Naive,
        lambda: None,
        nnz: Some(beta.iter().filter(|b| **b != 0.0).count()),
        converged: true,
        duality_gap: None,
        identity_residual: None,
        beta: Some(beta.clone()),
    }
}

/// Degrees-of-freedom adjusted estimator
/// `(n - s)^-1 ||y - X beta||^2` with `s` the count of exactly nonzero
/// lasso coefficients at `lambda_cv`.
///
/// Errors when `s >= n`: the estimate is undefined there and the failure is
/// surfaced rather than clamped.
pub fn reid_variance(
    sd: &StandardizedDesign,
    y: &Array1<f64>,
    lambda_cv: f64,
    opts: &SolverOptions,
) -> Result<VarianceEstimate> {
    let fit = lasso_cd(sd, y, lambda_cv, opts);
    let n = sd.n();
    let nnz = fit.nnz();
    if nnz >= n {
        return Err(Error::SaturatedFit { nnz, n });
    }
    let fitted = sd.predict(&fit.beta);
    let rss: f64 = y
        .iter()
        .zip(fitted.iter())
        .map(|(&yi, &fi)| (yi - fi) * (yi - fi))
        .sum();
    Ok(VarianceEstimate {
        sigma2: rss / (n - nnz) as f64,
        method: Method::Reid,
        lambda: Some(lambda_cv),
        nnz: Some(nnz),
        converged: fit.converged,
        duality_gap: fit.duality_gap,
        identity_residual: None,
        beta: Some(fit.beta),
    })
}

/// Square-root/scaled lasso estimate `n^-1 ||y - X beta||^2` at its own
/// scale-equivariant fit.
pub fn sqrt_variance(
    sd: &StandardizedDesign,
    y: &Array1<f64>,
    lambda: f64,
    opts: &SolverOptions,
) -> Result<VarianceEstimate> {
    let (fit, sigma2) = sqrt_lasso(sd, y, lambda, opts)?;
    Ok(VarianceEstimate {
        sigma2,
        method: Method::SqrtLasso,
        lambda: Some(lambda),
        nnz: Some(fit.nnz()),
        converged: fit.converged,
        duality_gap: fit.duality_gap,
        identity_residual: None,
        beta: Some(fit.beta),
    })
}

/// Oracle `n^-1 ||eps||^2`, available only when the true noise vector is
/// known (simulation).
pub fn oracle_variance(eps: &Array1<f64>) -> VarianceEstimate {
    VarianceEstimate {
        sigma2: sum_sq(eps) / eps.len() as f64,
        method: Method::Oracle,
        lambda: None,
        nnz: None,
        beta: None,
        converged: true,
        duality_gap: None,
        identity_residual: None,
    }
}

/// Objective value of the penalized problem backing a method, used by
/// identity tests.
pub fn penalized_objective_of(
    sd: &StandardizedDesign,
    y: &Array1<f64>,
    beta: &Array1<f64>,
    lambda: f64,
    kind: PenaltyKind,
) -> f64 {
    crate::design::objective(sd, y.view(), beta, PenaltySpec { lambda, kind })
}
