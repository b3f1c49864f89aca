//! Synthetic model generation, multi-method Monte Carlo benchmarks, and
//! empirical verifiers for the deterministic and probabilistic bounds that
//! the objective-value estimators satisfy.
//!
//! Everything here is a pure function of `(spec, seed)`: replication `r`
//! draws from a generator seeded with `replication_seed(base_seed, r)`, and
//! aggregation reduces in replication order, so parallel and serial runs
//! produce identical reports.

use ndarray::{Array1, Array2};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;
use std::time::Instant;

use crate::design::{standardize_columns, Dataset, StandardizedDesign};
use crate::error::{Error, Result};
use crate::estimators::{
    naive_variance, natural_variance, oracle_variance, organic_variance, reid_variance,
    sqrt_variance, Method, VarianceEstimate,
};
use crate::solvers::SolverOptions;
use crate::tuning::{
    kfold_cv, lambda3_monte_carlo, lambda_fixed, make_grid_for_family, FitFamily, FixedLambda,
    DEFAULT_CV_FOLDS, DEFAULT_GRID_COUNT, DEFAULT_GRID_RATIO,
};

/// A synthetic model: equicorrelated Gaussian rows, `ceil(n^alpha)` Laplace
/// coefficients, and noise variance `tau^-1 beta*' Sigma beta*`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationSpec {
    pub n: usize,
    pub p: usize,
    /// Equicorrelation of the design rows, in `[0, 1)`.
    pub rho: f64,
    /// Sparsity exponent, in `(0, 1)`: the support has `ceil(n^alpha)`
    /// entries.
    pub alpha: f64,
    /// Signal-to-noise control, positive.
    pub tau: f64,
    pub seed: u64,
}

impl SimulationSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.p == 0 {
            return Err(Error::InvalidSpec("n and p must be positive".into()));
        }
        if !(self.rho >= 0.0 && self.rho < 1.0) {
            return Err(Error::InvalidSpec(format!("rho must lie in [0, 1), got {}", self.rho)));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidSpec(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.tau.is_nan() || self.tau <= 0.0 {
            return Err(Error::InvalidSpec(format!("tau must be positive, got {}", self.tau)));
        }
        let s = support_size(self.n, self.alpha);
        if s > self.p {
            return Err(Error::InvalidSpec(format!(
                "support size ceil(n^alpha) = {s} exceeds p = {}",
                self.p
            )));
        }
        Ok(())
    }

    pub fn support_size(&self) -> usize {
        support_size(self.n, self.alpha)
    }
}

/// `ceil(n^alpha)`, with a guard that snaps values within 1e-9 of an
/// integer before taking the ceiling (so `100^0.5` is 10, not 11).
pub fn support_size(n: usize, alpha: f64) -> usize {
    let t = (n as f64).powf(alpha);
    let r = t.round();
    let s = if (t - r).abs() < 1e-9 { r } else { t.ceil() };
    s as usize
}

/// One generated replication with its ground truth.
#[derive(Debug, Clone)]
pub struct ReplicationTruth {
    pub x: Array2<f64>,
    pub beta_star: Array1<f64>,
    pub eps: Array1<f64>,
    pub y: Array1<f64>,
    /// True error variance, computed in closed form.
    pub sigma2: f64,
    pub support: Vec<usize>,
}

/// Derives the seed for replication `rep` from a base seed. SplitMix64
/// finalizer over `base_seed + (rep + 1) * golden`, the standard mixing
/// construction; documented so runs are reproducible within this
/// implementation.
pub fn replication_seed(base_seed: u64, rep: u64) -> u64 {
    let mut z = base_seed
        .wrapping_add((rep.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Equicorrelated Gaussian design: each row is `sqrt(1-rho) g + sqrt(rho) z 1`
/// with `g ~ N(0, I_p)` and scalar `z ~ N(0, 1)`, giving `N(0, Sigma)` rows
/// with unit diagonal and constant off-diagonal `rho`. Columns are not
/// re-standardized here.
pub fn gen_design<R: Rng + ?Sized>(n: usize, p: usize, rho: f64, rng: &mut R) -> Array2<f64> {
    assert!((0.0..1.0).contains(&rho), "rho must lie in [0, 1)");
    let a = (1.0 - rho).sqrt();
    let b = rho.sqrt();
    let mut x = Array2::zeros((n, p));
    for i in 0..n {
        let z: f64 = rng.sample(StandardNormal);
        let shared = b * z;
        for j in 0..p {
            let g: f64 = rng.sample(StandardNormal);
            x[[i, j]] = a * g + shared;
        }
    }
    x
}

/// Laplace(rate 1) draw by inverse CDF on a uniform.
fn laplace_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.random();
    if u < 0.5 {
        (2.0 * u).max(f64::MIN_POSITIVE).ln()
    } else {
        -(2.0 * (1.0 - u)).max(f64::MIN_POSITIVE).ln()
    }
}

/// Sparse coefficients: a uniformly sampled support of `ceil(n^alpha)`
/// indices with i.i.d. Laplace(rate 1) values; all other entries exactly 0.
/// The support is drawn by partial Fisher-Yates and sorted before values
/// are assigned.
pub fn gen_coefficients<R: Rng + ?Sized>(
    n: usize,
    p: usize,
    alpha: f64,
    rng: &mut R,
) -> Result<(Array1<f64>, Vec<usize>)> {
    let s = support_size(n, alpha);
    if s > p {
        return Err(Error::InvalidSpec(format!(
            "support size ceil(n^alpha) = {s} exceeds p = {p}"
        )));
    }
    let mut idx: Vec<usize> = (0..p).collect();
    for i in 0..s {
        let j = rng.random_range(i..p);
        idx.swap(i, j);
    }
    let mut support: Vec<usize> = idx[..s].to_vec();
    support.sort_unstable();

    let mut beta = Array1::zeros(p);
    for &j in &support {
        beta[j] = laplace_unit(rng);
    }
    Ok((beta, support))
}

/// Noise and response: `sigma2 = tau^-1 [(1-rho) ||b*||^2 + rho (1' b*)^2]`
/// in closed form for the equicorrelated covariance, `eps ~ N(0, sigma2 I)`,
/// `y = X b* + eps`.
pub fn gen_response<R: Rng + ?Sized>(
    x: &Array2<f64>,
    beta_star: &Array1<f64>,
    tau: f64,
    rho: f64,
    rng: &mut R,
) -> Result<(Array1<f64>, Array1<f64>, f64)> {
    assert!(tau > 0.0, "tau must be positive");
    let norm2: f64 = beta_star.iter().map(|b| b * b).sum();
    let total: f64 = beta_star.sum();
    let quad = (1.0 - rho) * norm2 + rho * total * total;
    let sigma2 = quad / tau;
    if sigma2 == 0.0 {
        return Err(Error::InvalidSpec(
            "beta* = 0 gives a degenerate model with sigma^2 = 0".into(),
        ));
    }
    let sigma = sigma2.sqrt();
    let n = x.nrows();
    let eps = Array1::from_shape_fn(n, |_| sigma * rng.sample::<f64, _>(StandardNormal));
    let y = x.dot(beta_star) + &eps;
    Ok((y, eps, sigma2))
}

/// Generates a full replication from an explicit generator. Draw order is
/// fixed: design, then coefficients, then noise.
pub fn gen_truth<R: Rng + ?Sized>(spec: &SimulationSpec, rng: &mut R) -> Result<ReplicationTruth> {
    spec.validate()?;
    let x = gen_design(spec.n, spec.p, spec.rho, rng);
    let (beta_star, support) = gen_coefficients(spec.n, spec.p, spec.alpha, rng)?;
    let (y, eps, sigma2) = gen_response(&x, &beta_star, spec.tau, spec.rho, rng)?;
    Ok(ReplicationTruth { x, beta_star, eps, y, sigma2, support })
}

/// Generates the replication determined by `spec.seed`.
pub fn gen_replication(spec: &SimulationSpec) -> Result<ReplicationTruth> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    gen_truth(spec, &mut rng)
}

/// How a benchmarked method resolves its tuning parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tuning {
    /// K-fold cross-validation on each replication.
    Cv { folds: usize },
    Fixed(f64),
    /// `(2 log(p) / n)^(1/2)`
    Lambda0,
    /// `log(p) / n`
    Lambda2,
    /// Monte Carlo estimate of `E(n^-2 ||X^T eps||_inf^2)` on each
    /// replication's design.
    Lambda3 { draws: usize },
}

impl Tuning {
    pub fn cv() -> Self {
        Tuning::Cv { folds: DEFAULT_CV_FOLDS }
    }

    pub fn label(&self) -> String {
        match self {
            Tuning::Cv { folds } => format!("cv{folds}"),
            Tuning::Fixed(v) => format!("fixed({v})"),
            Tuning::Lambda0 => "lambda0".into(),
            Tuning::Lambda2 => "lambda2".into(),
            Tuning::Lambda3 { .. } => "lambda3".into(),
        }
    }
}

/// A method plus its tuning rule, as benchmarked.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MethodConfig {
    pub method: Method,
    pub tuning: Tuning,
}

impl MethodConfig {
    pub fn cv(method: Method) -> Self {
        Self { method, tuning: Tuning::cv() }
    }
}

fn family_of(method: Method) -> Option<FitFamily> {
    match method {
        Method::Naive | Method::Reid | Method::Natural => Some(FitFamily::Lasso),
        Method::Organic => Some(FitFamily::Organic),
        Method::SqrtLasso => Some(FitFamily::Sqrt),
        Method::Oracle => None,
    }
}

/// Per-method Monte Carlo summary within one benchmark cell.
#[derive(Debug, Clone, Serialize)]
pub struct MethodStats {
    pub method: Method,
    pub tuning: String,
    /// Replications that produced an estimate.
    pub reps_used: usize,
    /// Replications excluded by a method-level failure (counted, never
    /// silently dropped).
    pub failures: usize,
    /// Mean of `(sigma_hat / sigma - 1)^2`.
    pub mse_mean: f64,
    /// Standard error of that mean; absent with fewer than two values.
    pub mse_se: Option<f64>,
    /// Mean of `sigma_hat / sigma`.
    pub ratio_mean: f64,
    pub ratio_se: Option<f64>,
    /// Cumulative estimation seconds across replications (timing only;
    /// excluded from determinism comparisons).
    pub seconds: f64,
}

/// Monte Carlo benchmark of one simulation cell.
#[derive(Debug, Clone, Serialize)]
pub struct BenchmarkReport {
    pub spec: SimulationSpec,
    pub base_seed: u64,
    pub reps: usize,
    pub stats: Vec<MethodStats>,
    /// Per-replication `sigma_hat / sigma`, indexed `[method][rep]`;
    /// `None` marks a failure of that method on that replication.
    pub raw: Vec<Vec<Option<f64>>>,
}

impl BenchmarkReport {
    /// Equality of everything except wall-clock timings.
    pub fn same_results(&self, other: &BenchmarkReport) -> bool {
        if self.spec != other.spec
            || self.base_seed != other.base_seed
            || self.reps != other.reps
            || self.raw != other.raw
            || self.stats.len() != other.stats.len()
        {
            return false;
        }
        self.stats.iter().zip(&other.stats).all(|(a, b)| {
            a.method == b.method
                && a.tuning == b.tuning
                && a.reps_used == b.reps_used
                && a.failures == b.failures
                && a.mse_mean == b.mse_mean
                && a.mse_se == b.mse_se
                && a.ratio_mean == b.ratio_mean
                && a.ratio_se == b.ratio_se
        })
    }
}

struct RepOutcome {
    ratios: Vec<Option<f64>>,
    seconds: Vec<f64>,
}

fn resolve_lambda(
    sd: &StandardizedDesign,
    y: &Array1<f64>,
    family: FitFamily,
    tuning: Tuning,
    cv_seed: u64,
) -> Result<f64> {
    match tuning {
        Tuning::Fixed(v) => Ok(v),
        Tuning::Lambda0 => Ok(lambda_fixed(sd.n(), sd.p(), FixedLambda::Lambda0)),
        Tuning::Lambda2 => Ok(lambda_fixed(sd.n(), sd.p(), FixedLambda::Lambda2)),
        Tuning::Lambda3 { draws } => Ok(lambda3_monte_carlo(sd, draws, cv_seed ^ 0x5AD3)),
        Tuning::Cv { folds } => {
            let grid = make_grid_for_family(sd, y, family, DEFAULT_GRID_COUNT, DEFAULT_GRID_RATIO)?;
            let cv = kfold_cv(sd, y, family, &grid, folds, cv_seed)?;
            Ok(cv.chosen_lambda)
        }
    }
}

fn run_one_replication(
    spec: &SimulationSpec,
    methods: &[MethodConfig],
    rep_seed: u64,
    opts: &SolverOptions,
) -> Result<RepOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(rep_seed);
    let truth = gen_truth(spec, &mut rng)?;
    let cv_seed = rng.next_u64();
    let sigma = truth.sigma2.sqrt();

    let ds = Dataset::new(truth.y.clone(), truth.x.clone())?;
    let sd = standardize_columns(&ds, ds.default_drop_tol())?;
    let y = truth.y.clone();

    // Lambdas and full-data fits are shared across methods of the same
    // family with the same tuning rule.
    let mut lambda_memo: Vec<((FitFamily, Tuning), f64)> = Vec::new();
    let mut fit_memo: Vec<((FitFamily, u64), VarianceEstimate)> = Vec::new();

    let mut ratios = Vec::with_capacity(methods.len());
    let mut seconds = Vec::with_capacity(methods.len());

    for cfg in methods {
        let started = Instant::now();
        let estimate: Result<VarianceEstimate> = (|| {
            if cfg.method == Method::Oracle {
                return Ok(oracle_variance(&truth.eps));
            }
            let family = family_of(cfg.method).expect("non-oracle methods have a family");
            let lambda = match lambda_memo.iter().find(|(k, _)| *k == (family, cfg.tuning)) {
                Some((_, v)) => *v,
                None => {
                    let v = resolve_lambda(&sd, &y, family, cfg.tuning, cv_seed)?;
                    lambda_memo.push(((family, cfg.tuning), v));
                    v
                }
            };
            let fit_key = (family, lambda.to_bits());
            if let Some((_, est)) = fit_memo.iter().find(|(k, _)| *k == fit_key) {
                return finish_estimate(cfg.method, &sd, &y, lambda, est, opts);
            }
            let base = match family {
                FitFamily::Lasso => natural_variance(&sd, &y, lambda, opts),
                FitFamily::Organic => organic_variance(&sd, &y, lambda, opts),
                FitFamily::Sqrt => sqrt_variance(&sd, &y, lambda, opts)?,
            };
            fit_memo.push((fit_key, base.clone()));
            finish_estimate(cfg.method, &sd, &y, lambda, &base, opts)
        })();
        seconds.push(started.elapsed().as_secs_f64());
        ratios.push(estimate.ok().map(|e| e.sigma2.sqrt() / sigma));
    }

    Ok(RepOutcome { ratios, seconds })
}

/// Derives a method's estimate from its family's shared full-data fit.
fn finish_estimate(
    method: Method,
    sd: &StandardizedDesign,
    y: &Array1<f64>,
    lambda: f64,
    family_fit: &VarianceEstimate,
    opts: &SolverOptions,
) -> Result<VarianceEstimate> {
    match method {
        Method::Natural | Method::Organic | Method::SqrtLasso => Ok(family_fit.clone()),
        Method::Naive => {
            let beta = family_fit.beta.as_ref().expect("family fits carry coefficients");
            Ok(naive_variance(sd, y, beta))
        }
        Method::Reid => reid_variance(sd, y, lambda, opts),
        Method::Oracle => unreachable!("oracle handled before family dispatch"),
    }
}

/// Runs `reps` seeded replications of one simulation cell for every
/// requested method, aggregating `(sigma_hat/sigma - 1)^2` and
/// `sigma_hat/sigma` with means and standard errors. Per-method failures
/// (e.g. a saturated degrees-of-freedom fit) are excluded from that
/// method's aggregate and counted.
///
/// Replications run in parallel; per-replication seeding and in-order
/// reduction make the report independent of the schedule.
pub fn run_benchmark(
    spec: &SimulationSpec,
    methods: &[MethodConfig],
    reps: usize,
    base_seed: u64,
) -> Result<BenchmarkReport> {
    spec.validate()?;
    if reps == 0 {
        return Err(Error::InvalidParameter("reps must be at least 1".into()));
    }
    if methods.is_empty() {
        return Err(Error::InvalidParameter("no methods requested".into()));
    }
    let opts = SolverOptions::default();

    let outcomes: Result<Vec<RepOutcome>> = (0..reps)
        .into_par_iter()
        .map(|r| run_one_replication(spec, methods, replication_seed(base_seed, r as u64), &opts))
        .collect();
    let outcomes = outcomes?;

    let mut raw: Vec<Vec<Option<f64>>> = vec![Vec::with_capacity(reps); methods.len()];
    let mut seconds = vec![0.0_f64; methods.len()];
    for outcome in &outcomes {
        for (m, ratio) in outcome.ratios.iter().enumerate() {
            raw[m].push(*ratio);
        }
        for (m, s) in outcome.seconds.iter().enumerate() {
            seconds[m] += s;
        }
    }

    let stats = methods
        .iter()
        .enumerate()
        .map(|(m, cfg)| {
            let values: Vec<f64> = raw[m].iter().flatten().copied().collect();
            let failures = reps - values.len();
            let sq: Vec<f64> = values.iter().map(|r| (r - 1.0) * (r - 1.0)).collect();
            let (mse_mean, mse_se) = mean_se(&sq);
            let (ratio_mean, ratio_se) = mean_se(&values);
            MethodStats {
                method: cfg.method,
                tuning: cfg.tuning.label(),
                reps_used: values.len(),
                failures,
                mse_mean,
                mse_se,
                ratio_mean,
                ratio_se,
                seconds: seconds[m],
            }
        })
        .collect();

    Ok(BenchmarkReport { spec: *spec, base_seed, reps, stats, raw })
}

fn mean_se(values: &[f64]) -> (f64, Option<f64>) {
    if values.is_empty() {
        return (f64::NAN, None);
    }
    let k = values.len() as f64;
    let mean = values.iter().sum::<f64>() / k;
    if values.len() < 2 {
        return (mean, None);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (k - 1.0);
    (mean, Some((var / k).sqrt()))
}

/// The bound checks implemented as runtime verifiers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeterministicBound {
    /// With `lambda = n^-1 ||X^T eps||_inf`, the l1 optimal value is within
    /// `2 lambda ||b*||_1` of the oracle `n^-1 ||eps||^2`.
    Lemma1,
    /// With `lambda = n^-1 ||X^T (eps/sigma)||_inf`, the squared-l1 optimal
    /// value obeys the two-sided closeness bound.
    Lemma4,
    /// With `lambda = (2 (log p + L) / n)^(1/2)`, the squared-l1 fit's
    /// prediction error is bounded with probability `> 1 - e^-L`.
    Theorem4 { big_l: f64 },
}

impl DeterministicBound {
    pub fn name(&self) -> &'static str {
        match self {
            DeterministicBound::Lemma1 => "lemma1",
            DeterministicBound::Lemma4 => "lemma4",
            DeterministicBound::Theorem4 { .. } => "thm4",
        }
    }
}

/// Outcome of one bound check; failures are data, not errors.
#[derive(Debug, Clone, Serialize)]
pub struct BoundCheck {
    pub bound: String,
    pub lambda: f64,
    /// The quantity the bound constrains.
    pub lhs: f64,
    /// Lower limit (negative infinity for one-sided bounds).
    pub lower: f64,
    pub upper: f64,
    pub passed: bool,
    /// Distance to the nearest violated edge; positive slack means the
    /// bound held with room.
    pub slack: f64,
}

/// Standardizes the replication's design and maps the true coefficients to
/// the standardized scale (the model stays exact because zero-norm columns
/// contribute nothing).
fn standardized_truth(truth: &ReplicationTruth) -> Result<(StandardizedDesign, Array1<f64>)> {
    let ds = Dataset::new(truth.y.clone(), truth.x.clone())?;
    let sd = standardize_columns(&ds, ds.default_drop_tol())?;
    let beta_std = Array1::from_iter(
        truth
            .beta_star
            .iter()
            .zip(sd.scales().iter())
            .map(|(&b, &s)| if s > 0.0 { b * s } else { 0.0 }),
    );
    Ok((sd, beta_std))
}

/// Verifies one deterministic (or high-probability) bound on a generated
/// replication. Columns are re-standardized to `||X_j||^2 = n` first, and
/// the true coefficients are mapped to that scale, matching the bound
/// hypotheses.
pub fn check_deterministic_bounds(
    truth: &ReplicationTruth,
    which: DeterministicBound,
    opts: &SolverOptions,
) -> Result<BoundCheck> {
    let (sd, beta_std) = standardized_truth(truth)?;
    let n = sd.n() as f64;
    let y = &truth.y;
    let oracle = truth.eps.iter().map(|e| e * e).sum::<f64>() / n;
    let b1: f64 = beta_std.iter().map(|b| b.abs()).sum();
    let sigma = truth.sigma2.sqrt();

    let check = match which {
        DeterministicBound::Lemma1 => {
            let lambda = crate::design::max_abs_correlation(&sd, truth.eps.view());
            let est = natural_variance(&sd, y, lambda, opts);
            let lhs = (est.sigma2 - oracle).abs();
            let upper = 2.0 * lambda * b1;
            BoundCheck {
                bound: "lemma1".into(),
                lambda,
                lhs,
                lower: f64::NEG_INFINITY,
                upper,
                passed: lhs <= upper,
                slack: upper - lhs,
            }
        }
        DeterministicBound::Lemma4 => {
            let lambda = crate::design::max_abs_correlation(&sd, truth.eps.view()) / sigma;
            let est = organic_variance(&sd, y, lambda, opts);
            let lhs = est.sigma2 - oracle;
            let lower = -2.0 * lambda * truth.sigma2 * (b1 / sigma + 0.25);
            let upper = 2.0 * lambda * b1 * b1;
            let slack = (upper - lhs).min(lhs - lower);
            BoundCheck {
                bound: "lemma4".into(),
                lambda,
                lhs,
                lower,
                upper,
                passed: lhs >= lower && lhs <= upper,
                slack,
            }
        }
        DeterministicBound::Theorem4 { big_l } => {
            let p = sd.p() as f64;
            let lambda = (2.0 * (p.ln() + big_l) / n).sqrt();
            let est = organic_variance(&sd, y, lambda, opts);
            let beta = est.beta.as_ref().expect("organic estimates carry coefficients");
            let diff = sd.predict(beta) - sd.predict(&beta_std);
            let lhs = diff.iter().map(|d| d * d).sum::<f64>() / n;
            let upper =
                (truth.sigma2 + 4.0 * b1 * b1) * ((2.0 * p.ln() + 2.0 * big_l) / n).sqrt();
            BoundCheck {
                bound: "thm4".into(),
                lambda,
                lhs,
                lower: f64::NEG_INFINITY,
                upper,
                passed: lhs <= upper,
                slack: upper - lhs,
            }
        }
    };
    Ok(check)
}

/// The two relative mean squared error bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MseBound {
    /// l1 optimal value at `lambda = sigma (2 M log p / n)^(1/2)` (consumes
    /// the true sigma).
    Thm1,
    /// Squared-l1 optimal value at `lambda = (2 M log p / n)^(1/2)` (sigma
    /// free).
    Thm3,
}

impl MseBound {
    pub fn name(&self) -> &'static str {
        match self {
            MseBound::Thm1 => "thm1",
            MseBound::Thm3 => "thm3",
        }
    }
}

/// Right-hand side of the relative MSE bound for the l1 optimal value.
pub fn theorem1_mse_rhs(n: usize, p: usize, m: f64, b1_over_sigma: f64) -> f64 {
    let nf = n as f64;
    let logp = (p as f64).ln();
    let lead = (8.0 * m + 8.0 * (p as f64).powf(1.0 - 8.0 * m) / logp).sqrt();
    let t = lead * b1_over_sigma * (logp / nf).sqrt() + (2.0 / nf).sqrt();
    t * t
}

/// Right-hand side of the relative MSE bound for the squared-l1 optimal
/// value.
pub fn theorem3_mse_rhs(n: usize, p: usize, m: f64, b1_over_sigma: f64) -> f64 {
    let nf = n as f64;
    let logp = (p as f64).ln();
    let lead = (8.0 * m + 8.0 * (p as f64).powf(1.0 - 8.0 * m) / logp).sqrt();
    let factor = (b1_over_sigma * b1_over_sigma).max(b1_over_sigma + 0.25);
    let t = lead * factor * (logp / nf).sqrt() + (2.0 / nf).sqrt();
    t * t
}

/// Monte Carlo verdict on one relative MSE bound.
#[derive(Debug, Clone, Serialize)]
pub struct MseBoundCheck {
    pub bound: String,
    pub m: f64,
    pub reps: usize,
    /// Monte Carlo estimate of `E[(sigma2_hat / sigma2 - 1)^2]`.
    pub lhs_mean: f64,
    pub lhs_se: f64,
    /// Mean of the per-replication bound right-hand sides.
    pub rhs_mean: f64,
    pub passed: bool,
    /// `rhs_mean + 3 lhs_se - lhs_mean`.
    pub margin: f64,
}

/// Checks an MSE bound by Monte Carlo: the estimate of
/// `E[(sigma2_hat/sigma2 - 1)^2]` must not exceed the mean theorem
/// right-hand side plus three Monte Carlo standard errors. Designs are
/// re-standardized before fitting, and the per-replication right-hand side
/// uses that replication's `||b*||_1 / sigma` on the standardized scale.
pub fn check_mse_bound(
    spec: &SimulationSpec,
    which: MseBound,
    m: f64,
    reps: usize,
    base_seed: u64,
) -> Result<MseBoundCheck> {
    spec.validate()?;
    if m.is_nan() || m <= 1.0 {
        return Err(Error::InvalidParameter(format!("M must exceed 1, got {m}")));
    }
    if reps == 0 {
        return Err(Error::InvalidParameter("reps must be at least 1".into()));
    }
    let opts = SolverOptions::default();

    let per_rep: Result<Vec<(f64, f64)>> = (0..reps)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(replication_seed(base_seed, r as u64));
            let truth = gen_truth(spec, &mut rng)?;
            let (sd, beta_std) = standardized_truth(&truth)?;
            let logp = (sd.p() as f64).ln();
            let nf = sd.n() as f64;
            let sigma = truth.sigma2.sqrt();
            let b1: f64 = beta_std.iter().map(|b| b.abs()).sum();
            let (sigma2_hat, rhs) = match which {
                MseBound::Thm1 => {
                    let lambda = sigma * (2.0 * m * logp / nf).sqrt();
                    let est = natural_variance(&sd, &truth.y, lambda, &opts);
                    (est.sigma2, theorem1_mse_rhs(sd.n(), sd.p(), m, b1 / sigma))
                }
                MseBound::Thm3 => {
                    let lambda = (2.0 * m * logp / nf).sqrt();
                    let est = organic_variance(&sd, &truth.y, lambda, &opts);
                    (est.sigma2, theorem3_mse_rhs(sd.n(), sd.p(), m, b1 / sigma))
                }
            };
            let rel = sigma2_hat / truth.sigma2 - 1.0;
            Ok((rel * rel, rhs))
        })
        .collect();
    let per_rep = per_rep?;

    let sq: Vec<f64> = per_rep.iter().map(|(s, _)| *s).collect();
    let (lhs_mean, lhs_se) = mean_se(&sq);
    let lhs_se = lhs_se.unwrap_or(0.0);
    let rhs_mean = per_rep.iter().map(|(_, r)| *r).sum::<f64>() / reps as f64;
    let passed = lhs_mean <= rhs_mean + 3.0 * lhs_se;

    Ok(MseBoundCheck {
        bound: which.name().into(),
        m,
        reps,
        lhs_mean,
        lhs_se,
        rhs_mean,
        passed,
        margin: rhs_mean + 3.0 * lhs_se - lhs_mean,
    })
}
