//! Command-line front end: estimation on CSV data, synthetic data
//! generation, Monte Carlo benchmarks, bound verification, and tuning-value
//! resolution.

mod csv_data;
mod reports;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ndarray::Array1;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;
use varsigma::{
    check_deterministic_bounds, check_mse_bound, gen_replication, kfold_cv, lambda3_monte_carlo,
    lambda_fixed, lasso_cd, make_grid_for_family, naive_variance, natural_variance,
    organic_variance, reid_variance, replication_seed, run_benchmark, sqrt_variance,
    standardize_columns, DeterministicBound, FitFamily, FixedLambda, Method, MethodConfig,
    MseBound, SimulationSpec, SolverOptions, StandardizedDesign, Tuning, VarianceEstimate,
    DEFAULT_CV_FOLDS, DEFAULT_GRID_COUNT, DEFAULT_GRID_RATIO,
};

use csv_data::{read_dataset, write_dataset};
use reports::{
    write_benchmark_csv, write_benchmark_raw_csv, write_json, BenchmarkCell, BenchmarkJson,
    CellError, DeterministicBoundReport, EstimateReport, Metadata, MethodReport, MseBoundReport,
};

#[derive(Parser)]
#[command(name = "varsigma")]
#[command(version)]
#[command(about = "Error variance estimation for high-dimensional linear models")]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Subcommand)]
enum Commands {
    /// Estimate the error variance of a CSV dataset with one or more methods
    Estimate(EstimateArgs),
    /// Generate one synthetic replication and write it as an estimate-shaped CSV
    Simulate(SimulateArgs),
    /// Run the Monte Carlo benchmark over a grid of simulation settings
    Benchmark(BenchmarkArgs),
    /// Verify a deterministic or probabilistic bound by simulation
    CheckBounds(CheckBoundsArgs),
    /// Resolve and print a tuning-parameter value
    Lambda(LambdaArgs),
}

/// Tuning resolution requested on the command line: `cv`, a named value, or
/// an explicit number.
#[derive(Debug, Clone, Copy, PartialEq)]
enum LambdaSpec {
    Cv,
    Lambda0,
    Lambda2,
    Lambda3,
    Fixed(f64),
}

impl FromStr for LambdaSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "cv" => Ok(LambdaSpec::Cv),
            "lambda0" => Ok(LambdaSpec::Lambda0),
            "lambda2" => Ok(LambdaSpec::Lambda2),
            "lambda3" => Ok(LambdaSpec::Lambda3),
            other => other
                .parse::<f64>()
                .map_err(|_| {
                    format!(
                        "expected cv, lambda0, lambda2, lambda3, or a number, got `{other}`"
                    )
                })
                .and_then(|v| {
                    if v >= 0.0 && v.is_finite() {
                        Ok(LambdaSpec::Fixed(v))
                    } else {
                        Err(format!("fixed lambda must be a nonnegative real, got {v}"))
                    }
                }),
        }
    }
}

impl LambdaSpec {
    fn describe(&self) -> String {
        match self {
            LambdaSpec::Cv => "cv".into(),
            LambdaSpec::Lambda0 => "lambda0".into(),
            LambdaSpec::Lambda2 => "lambda2".into(),
            LambdaSpec::Lambda3 => "lambda3".into(),
            LambdaSpec::Fixed(v) => v.to_string(),
        }
    }
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    Method::parse(s).map_err(|e| e.to_string())
}

#[derive(Args)]
struct EstimateArgs {
    /// Input CSV with a header, a response column named "y", and numeric
    /// predictor columns
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated methods: naive, reid, natural, organic, sqrt
    #[arg(long = "method", alias = "methods", value_delimiter = ',',
          default_values = ["naive", "reid", "natural", "organic", "sqrt"],
          value_parser = parse_method)]
    methods: Vec<Method>,
    /// cv | lambda0 | lambda2 | lambda3 | <float>
    #[arg(long, default_value = "cv")]
    lambda: LambdaSpec,
    /// Cross-validation folds
    #[arg(long, default_value_t = DEFAULT_CV_FOLDS)]
    folds: usize,
    /// Lambda grid size for cross-validation
    #[arg(long, default_value_t = DEFAULT_GRID_COUNT)]
    grid_size: usize,
    /// Ratio of the smallest to the largest grid value
    #[arg(long, default_value_t = DEFAULT_GRID_RATIO)]
    grid_ratio: f64,
    /// Monte Carlo draws when resolving lambda3
    #[arg(long, default_value_t = 1000)]
    lambda3_draws: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Center y and the predictor columns before standardization (off by
    /// default; the model carries no intercept)
    #[arg(long)]
    center: bool,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 500)]
    p: usize,
    #[arg(long, default_value_t = 0.3)]
    rho: f64,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    tau: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path (estimate-compatible shape)
    #[arg(long)]
    out: PathBuf,
    /// Optional JSON sidecar with the ground truth
    #[arg(long)]
    truth: Option<PathBuf>,
}

#[derive(Args)]
struct BenchmarkArgs {
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 500)]
    p: usize,
    /// Comma-separated equicorrelation values
    #[arg(long, value_delimiter = ',', default_values = ["0.1", "0.3", "0.5", "0.7", "0.9"])]
    rho: Vec<f64>,
    /// Comma-separated sparsity exponents
    #[arg(long, value_delimiter = ',', default_values = ["0.1", "0.3", "0.5", "0.7", "0.9"])]
    alpha: Vec<f64>,
    /// Comma-separated signal-to-noise values
    #[arg(long, value_delimiter = ',', default_values = ["0.3", "1", "3"])]
    tau: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    reps: usize,
    /// Comma-separated methods (oracle allowed here)
    #[arg(long = "methods", alias = "method", value_delimiter = ',',
          default_values = ["naive", "reid", "natural", "organic", "sqrt", "oracle"],
          value_parser = parse_method)]
    methods: Vec<Method>,
    /// Tuning rule applied to every method: cv | lambda0 | lambda2 | lambda3 | <float>
    #[arg(long, default_value = "cv")]
    lambda: LambdaSpec,
    #[arg(long, default_value_t = DEFAULT_CV_FOLDS)]
    folds: usize,
    /// Monte Carlo draws when resolving lambda3
    #[arg(long, default_value_t = 1000)]
    lambda3_draws: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory for report.csv, report.json, and raw.csv
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BoundName {
    Lemma1,
    Lemma4,
    Thm1,
    Thm3,
    Thm4,
}

#[derive(Args)]
struct CheckBoundsArgs {
    /// Which bound to verify
    #[arg(long, value_enum)]
    bound: BoundName,
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 500)]
    p: usize,
    #[arg(long, default_value_t = 0.3)]
    rho: f64,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    tau: f64,
    #[arg(long, default_value_t = 100)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Constant M > 1 for the mean squared error bounds (thm1, thm3)
    #[arg(long, default_value_t = 1.5)]
    big_m: f64,
    /// Constant L > 0 for the prediction bound (thm4); default ln(100)
    #[arg(long, default_value_t = 4.605170185988092)]
    big_l: f64,
    /// Write the JSON report here as well
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LambdaName {
    Lambda0,
    Lambda2,
    Lambda3,
}

#[derive(Args)]
struct LambdaArgs {
    /// Which tuning value to resolve
    #[arg(long, value_enum)]
    name: LambdaName,
    /// Dataset whose shape (and, for lambda3, design) is used
    #[arg(long)]
    input: Option<PathBuf>,
    /// Sample size, when no input CSV is given
    #[arg(long)]
    n: Option<usize>,
    /// Predictor count, when no input CSV is given
    #[arg(long)]
    p: Option<usize>,
    /// Monte Carlo draws for lambda3
    #[arg(long, default_value_t = 1000)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn init_threads() -> Result<()> {
    if let Ok(raw) = std::env::var("VARSIGMA_THREADS") {
        let threads: usize = raw
            .trim()
            .parse()
            .context("VARSIGMA_THREADS must be a positive integer")?;
        if threads == 0 {
            bail!("VARSIGMA_THREADS must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("cannot configure the thread pool")?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    init_threads()?;
    match cli.command {
        Commands::Estimate(args) => cmd_estimate(args),
        Commands::Simulate(args) => cmd_simulate(args),
        Commands::Benchmark(args) => cmd_benchmark(args),
        Commands::CheckBounds(args) => cmd_check_bounds(args),
        Commands::Lambda(args) => cmd_lambda(args),
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

/// Resolves the lambda a family uses under the requested rule.
#[allow(clippy::too_many_arguments)]
fn resolve_lambda(
    sd: &StandardizedDesign,
    y: &Array1<f64>,
    family: FitFamily,
    spec: LambdaSpec,
    folds: usize,
    grid_size: usize,
    grid_ratio: f64,
    lambda3_draws: usize,
    seed: u64,
) -> Result<f64> {
    match spec {
        LambdaSpec::Fixed(v) => Ok(v),
        LambdaSpec::Lambda0 | LambdaSpec::Lambda2 => {
            if sd.p() < 2 {
                bail!("lambda0/lambda2 need at least 2 predictors, got {}", sd.p());
            }
            let variant = if spec == LambdaSpec::Lambda0 {
                FixedLambda::Lambda0
            } else {
                FixedLambda::Lambda2
            };
            Ok(lambda_fixed(sd.n(), sd.p(), variant))
        }
        LambdaSpec::Lambda3 => Ok(lambda3_monte_carlo(sd, lambda3_draws, seed)),
        LambdaSpec::Cv => {
            let grid = make_grid_for_family(sd, y, family, grid_size, grid_ratio)
                .context("cannot build the cross-validation grid")?;
            let cv = kfold_cv(sd, y, family, &grid, folds, seed)
                .context("cross-validation failed")?;
            Ok(cv.chosen_lambda)
        }
    }
}

fn method_report(method: Method, lambda: f64, est: &VarianceEstimate) -> MethodReport {
    MethodReport {
        method,
        lambda: Some(lambda),
        sigma2: Some(est.sigma2),
        nnz: est.nnz,
        converged: Some(est.converged),
        duality_gap: est.duality_gap,
        identity_residual: est.identity_residual,
        error: None,
    }
}

fn method_error(method: Method, lambda: Option<f64>, error: String) -> MethodReport {
    MethodReport {
        method,
        lambda,
        sigma2: None,
        nnz: None,
        converged: None,
        duality_gap: None,
        identity_residual: None,
        error: Some(error),
    }
}

fn cmd_estimate(args: EstimateArgs) -> Result<()> {
    if args.methods.contains(&Method::Oracle) {
        bail!("the oracle needs the true noise vector and is available only in simulation");
    }
    let csv = read_dataset(&args.input)?;
    let ds = if args.center { csv.dataset.centered() } else { csv.dataset };
    let sd = standardize_columns(&ds, ds.default_drop_tol())?;
    let y = ds.y().clone();
    let opts = SolverOptions::default();

    // One lambda and one lasso fit shared by the methods of each family.
    let mut lambda_memo: Vec<(FitFamily, Result<f64>)> = Vec::new();
    let mut lasso_fit: Option<(f64, VarianceEstimate)> = None;

    let mut methods = Vec::with_capacity(args.methods.len());
    for &method in &args.methods {
        let family = family_of(method).expect("oracle rejected above");
        let lambda = match lambda_memo.iter().find(|(f, _)| *f == family) {
            Some((_, cached)) => match cached {
                Ok(v) => *v,
                Err(e) => {
                    methods.push(method_error(method, None, format!("{e:#}")));
                    continue;
                }
            },
            None => {
                let resolved = resolve_lambda(
                    &sd,
                    &y,
                    family,
                    args.lambda,
                    args.folds,
                    args.grid_size,
                    args.grid_ratio,
                    args.lambda3_draws,
                    args.seed,
                );
                let value = match &resolved {
                    Ok(v) => Some(*v),
                    Err(_) => None,
                };
                lambda_memo.push((family, resolved));
                match value {
                    Some(v) => v,
                    None => {
                        let (_, cached) = lambda_memo.last().unwrap();
                        let msg = format!("{:#}", cached.as_ref().err().unwrap());
                        methods.push(method_error(method, None, msg));
                        continue;
                    }
                }
            }
        };

        let report = match method {
            Method::Natural => {
                let est = natural_variance(&sd, &y, lambda, &opts);
                if family == FitFamily::Lasso {
                    lasso_fit = Some((lambda, est.clone()));
                }
                method_report(method, lambda, &est)
            }
            Method::Naive => {
                let est = match &lasso_fit {
                    Some((l, fit)) if *l == lambda => {
                        naive_variance(&sd, &y, fit.beta.as_ref().unwrap())
                    }
                    _ => {
                        let fit = lasso_cd(&sd, &y, lambda, &opts);
                        naive_variance(&sd, &y, &fit.beta)
                    }
                };
                method_report(method, lambda, &est)
            }
            Method::Reid => match reid_variance(&sd, &y, lambda, &opts) {
                Ok(est) => method_report(method, lambda, &est),
                Err(e) => method_error(method, Some(lambda), e.to_string()),
            },
            Method::Organic => {
                let est = organic_variance(&sd, &y, lambda, &opts);
                method_report(method, lambda, &est)
            }
            Method::SqrtLasso => match sqrt_variance(&sd, &y, lambda, &opts) {
                Ok(est) => method_report(method, lambda, &est),
                Err(e) => method_error(method, Some(lambda), e.to_string()),
            },
            Method::Oracle => unreachable!(),
        };
        methods.push(report);
    }

    let dropped: Vec<String> =
        sd.dropped().iter().map(|&j| csv.predictors[j].clone()).collect();
    let config = serde_json::json!({
        "input": args.input.display().to_string(),
        "lambda": args.lambda.describe(),
        "folds": args.folds,
        "grid_size": args.grid_size,
        "grid_ratio": args.grid_ratio,
        "centered": args.center,
    });
    let report = EstimateReport {
        metadata: Metadata::new("estimate", args.seed, config),
        n: sd.n(),
        p: sd.p(),
        dropped_columns: dropped,
        methods,
    };

    match &args.out {
        Some(path) => {
            write_json(path, &report)?;
            for m in &report.methods {
                match (&m.sigma2, &m.error) {
                    (Some(s), _) => println!(
                        "{:>8}: sigma2 = {s:.6} (lambda = {:.6})",
                        m.method.tag(),
                        m.lambda.unwrap_or(f64::NAN)
                    ),
                    (None, Some(e)) => println!("{:>8}: failed: {e}", m.method.tag()),
                    _ => {}
                }
            }
            println!("report written to {}", path.display());
        }
        None => {
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
    }
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let spec = SimulationSpec {
        n: args.n,
        p: args.p,
        rho: args.rho,
        alpha: args.alpha,
        tau: args.tau,
        seed: args.seed,
    };
    let truth = gen_replication(&spec)?;
    write_dataset(&args.out, &truth.y, &truth.x)?;
    println!(
        "wrote {} ({} rows, {} predictors, sigma2 = {:.6})",
        args.out.display(),
        spec.n,
        spec.p,
        truth.sigma2
    );
    if let Some(path) = &args.truth {
        let sidecar = serde_json::json!({
            "metadata": {
                "tool": "varsigma",
                "version": env!("CARGO_PKG_VERSION"),
                "command": "simulate",
                "seed": args.seed,
            },
            "spec": spec,
            "sigma2": truth.sigma2,
            "support": truth.support,
            "beta_star": truth.beta_star.to_vec(),
            "eps": truth.eps.to_vec(),
        });
        write_json(path, &sidecar)?;
        println!("ground truth written to {}", path.display());
    }
    Ok(())
}

fn tuning_from_spec(spec: LambdaSpec, folds: usize, lambda3_draws: usize) -> Tuning {
    match spec {
        LambdaSpec::Cv => Tuning::Cv { folds },
        LambdaSpec::Fixed(v) => Tuning::Fixed(v),
        LambdaSpec::Lambda0 => Tuning::Lambda0,
        LambdaSpec::Lambda2 => Tuning::Lambda2,
        LambdaSpec::Lambda3 => Tuning::Lambda3 { draws: lambda3_draws },
    }
}

fn cmd_benchmark(args: BenchmarkArgs) -> Result<()> {
    if args.rho.is_empty() || args.alpha.is_empty() || args.tau.is_empty() {
        bail!("rho, alpha, and tau lists must be nonempty");
    }
    std::fs::create_dir_all(&args.out)
        .with_context(|| format!("cannot create output directory {}", args.out.display()))?;

    let tuning = tuning_from_spec(args.lambda, args.folds, args.lambda3_draws);
    let methods: Vec<MethodConfig> =
        args.methods.iter().map(|&method| MethodConfig { method, tuning }).collect();

    let mut cells = Vec::new();
    let mut cell_reports = Vec::new();
    let mut errors = Vec::new();
    let mut cell_index = 0u64;
    for &rho in &args.rho {
        for &alpha in &args.alpha {
            for &tau in &args.tau {
                let cell_seed = replication_seed(args.seed, cell_index);
                cell_index += 1;
                let spec = SimulationSpec { n: args.n, p: args.p, rho, alpha, tau, seed: cell_seed };
                if let Err(e) = spec.validate() {
                    eprintln!("skipping cell rho={rho} alpha={alpha} tau={tau}: {e}");
                    errors.push(CellError {
                        n: args.n,
                        p: args.p,
                        rho,
                        alpha,
                        tau,
                        error: e.to_string(),
                    });
                    continue;
                }
                let started = Instant::now();
                let report = run_benchmark(&spec, &methods, args.reps, cell_seed)?;
                println!(
                    "cell rho={rho} alpha={alpha} tau={tau}: {} reps in {:.1}s",
                    args.reps,
                    started.elapsed().as_secs_f64()
                );
                cells.push(BenchmarkCell { spec, cell_seed, stats: report.stats.clone() });
                cell_reports.push(report);
            }
        }
    }

    write_benchmark_csv(&args.out.join("report.csv"), &cell_reports)?;
    write_benchmark_raw_csv(&args.out.join("raw.csv"), &cell_reports)?;
    let config = serde_json::json!({
        "n": args.n,
        "p": args.p,
        "rho": args.rho,
        "alpha": args.alpha,
        "tau": args.tau,
        "reps": args.reps,
        "methods": args.methods.iter().map(|m| m.tag()).collect::<Vec<_>>(),
        "lambda": args.lambda.describe(),
        "folds": args.folds,
    });
    let json = BenchmarkJson {
        metadata: Metadata::new("benchmark", args.seed, config),
        cells,
        errors,
    };
    write_json(&args.out.join("report.json"), &json)?;
    println!("reports written to {}", args.out.display());
    Ok(())
}

fn cmd_check_bounds(args: CheckBoundsArgs) -> Result<()> {
    let spec = SimulationSpec {
        n: args.n,
        p: args.p,
        rho: args.rho,
        alpha: args.alpha,
        tau: args.tau,
        seed: args.seed,
    };
    spec.validate()?;
    if args.reps == 0 {
        bail!("reps must be at least 1");
    }
    let config = serde_json::json!({
        "n": args.n, "p": args.p, "rho": args.rho, "alpha": args.alpha, "tau": args.tau,
        "reps": args.reps, "big_m": args.big_m, "big_l": args.big_l,
    });

    match args.bound {
        BoundName::Thm1 | BoundName::Thm3 => {
            let which = if args.bound == BoundName::Thm1 { MseBound::Thm1 } else { MseBound::Thm3 };
            let check = check_mse_bound(&spec, which, args.big_m, args.reps, args.seed)?;
            println!(
                "bound={} passed={} lhs={:.6} (se {:.6}) rhs={:.6} margin={:.6}",
                check.bound, check.passed, check.lhs_mean, check.lhs_se, check.rhs_mean,
                check.margin
            );
            if let Some(path) = &args.out {
                let report = MseBoundReport {
                    metadata: Metadata::new("check-bounds", args.seed, config),
                    check,
                };
                write_json(path, &report)?;
            }
        }
        BoundName::Lemma1 | BoundName::Lemma4 | BoundName::Thm4 => {
            let which = match args.bound {
                BoundName::Lemma1 => DeterministicBound::Lemma1,
                BoundName::Lemma4 => DeterministicBound::Lemma4,
                BoundName::Thm4 => DeterministicBound::Theorem4 { big_l: args.big_l },
                _ => unreachable!(),
            };
            let opts = SolverOptions::default();
            let mut checks = Vec::with_capacity(args.reps);
            for r in 0..args.reps {
                let mut rep_spec = spec;
                rep_spec.seed = replication_seed(args.seed, r as u64);
                let truth = gen_replication(&rep_spec)?;
                checks.push(check_deterministic_bounds(&truth, which, &opts)?);
            }
            let passes = checks.iter().filter(|c| c.passed).count();
            let min_slack = checks.iter().map(|c| c.slack).fold(f64::INFINITY, f64::min);
            println!(
                "bound={} passes={passes}/{} min_slack={min_slack:.6}",
                which.name(),
                args.reps
            );
            if let Some(path) = &args.out {
                let report = DeterministicBoundReport {
                    metadata: Metadata::new("check-bounds", args.seed, config),
                    bound: which.name().into(),
                    reps: args.reps,
                    passes,
                    min_slack,
                    checks,
                };
                write_json(path, &report)?;
            }
        }
    }
    Ok(())
}

fn cmd_lambda(args: LambdaArgs) -> Result<()> {
    let value = match args.name {
        LambdaName::Lambda0 | LambdaName::Lambda2 => {
            let (n, p) = match (&args.input, args.n, args.p) {
                (Some(path), _, _) => {
                    let csv = read_dataset(path)?;
                    (csv.dataset.n(), csv.dataset.p())
                }
                (None, Some(n), Some(p)) => (n, p),
                _ => bail!("provide either --input or both --n and --p"),
            };
            if p < 2 {
                bail!("lambda0/lambda2 need at least 2 predictors, got {p}");
            }
            let variant = if args.name == LambdaName::Lambda0 {
                FixedLambda::Lambda0
            } else {
                FixedLambda::Lambda2
            };
            lambda_fixed(n, p, variant)
        }
        LambdaName::Lambda3 => {
            let path = args
                .input
                .as_ref()
                .context("lambda3 is design-dependent; provide --input")?;
            let csv = read_dataset(path)?;
            let ds = csv.dataset;
            let sd = standardize_columns(&ds, ds.default_drop_tol())?;
            if args.reps == 0 {
                bail!("reps must be at least 1");
            }
            lambda3_monte_carlo(&sd, args.reps, args.seed)
        }
    };
    println!("{value}");
    Ok(())
}
