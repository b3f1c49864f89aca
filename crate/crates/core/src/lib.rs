//! Error variance estimation for high-dimensional linear models.
//!
//! This crate estimates the noise level sigma^2 of a linear model
//! `y = X beta + eps` in the regime where the number of predictors may
//! exceed the number of observations. The two headline estimators are
//! optimal values of penalized least-squares problems:
//!
//! * the **natural lasso**, the minimum of the l1-penalized objective
//!   `n^-1 ||y - X b||^2 + 2 lambda ||b||_1`, and
//! * the **organic lasso**, the minimum of the squared-l1-penalized
//!   objective `n^-1 ||y - X b||^2 + 2 lambda ||b||_1^2`, whose tuning
//!   parameter needs no knowledge of sigma.
//!
//! Also provided: the naive residual estimator, the degrees-of-freedom
//! adjusted estimator, the square-root/scaled lasso, the simulation-only
//! oracle `n^-1 ||eps||^2`, coordinate-descent solvers with duality-gap
//! certificates, tuning-parameter selection (cross-validation, fixed
//! theoretical values, and the mapping between the lasso and squared-l1
//! solution paths), and a fully seeded Monte Carlo benchmark harness.

pub mod design;
pub mod error;
pub mod estimators;
pub mod simulation;
pub mod solvers;
pub mod tuning;

pub use design::{
    max_abs_correlation, objective, soft_threshold, standardize_columns, Dataset, FitResult,
    PenaltyKind, PenaltySpec, StandardizedDesign,
};
pub use error::{Error, Result};
pub use estimators::{
    naive_variance, natural_variance, oracle_variance, organic_variance, reid_variance,
    sqrt_variance, Method, VarianceEstimate,
};
pub use simulation::{
    check_deterministic_bounds, check_mse_bound, gen_coefficients, gen_design, gen_replication,
    gen_response, gen_truth, replication_seed, run_benchmark, support_size, BenchmarkReport,
    BoundCheck, DeterministicBound, MethodConfig, MethodStats, MseBound, MseBoundCheck,
    ReplicationTruth, SimulationSpec, Tuning,
};
pub use solvers::{
    lambda_max_lasso, lasso_cd, lasso_duality_gap, organic_cd, organic_duality_gap, sqrt_lasso,
    SolverOptions,
};
pub use tuning::{
    kfold_cv, lambda3_monte_carlo, lambda_fixed, make_grid, make_grid_for_family, path_map,
    CvPoint, CvResult, FitFamily, FixedLambda, LambdaGrid, PathDirection, DEFAULT_CV_FOLDS,
    DEFAULT_GRID_COUNT, DEFAULT_GRID_RATIO,
};
