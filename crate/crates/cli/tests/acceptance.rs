//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its measured evidence (run with `--nocapture` to see them).
//!
//! Criteria 1-9 exercise the library; criterion 10 drives the binary.

mod common;

use common::{gaussian_instance, grid_search_minima, uniform_instance, QuadStats};
use ndarray::Array1;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;
use varsigma::*;

fn strict() -> SolverOptions {
    SolverOptions::default()
}

fn tight() -> SolverOptions {
    SolverOptions { tol: 1e-11, ..Default::default() }
}

#[test]
fn c01_solver_oracle_equivalence() {
    let t0 = Instant::now();
    let mut accepted_p1 = 0usize;
    let mut accepted_p2 = 0usize;
    let mut seed = 0u64;
    let mut worst: f64 = 0.0;
    while accepted_p1 + accepted_p2 < 200 {
        seed += 1;
        let p = if accepted_p1 < 100 { 1 } else { 2 };
        let mut rng = ChaCha8Rng::seed_from_u64(0x1000 + seed);
        let n = rng.random_range(4..=20usize);
        let (sd, y) = uniform_instance(seed, n, p);
        let lmax = lambda_max_lasso(&sd, &y);
        if lmax <= 0.0 {
            continue;
        }
        let lambda = rng.random_range(0.15..0.95) * lmax;
        let lfit = lasso_cd(&sd, &y, lambda, &strict());
        let ofit = organic_cd(&sd, &y, lambda, &strict());
        // The oracle scans [-2, 2]^p; keep instances whose optima are
        // interior to that box.
        let inside = |b: &Array1<f64>| b.iter().all(|v| v.abs() <= 1.8);
        if !inside(&lfit.beta) || !inside(&ofit.beta) {
            continue;
        }
        let stats = QuadStats::new(&sd, &y);
        let (oracle_l1, oracle_l1sq) = grid_search_minima(&stats, lambda, 1e-3, 1e-5);
        let d1 = (lfit.objective - oracle_l1).abs();
        let d2 = (ofit.objective - oracle_l1sq).abs();
        assert!(d1 <= 1e-6, "lasso vs grid oracle: |{} - {}| = {d1} (seed {seed})",
            lfit.objective, oracle_l1);
        assert!(d2 <= 1e-6, "organic vs grid oracle: |{} - {}| = {d2} (seed {seed})",
            ofit.objective, oracle_l1sq);
        worst = worst.max(d1).max(d2);
        if p == 1 {
            accepted_p1 += 1;
        } else {
            accepted_p2 += 1;
        }
    }
    let dt = t0.elapsed().as_secs_f64();
    assert!(dt < 60.0, "criterion 1 must finish within 1 minute, took {dt:.1}s");
    println!(
        "criterion 01 solver-oracle equivalence: PASS \
         (200 instances, worst |solver - oracle| = {worst:.2e}, {dt:.1}s)"
    );
}

#[test]
fn c02_certificate_soundness() {
    let t0 = Instant::now();
    let fracs = [0.6, 0.3, 0.1, 0.05];
    let mut worst_rel: f64 = 0.0;
    let mut most_negative: f64 = 0.0;
    for i in 0..100u64 {
        let (sd, y) = gaussian_instance(0x2000 + i, 50, 100);
        let lambda = fracs[(i % 4) as usize] * lambda_max_lasso(&sd, &y);
        for organic in [false, true] {
            let fit = if organic {
                organic_cd(&sd, &y, lambda, &strict())
            } else {
                lasso_cd(&sd, &y, lambda, &strict())
            };
            assert!(fit.converged, "instance {i} did not converge");
            let gap = fit.duality_gap.unwrap();
            let rel = gap / fit.objective.abs().max(1.0);
            assert!(rel <= 1e-7, "relative gap {rel} at instance {i}");
            assert!(gap >= -1e-10, "negative gap {gap} at instance {i}");
            worst_rel = worst_rel.max(rel);

            // Certificates stay sound away from optima as well.
            let mut rng = ChaCha8Rng::seed_from_u64(0x3000 + i);
            let beta = Array1::from_shape_fn(sd.p(), |_| rng.random_range(-1.0..1.0));
            let g = if organic {
                organic_duality_gap(&sd, &y, lambda, &beta)
            } else {
                lasso_duality_gap(&sd, &y, lambda, &beta)
            };
            assert!(g >= -1e-10, "random-point gap {g} at instance {i}");
            most_negative = most_negative.min(g);
        }
    }
    println!(
        "criterion 02 certificate soundness: PASS \
         (100 instances, worst relative gap {worst_rel:.2e}, most negative gap {most_negative:.2e}, {:.1}s)",
        t0.elapsed().as_secs_f64()
    );
}

#[test]
fn c03_optimal_value_identities() {
    let t0 = Instant::now();
    let mut worst: f64 = 0.0;
    for i in 0..100u64 {
        let (sd, y) = gaussian_instance(0x2000 + i, 50, 100);
        let n = sd.n() as f64;
        let ny2: f64 = y.iter().map(|v| v * v).sum();

        let grid = make_grid(&sd, &y, PenaltyKind::L1, 20, 1e-2).unwrap();
        let mut opts = strict();
        for &lambda in grid.values() {
            let est = natural_variance(&sd, &y, lambda, &opts);
            let tol = 1e-6 * est.sigma2.max(1.0);
            let resid = est.identity_residual.unwrap();
            assert!(resid <= tol, "natural identity residual {resid} at instance {i}");
            worst = worst.max(resid / est.sigma2.max(1.0));
            opts.warm_start = est.beta.clone();
        }

        let grid = make_grid(&sd, &y, PenaltyKind::L1Squared, 20, 1e-2).unwrap();
        let mut opts = strict();
        for &lambda in grid.values() {
            let est = organic_variance(&sd, &y, lambda, &opts);
            let tol = 1e-6 * est.sigma2.max(1.0);
            // Three-way identity: solver optimal value, the penalized
            // objective recomputed at beta, and the energy form.
            let beta = est.beta.as_ref().unwrap();
            let fitted = sd.predict(beta);
            let rss: f64 = y
                .iter()
                .zip(fitted.iter())
                .map(|(&yi, &fi)| (yi - fi) * (yi - fi))
                .sum();
            let l1: f64 = beta.iter().map(|b| b.abs()).sum();
            let direct = rss / n + 2.0 * lambda * l1 * l1;
            let energy =
                (ny2 - fitted.iter().map(|f| f * f).sum::<f64>() - 2.0 * n * lambda * l1 * l1) / n;
            let d = (est.sigma2 - direct)
                .abs()
                .max((est.sigma2 - energy).abs())
                .max((direct - energy).abs());
            assert!(d <= tol, "organic three-way identity residual {d} at instance {i}");
            worst = worst.max(d / est.sigma2.max(1.0));
            opts.warm_start = est.beta.clone();
        }
    }
    println!(
        "criterion 03 optimal-value identities: PASS \
         (100 instances x 20 lambdas, worst relative residual {worst:.2e}, {:.1}s)",
        t0.elapsed().as_secs_f64()
    );
}

#[test]
fn c04_organic_scale_equivariance() {
    let t0 = Instant::now();
    let mut worst: f64 = 0.0;
    for i in 0..50u64 {
        let (sd, y) = gaussian_instance(0x4000 + i, 30, 60);
        let lambda = lambda_fixed(30, 60, FixedLambda::Lambda2);
        let base = organic_variance(&sd, &y, lambda, &tight());
        let base_beta = base.beta.as_ref().unwrap();
        let base_sigma = base.sigma2.sqrt();
        assert!(base_sigma > 0.0);
        for t in [0.5, 2.0, 10.0] {
            let scaled = organic_variance(&sd, &y.mapv(|v| t * v), lambda, &tight());
            let sigma_rel = (scaled.sigma2.sqrt() - t * base_sigma).abs() / (t * base_sigma);
            assert!(sigma_rel <= 1e-8, "sigma scale error {sigma_rel} (instance {i}, t {t})");
            let sb = scaled.beta.as_ref().unwrap();
            let scale_inf = base_beta.iter().map(|b| (t * b).abs()).fold(0.0_f64, f64::max);
            assert!(scale_inf > 0.0, "organic fit lost its support (instance {i})");
            let diff_inf = sb
                .iter()
                .zip(base_beta.iter())
                .map(|(&s, &b)| (s - t * b).abs())
                .fold(0.0_f64, f64::max);
            let beta_rel = diff_inf / scale_inf;
            assert!(beta_rel <= 1e-8, "beta scale error {beta_rel} (instance {i}, t {t})");
            worst = worst.max(sigma_rel).max(beta_rel);
        }
    }
    println!(
        "criterion 04 scale equivariance: PASS \
         (50 instances, t in {{0.5, 2, 10}}, worst relative error {worst:.2e}, {:.1}s)",
        t0.elapsed().as_secs_f64()
    );
}

#[test]
fn c05_path_mapping_round_trips() {
    let t0 = Instant::now();
    let mut worst: f64 = 0.0;
    let mut done = 0u64;
    let mut seed = 0u64;
    while done < 50 {
        seed += 1;
        let (sd, y) = gaussian_instance(0x5000 + seed, 30, 40);
        let lambda = 0.35 * lambda_max_lasso(&sd, &y);
        let lfit = lasso_cd(&sd, &y, lambda, &tight());
        if lfit.nnz() == 0 {
            continue;
        }
        // Forward: the squared-penalty problem at the mapped value
        // reproduces the l1 solution.
        let nu = path_map(&lfit.beta, lambda, PathDirection::NaturalToOrganic).unwrap();
        let ofit = organic_cd(&sd, &y, nu, &tight());
        for j in 0..sd.p() {
            let d = (lfit.beta[j] - ofit.beta[j]).abs();
            assert!(d <= 1e-6, "forward map coordinate {j} differs by {d} (seed {seed})");
            worst = worst.max(d);
        }

        // Backward: an organic solution refit as a lasso at the mapped value.
        let nu0 = lambda_fixed(30, 40, FixedLambda::Lambda2);
        let ofit = organic_cd(&sd, &y, nu0, &tight());
        let back = path_map(&ofit.beta, nu0, PathDirection::OrganicToNatural).unwrap();
        if back > 0.0 {
            let lfit = lasso_cd(&sd, &y, back, &tight());
            for j in 0..sd.p() {
                let d = (lfit.beta[j] - ofit.beta[j]).abs();
                assert!(d <= 1e-6, "backward map coordinate {j} differs by {d} (seed {seed})");
                worst = worst.max(d);
            }
        }
        done += 1;
    }
    println!(
        "criterion 05 path mapping: PASS \
         (50 instances both directions, worst coordinate gap {worst:.2e}, {:.1}s)",
        t0.elapsed().as_secs_f64()
    );
}

#[test]
fn c06_deterministic_bounds_full_scale() {
    let t0 = Instant::now();
    let spec = SimulationSpec { n: 100, p: 500, rho: 0.3, alpha: 0.5, tau: 1.0, seed: 0 };
    let opts = strict();
    let mut passes1 = 0;
    let mut passes4 = 0;
    let mut min_slack: f64 = f64::INFINITY;
    for r in 0..100u64 {
        let mut s = spec;
        s.seed = replication_seed(61, r);
        let truth = gen_replication(&s).unwrap();
        let c1 = check_deterministic_bounds(&truth, DeterministicBound::Lemma1, &opts).unwrap();
        let c4 = check_deterministic_bounds(&truth, DeterministicBound::Lemma4, &opts).unwrap();
        passes1 += c1.passed as usize;
        passes4 += c4.passed as usize;
        min_slack = min_slack.min(c1.slack).min(c4.slack);
    }
    let dt = t0.elapsed().as_secs_f64();
    assert_eq!(passes1, 100, "lemma1 must pass 100/100");
    assert_eq!(passes4, 100, "lemma4 must pass 100/100");
    assert!(dt < 120.0, "criterion 6 must finish within 2 minutes, took {dt:.1}s");
    println!(
        "criterion 06 deterministic bounds: PASS \
         (lemma1 {passes1}/100, lemma4 {passes4}/100 at n=100 p=500, min slack {min_slack:.3}, {dt:.1}s)"
    );
}

#[test]
fn c07_probabilistic_bounds() {
    let t0 = Instant::now();
    let spec = SimulationSpec { n: 100, p: 500, rho: 0.3, alpha: 0.5, tau: 1.0, seed: 0 };
    let opts = strict();

    let big_l = (100.0_f64).ln();
    let mut passes = 0usize;
    for r in 0..100u64 {
        let mut s = spec;
        s.seed = replication_seed(71, r);
        let truth = gen_replication(&s).unwrap();
        let check =
            check_deterministic_bounds(&truth, DeterministicBound::Theorem4 { big_l }, &opts)
                .unwrap();
        passes += check.passed as usize;
    }
    assert!(passes >= 97, "prediction bound must pass >= 97/100, got {passes}");

    let thm1 = check_mse_bound(&spec, MseBound::Thm1, 1.5, 200, 72).unwrap();
    assert!(thm1.passed, "l1 MSE bound violated: {thm1:?}");
    let thm3 = check_mse_bound(&spec, MseBound::Thm3, 1.5, 200, 73).unwrap();
    assert!(thm3.passed, "squared-l1 MSE bound violated: {thm3:?}");

    let dt = t0.elapsed().as_secs_f64();
    assert!(dt < 600.0, "criterion 7 must finish within 10 minutes, took {dt:.1}s");
    println!(
        "criterion 07 probabilistic bounds: PASS \
         (thm4 {passes}/100; thm1 margin {:.3}; thm3 margin {:.3}; {dt:.1}s)",
        thm1.margin, thm3.margin
    );
}

#[test]
fn c08_benchmark_orderings_match_reported_behavior() {
    let t0 = Instant::now();
    let rhos = [0.3, 0.9];
    let alphas = [0.1, 0.3, 0.5, 0.7, 0.9];
    let reps = 200;
    let methods: Vec<MethodConfig> = [
        Method::Naive,
        Method::Reid,
        Method::Natural,
        Method::Organic,
        Method::SqrtLasso,
        Method::Oracle,
    ]
    .iter()
    .map(|&m| MethodConfig::cv(m))
    .collect();

    // mse[rho_idx][alpha_idx][method_idx] plus the matching standard errors.
    let mut mse = [[[0.0_f64; 6]; 5]; 2];
    let mut mse_se = [[[0.0_f64; 6]; 5]; 2];
    let mut cell_idx = 0u64;
    for (ri, &rho) in rhos.iter().enumerate() {
        for (ai, &alpha) in alphas.iter().enumerate() {
            let cell_seed = replication_seed(81, cell_idx);
            cell_idx += 1;
            let spec = SimulationSpec { n: 100, p: 500, rho, alpha, tau: 1.0, seed: cell_seed };
            let report = run_benchmark(&spec, &methods, reps, cell_seed).unwrap();
            for (mi, stat) in report.stats.iter().enumerate() {
                mse[ri][ai][mi] = stat.mse_mean;
                mse_se[ri][ai][mi] = stat.mse_se.unwrap_or(0.0);
            }
            println!(
                "  cell rho={rho} alpha={alpha}: mse naive={:.4} reid={:.4} natural={:.4} \
                 organic={:.4} sqrt={:.4} oracle={:.4} (reid failures {})",
                mse[ri][ai][0],
                mse[ri][ai][1],
                mse[ri][ai][2],
                mse[ri][ai][3],
                mse[ri][ai][4],
                mse[ri][ai][5],
                report.stats[1].failures
            );
        }
    }

    // (a) organic is uniformly better than or equivalent to the adjusted
    // estimator: within one Monte Carlo standard error at every point.
    for ri in 0..2 {
        for ai in 0..5 {
            let organic = mse[ri][ai][3];
            let reid = mse[ri][ai][1];
            let se = mse_se[ri][ai][1];
            assert!(
                organic <= reid + se,
                "(a) organic {organic} > reid {reid} + se {se} at rho={}, alpha={}",
                rhos[ri],
                alphas[ai]
            );
        }
    }

    // (b) denser signals hurt every method except the natural lasso, which
    // improves from alpha = 0.5 to 0.9.
    for ri in 0..2 {
        for &(mi, name) in &[(0, "naive"), (1, "reid"), (4, "sqrt"), (3, "organic")] {
            assert!(
                mse[ri][4][mi] > mse[ri][0][mi],
                "(b) {name} at rho={} should degrade from alpha 0.1 to 0.9 \
                 ({} vs {})",
                rhos[ri],
                mse[ri][0][mi],
                mse[ri][4][mi]
            );
        }
        assert!(
            mse[ri][4][2] < mse[ri][2][2],
            "(b) natural at rho={} should improve from alpha 0.5 to 0.9 ({} vs {})",
            rhos[ri],
            mse[ri][2][2],
            mse[ri][4][2]
        );
    }

    // (c) high correlation helps every method on average over alpha.
    for (mi, name) in
        [(0, "naive"), (1, "reid"), (2, "natural"), (3, "organic"), (4, "sqrt"), (5, "oracle")]
    {
        let mean_lo: f64 = (0..5).map(|ai| mse[0][ai][mi]).sum::<f64>() / 5.0;
        let mean_hi: f64 = (0..5).map(|ai| mse[1][ai][mi]).sum::<f64>() / 5.0;
        assert!(
            mean_hi < mean_lo,
            "(c) {name}: rho=0.9 mean MSE {mean_hi} should be below rho=0.3 mean {mean_lo}"
        );
    }

    let dt = t0.elapsed().as_secs_f64();
    assert!(dt < 1800.0, "criterion 8 must finish within 30 minutes, took {dt:.1}s");
    println!(
        "criterion 08 benchmark orderings: PASS \
         (10 cells x {reps} reps, 5-fold CV, all ordering claims hold, {dt:.1}s)"
    );
}

#[test]
fn c09_lambda3_approximates_lambda2() {
    let t0 = Instant::now();
    let l2 = lambda_fixed(100, 500, FixedLambda::Lambda2);
    let mut ratios = Vec::new();
    for (i, rho) in [0.1, 0.5, 0.9].into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(91 + i as u64);
        let x = gen_design(100, 500, rho, &mut rng);
        let ds = Dataset::new(Array1::zeros(100), x).unwrap();
        let sd = standardize_columns(&ds, ds.default_drop_tol()).unwrap();
        let l3 = lambda3_monte_carlo(&sd, 1000, 191 + i as u64);
        assert!(
            l3 >= 0.5 * l2 && l3 <= 3.0 * l2,
            "lambda3 = {l3} outside [0.5, 3] x lambda2 = {l2} at rho = {rho}"
        );
        ratios.push(l3 / l2);
    }
    println!(
        "criterion 09 lambda3 sanity: PASS \
         (lambda3/lambda2 = {ratios:.3?} at rho = [0.1, 0.5, 0.9], {:.1}s)",
        t0.elapsed().as_secs_f64()
    );
}

#[test]
fn c10_estimate_ingests_wide_csv_with_all_methods() {
    let t0 = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("songs_like.csv");
    let run = |args: &[&str]| {
        std::process::Command::new(env!("CARGO_BIN_EXE_varsigma"))
            .args(args)
            .output()
            .expect("binary runs")
    };
    // Synthetic stand-in with the same shape as the 90-predictor dataset.
    let sim = run(&[
        "simulate", "--n", "100", "--p", "90", "--rho", "0.3", "--alpha", "0.5",
        "--tau", "1", "--seed", "10", "--out", data.to_str().unwrap(),
    ]);
    assert!(sim.status.success(), "{}", String::from_utf8_lossy(&sim.stderr));

    let est = run(&[
        "estimate", "--input", data.to_str().unwrap(),
        "--method", "naive,reid,natural,organic,sqrt",
        "--lambda", "cv", "--folds", "5", "--seed", "2",
    ]);
    assert!(est.status.success(), "{}", String::from_utf8_lossy(&est.stderr));
    let report: serde_json::Value = serde_json::from_slice(&est.stdout).unwrap();
    assert_eq!(report["p"], 90);
    let methods = report["methods"].as_array().unwrap();
    assert_eq!(methods.len(), 5);
    for m in methods {
        assert!(
            m["sigma2"].as_f64().unwrap_or(f64::NAN) > 0.0,
            "method {} failed: {:?}",
            m["method"],
            m["error"]
        );
        assert_eq!(m["error"], serde_json::Value::Null);
    }
    println!(
        "criterion 10 wide-CSV estimate: PASS \
         (p=90 synthetic stand-in, 5 methods, exit 0, {:.1}s)",
        t0.elapsed().as_secs_f64()
    );
}
