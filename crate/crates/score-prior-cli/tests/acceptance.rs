//! Acceptance gate: one test per shipping criterion, each printing a
//! single line when it holds. Solver-level checks go through the
//! library; study-level checks drive the compiled binary and read its
//! artifacts back. Tests serialize on a shared lock so the timing
//! assertions measure the machine, not the test scheduler.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use std::sync::Mutex;
use std::time::Instant;

use score_prior::models::{loglik_binomial, Dataset, ModelSpec};
use score_prior::numeric::trapezoid;
use score_prior::prior::{
    solve_half_line_anchor, solve_u, tail_bound_check, DensityTable, PriorSpec,
    HALF_LINE_U0_QUOTED,
};
use score_prior::scoring::{score_at_unnormalized, score_identity_residual};
use score_prior::selection::{
    intrinsic_bf10, intrinsic_prior, marginal_likelihood, nested_comparison,
};

static GATE: Mutex<()> = Mutex::new(());

fn gate() -> std::sync::MutexGuard<'static, ()> {
    GATE.lock().unwrap_or_else(|e| e.into_inner())
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_score-prior"))
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "command {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn write_cfg(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

/// Data rows of a CSV, header and comment lines dropped.
fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()))
        .lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn criterion_01_identity_residual_small_on_all_six_configurations() {
    let _g = gate();
    let root = solve_half_line_anchor();
    let configs: Vec<(&str, PriorSpec, f64, usize)> = vec![
        ("unit w=1.10", PriorSpec::unit_interval(0.5, 1.10).unwrap(), 0.5, 1_000),
        ("unit w=1.14", PriorSpec::unit_interval(0.5, 1.14).unwrap(), 0.5, 1_000),
        ("unit w=1.50 at 1/4", PriorSpec::unit_interval(0.25, 1.50).unwrap(), 0.75, 15_000),
        ("half line", PriorSpec::half_line(), 0.85, 8_500),
        ("symmetric", PriorSpec::real_line_symmetric(root, 0.0).unwrap(), 0.85, 8_500),
        ("smooth", PriorSpec::real_line_smooth(0.01, 0.0).unwrap(), 5.0, 50_000),
    ];
    let mut worst = 0.0f64;
    let mut slowest = 0.0f64;
    for (label, spec, hw, n) in configs {
        let t0 = Instant::now();
        let table = solve_u(&spec, hw, n).unwrap();
        let r = score_identity_residual(&table);
        let dt = t0.elapsed().as_secs_f64();
        assert!(r < 1e-4, "{label}: residual {r:.3e}");
        assert!(dt < 1.0, "{label}: took {dt:.2}s");
        worst = worst.max(r);
        slowest = slowest.max(dt);
    }
    println!(
        "criterion 01 PASS: worst interior residual {worst:.2e} across six configurations, slowest solve {slowest:.2}s"
    );
}

#[test]
fn criterion_02_anchor_root_matches_independent_bisection() {
    let _g = gate();
    // Root of (1+2u)e^{-u} = 1 on [1, 2], found without the library.
    let f = |u: f64| (1.0 + 2.0 * u) * (-u).exp() - 1.0;
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    assert!(f(lo) > 0.0 && f(hi) < 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let oracle = 0.5 * (lo + hi);
    let root = solve_half_line_anchor();
    assert!((root - oracle).abs() < 1e-10, "root {root} vs oracle {oracle}");
    println!(
        "criterion 02 PASS: anchor root {root:.12} agrees with bisection {oracle:.12}; \
         the commonly quoted {HALF_LINE_U0_QUOTED} is off by {:.4}",
        (root - HALF_LINE_U0_QUOTED).abs()
    );
}

#[test]
fn criterion_03_combined_score_is_constant() {
    let _g = gate();
    // On the unnormalized solved prior the total score should not move
    // across interior evaluation points.
    let spec = PriorSpec::unit_interval(0.5, 1.14).unwrap();
    let table = solve_u(&spec, 0.5, 1_000).unwrap();
    let points = [0.33, 0.35, 0.38, 0.41, 0.44, 0.56, 0.59, 0.62, 0.65, 0.67];
    let totals: Vec<f64> = points
        .iter()
        .map(|&t| score_at_unnormalized(&table, t).unwrap().total)
        .collect();
    let spread = totals.iter().cloned().fold(f64::MIN, f64::max)
        - totals.iter().cloned().fold(f64::MAX, f64::min);
    assert!(spread < 1e-2, "solved-prior total spread {spread:.3e}");

    // Analytic standard normal, with stencils built here rather than
    // taken from the library: the log-score minus the second-order
    // score must be the same number everywhere.
    let h = 1e-3;
    let m = 6_000usize;
    let lp: Vec<f64> = (0..=m)
        .map(|i| {
            let x = -3.0 + i as f64 * h;
            -0.5 * x * x - 0.5 * (2.0 * std::f64::consts::PI).ln()
        })
        .collect();
    let mut diffs = Vec::with_capacity(10);
    for k in 1..=10usize {
        let i = k * 500;
        let d1 = (-lp[i + 2] + 8.0 * lp[i + 1] - 8.0 * lp[i - 1] + lp[i - 2]) / (12.0 * h);
        let d2 = (-lp[i + 2] + 16.0 * lp[i + 1] - 30.0 * lp[i] + 16.0 * lp[i - 1] - lp[i - 2])
            / (12.0 * h * h);
        diffs.push(-lp[i] - (d2 + 0.5 * d1 * d1));
    }
    let lo = diffs.iter().cloned().fold(f64::MAX, f64::min);
    let hi = diffs.iter().cloned().fold(f64::MIN, f64::max);
    assert!(hi - lo < 1e-3, "normal score-difference spread {:.3e}", hi - lo);
    let expect = 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0;
    for d in &diffs {
        assert!((d - expect).abs() < 1e-3, "score difference {d} vs {expect}");
    }
    println!(
        "criterion 03 PASS: solved-prior score spread {spread:.2e}; \
         normal score difference constant at {:.6} (analytic {expect:.6})",
        diffs[0]
    );
}

#[test]
fn criterion_04_half_line_mass_is_stable_and_tail_bounded() {
    let _g = gate();
    let spec = PriorSpec::half_line();
    let t20 = solve_u(&spec, 20.0, 20_000).unwrap();
    let t40 = solve_u(&spec, 40.0, 40_000).unwrap();
    let mass20 = t20.normalizer_log.exp();
    let mass40 = t40.normalizer_log.exp();
    assert!(
        (mass20 - mass40).abs() < 1e-6,
        "mass {mass20} vs {mass40} between window sizes"
    );
    let u0 = solve_half_line_anchor();
    assert!(tail_bound_check(&t20, (-u0).exp(), u0));
    assert!(tail_bound_check(&t40, (-u0).exp(), u0));
    println!(
        "criterion 04 PASS: mass {mass20:.9} moves {:.1e} when the window doubles; \
         exponential tail bound holds at every grid point",
        (mass20 - mass40).abs()
    );
}

#[test]
fn criterion_05_uniform_prior_marginals_match_beta_closed_forms() {
    let _g = gate();
    let prior = DensityTable::uniform_unit(100_000);
    let trials = 12u64;
    let mut worst = 0.0f64;
    for y in 0..=trials {
        let data = Dataset::from_values(vec![y as f64]);
        let m = marginal_likelihood(&ModelSpec::Binomial { trials }, &prior, &data)
            .unwrap()
            .exp();
        let closed = 1.0 / (trials as f64 + 1.0);
        worst = worst.max((m - closed).abs());
        assert!((m - closed).abs() < 1e-8, "binomial y={y}: {m} vs {closed}");
    }
    for x in [0u64, 1, 5, 17] {
        let data = Dataset::from_values(vec![x as f64]);
        let m = marginal_likelihood(&ModelSpec::Geometric, &prior, &data)
            .unwrap()
            .exp();
        let xf = x as f64;
        // Beta(2, x+1)
        let closed = 1.0 / ((xf + 1.0) * (xf + 2.0));
        worst = worst.max((m - closed).abs());
        assert!((m - closed).abs() < 1e-8, "geometric x={x}: {m} vs {closed}");
    }
    // Several observations at once: Beta(4, 4).
    let data = Dataset::from_values(vec![1.0, 2.0, 0.0]);
    let m = marginal_likelihood(&ModelSpec::Geometric, &prior, &data)
        .unwrap()
        .exp();
    worst = worst.max((m - 1.0 / 140.0).abs());
    assert!((m - 1.0 / 140.0).abs() < 1e-8, "joint geometric: {m}");
    println!("criterion 05 PASS: worst deviation from Beta closed forms {worst:.2e}");
}

#[test]
fn criterion_06_discrimination_rows_have_zero_exceptions() {
    let _g = gate();
    let dir = tempfile::tempdir().unwrap();
    let t0 = Instant::now();
    for phi in ["0.5", "0.8"] {
        let cfg = write_cfg(
            dir.path(),
            &format!("row{phi}.cfg"),
            &format!("n = 100\ntheta = 5.0\nphi = {phi}\n"),
        );
        let out = dir.path().join(format!("row{phi}"));
        run_ok(&[
            "model-compare", "--config", &cfg, "--seed", "60", "--reps", "20",
            "--out", out.to_str().unwrap(),
        ]);
        let rows = csv_rows(&out.join("bf_table.csv"));
        assert_eq!(rows.len(), 1);
        let exc: (usize, usize) = (rows[0][6].parse().unwrap(), rows[0][7].parse().unwrap());
        assert_eq!(exc, (0, 0), "phi={phi}: exceptions {exc:?}");
    }
    let dt = t0.elapsed().as_secs_f64();
    assert!(dt < 120.0, "took {dt:.1}s");
    println!(
        "criterion 06 PASS: 20 replications per direction, zero exceptions in both rows ({dt:.2}s)"
    );
}

#[test]
fn criterion_07_nested_curves_dip_at_three_and_match_closed_form() {
    let _g = gate();
    let (n, theta0, w, b, t) = (12u64, 0.25, 1.5, 1.0, 8u64);
    let rep = nested_comparison(n, theta0, w, b, t).unwrap();
    for (name, curve) in [
        ("score-based", &rep.scoring_prob_m1),
        ("intrinsic", &rep.intrinsic_prob_m1),
    ] {
        let argmin = curve
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        assert_eq!(argmin, 3, "{name} curve bottoms at {argmin}");
        for i in 0..3 {
            assert!(curve[i] > curve[i + 1], "{name} not decreasing at y={i}");
        }
        for i in 3..n as usize {
            assert!(curve[i] < curve[i + 1], "{name} not increasing at y={i}");
        }
    }
    // Quadrature over the mixture density against the closed form.
    let h = 2e-5;
    let pts = (1.0 / h) as usize;
    let dens: Vec<f64> = (0..=pts).map(|i| intrinsic_prior(i as f64 * h, b, t, theta0)).collect();
    let mut worst = 0.0f64;
    for y in 0..=n {
        let vals: Vec<f64> = (0..=pts)
            .map(|i| loglik_binomial(i as f64 * h, y, n).exp() * dens[i])
            .collect();
        let quad = trapezoid(&vals, h);
        let closed = intrinsic_bf10(y, n, b, t, theta0) * loglik_binomial(theta0, y, n).exp();
        worst = worst.max((quad - closed).abs());
        assert!((quad - closed).abs() < 1e-8, "y={y}: {quad} vs {closed}");
    }
    println!(
        "criterion 07 PASS: both curves bottom at y=3 and rise monotonically; \
         closed form within {worst:.2e} of quadrature"
    );
}

#[test]
fn criterion_08_poisson_calibration_matches_reference_bands() {
    let _g = gate();
    let dir = tempfile::tempdir().unwrap();
    // The key is accepted (a full 250-replication run sits behind it);
    // left off, the study runs the 100-replication design checked here.
    let cfg = write_cfg(dir.path(), "cov.cfg", "paper_scale = false\n");
    let out = dir.path().join("cov");
    let t0 = Instant::now();
    run_ok(&["coverage-study", "--config", &cfg, "--seed", "13", "--out", out.to_str().unwrap()]);
    let dt = t0.elapsed().as_secs_f64();
    assert!(dt < 600.0, "took {dt:.0}s");
    let refs: &[(&str, &str, f64, f64)] = &[
        ("proposed", "3", 0.679, 0.95),
        ("jeffreys", "3", 0.616, 0.92),
        ("proposed", "10", 0.316, 0.97),
        ("jeffreys", "10", 0.300, 0.96),
        ("proposed", "30", 0.056, 0.98),
        ("jeffreys", "30", 0.054, 0.95),
        ("proposed", "100", 0.010, 0.96),
        ("jeffreys", "100", 0.009, 0.94),
    ];
    let rows = csv_rows(&out.join("freq_report.csv"));
    assert_eq!(rows.len(), 8);
    let mut worst_rmse = 0.0f64;
    let mut worst_cov = 0.0f64;
    for &(prior, n, rmse_ref, cov_ref) in refs {
        let row = rows
            .iter()
            .find(|r| r[1] == prior && r[2] == n)
            .unwrap_or_else(|| panic!("no row for {prior}/{n}"));
        let rmse = num(&row[4]);
        let cov = num(&row[5]);
        assert!(
            (rmse - rmse_ref).abs() <= 0.08,
            "{prior} n={n}: relative rmse {rmse:.3} vs reference {rmse_ref}"
        );
        assert!(
            (cov - cov_ref).abs() <= 0.06,
            "{prior} n={n}: coverage {cov:.2} vs reference {cov_ref}"
        );
        worst_rmse = worst_rmse.max((rmse - rmse_ref).abs());
        worst_cov = worst_cov.max((cov - cov_ref).abs());
    }
    println!(
        "criterion 08 PASS: 100-replication study in {dt:.0}s; \
         worst rmse gap {worst_rmse:.3}, worst coverage gap {worst_cov:.3}"
    );
}

#[test]
fn criterion_09_mixture_recovery_within_three_posterior_sds() {
    let _g = gate();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("mix");
    let t0 = Instant::now();
    run_ok(&["mixture", "--seed", "5", "--out", out.to_str().unwrap()]);
    let dt = t0.elapsed().as_secs_f64();
    assert!(dt < 300.0, "took {dt:.0}s");
    let draws = score_prior::io::read_chain_draws(out.join("chain.csv")).unwrap();
    assert_eq!(draws.len(), 10_000);
    for (i, row) in draws.iter().enumerate() {
        assert_eq!(row.len(), 9);
        let s = row[0] + row[1] + row[2];
        assert!((s - 1.0).abs() < 1e-9, "iteration {i}: weight sum {s}");
        assert!(row[..3].iter().all(|&w| w >= 0.0), "iteration {i}: negative weight");
    }
    let rows = csv_rows(&out.join("summary.csv"));
    let mut worst = 0.0f64;
    for (target, coord) in [(-3.5f64, 3usize), (0.0, 4), (2.5, 5)] {
        let row = &rows[coord];
        assert_eq!(row[0], coord.to_string());
        let (mean, sd) = (num(&row[1]), num(&row[2]));
        let z = (mean - target).abs() / sd;
        assert!(z <= 3.0, "coordinate {coord}: mean {mean:.3} vs {target} is {z:.1} sds off");
        worst = worst.max(z);
    }
    println!(
        "criterion 09 PASS: 10k Gibbs iterations in {dt:.1}s; weights on the simplex \
         throughout; worst mean deviation {worst:.2} posterior sds"
    );
}

fn assert_containment(out: &Path, k: usize) {
    let truth = csv_rows(&out.join("truth.csv"));
    let cat = csv_rows(&out.join("caterpillar.csv"));
    assert_eq!(truth.len(), k);
    assert_eq!(cat.len(), k);
    for (t, c) in truth.iter().zip(&cat) {
        assert_eq!(t[0], c[0]);
        let b = num(&t[1]);
        let (lo, hi) = (num(&c[2]), num(&c[3]));
        assert!(
            lo <= b && b <= hi,
            "coordinate {}: coefficient {b:.3} outside [{lo:.3}, {hi:.3}]",
            t[0]
        );
    }
}

#[test]
fn criterion_10_regression_intervals_contain_the_truth() {
    let _g = gate();
    let dir = tempfile::tempdir().unwrap();
    let out5 = dir.path().join("k5");
    run_ok(&["poisson-regression", "--seed", "4", "--out", out5.to_str().unwrap()]);
    assert_containment(&out5, 5);

    // Noise-padded design: three active coefficients, the rest zero.
    let cfg = write_cfg(dir.path(), "k20.cfg", "k = 20\niters = 25000\n");
    let out20 = dir.path().join("k20");
    run_ok(&["poisson-regression", "--config", &cfg, "--seed", "4", "--out", out20.to_str().unwrap()]);
    assert_containment(&out20, 20);

    // Same seed, same bytes.
    let out5b = dir.path().join("k5b");
    run_ok(&["poisson-regression", "--seed", "4", "--out", out5b.to_str().unwrap()]);
    for name in ["caterpillar.csv", "chain.csv", "truth.csv"] {
        assert_eq!(
            fs::read(out5.join(name)).unwrap(),
            fs::read(out5b.join(name)).unwrap(),
            "{name} differs between identical runs"
        );
    }
    println!(
        "criterion 10 PASS: all 5 and all 20 intervals contain the generating \
         coefficients; rerun is byte-identical"
    );
}

#[test]
fn criterion_11_reruns_emit_byte_identical_csvs() {
    let _g = gate();
    let dir = tempfile::tempdir().unwrap();
    let hl = write_cfg(dir.path(), "hl.cfg", "domain = half-line\nanchor = 2.0\n");
    let sm = write_cfg(dir.path(), "sm.cfg", "model = poisson\nn = 50\niters = 400\n");
    let mc = write_cfg(dir.path(), "mc.cfg", "theta = 3.0\nphi = 0.5\nn = 40\n");
    let mx = write_cfg(dir.path(), "mx.cfg", "n = 60\niters = 500\n");
    let rg = write_cfg(dir.path(), "rg.cfg", "k = 2\nn = 60\niters = 1000\n");
    let runs: Vec<(&str, Vec<&str>)> = vec![
        ("solve-prior", vec!["solve-prior", "--config", &hl, "--seed", "9"]),
        ("sample", vec!["sample", "--config", &sm, "--seed", "9"]),
        ("model-compare", vec!["model-compare", "--config", &mc, "--seed", "9", "--reps", "2"]),
        ("nested-binomial", vec!["nested-binomial", "--seed", "9"]),
        ("mixture", vec!["mixture", "--config", &mx, "--seed", "9"]),
        ("poisson-regression", vec!["poisson-regression", "--config", &rg, "--seed", "9"]),
        ("coverage-study", vec!["coverage-study", "--seed", "9", "--reps", "3"]),
    ];
    let mut files = 0usize;
    for (name, args) in runs {
        let out_a = dir.path().join(format!("{name}-a"));
        let out_b = dir.path().join(format!("{name}-b"));
        for out in [&out_a, &out_b] {
            let mut full = args.clone();
            full.push("--out");
            full.push(out.to_str().unwrap());
            run_ok(&full);
        }
        let list = |d: &Path| {
            let mut v: Vec<String> = fs::read_dir(d)
                .unwrap()
                .map(|e| e.unwrap().file_name().into_string().unwrap())
                .filter(|n| n.ends_with(".csv"))
                .collect();
            v.sort();
            v
        };
        let names = list(&out_a);
        assert!(!names.is_empty(), "{name}: no CSV artifacts");
        assert_eq!(names, list(&out_b), "{name}: artifact sets differ");
        for file in &names {
            assert_eq!(
                fs::read(out_a.join(file)).unwrap(),
                fs::read(out_b.join(file)).unwrap(),
                "{name}/{file} differs between reruns"
            );
            files += 1;
        }
    }
    println!("criterion 11 PASS: 7 commands re-run byte-identical across {files} CSV artifacts");
}
