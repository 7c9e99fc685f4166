//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.
//!
//! Built with `harness = false` so the summary lines are always visible.

use std::collections::BTreeMap;
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config as PropConfig, TestCaseError, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Deserialize;

use radabound::bounds::{
    est_error_bernstein, est_error_mcdiarmid, mcdiarmid_combined_objective, mclt_two_step_rade,
    normal_cdf, psi_bound_mcdiarmid_combined, psi_bound_mclt, psi_bound_single_bim,
    psi_bound_two_term, two_term_objective,
};
use radabound::io::{run_configured, RunConfig};
use radabound::thresholdout::{ThresholdoutParams, PRINTED_EXAMPLE_N};
use radabound::{
    comparison_report, exact_empirical_rademacher, min_holdout_size, run_experiment, BoundInputs,
    BoundMethod, DatasetSpec, Error, Guard, GuardConfig, HoldoutSample, QueryStatus,
    RademacherState, SignMatrix,
};

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        ((a - b) / b).abs()
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------------------
// 1. Oracle equivalence

fn all_sign_vectors(m: usize) -> SignMatrix {
    let rows: Vec<Vec<i8>> = (0..1u32 << m)
        .map(|bits| {
            (0..m)
                .map(|i| if bits >> i & 1 == 1 { 1 } else { -1 })
                .collect()
        })
        .collect();
    SignMatrix::from_rows(&rows).expect("valid enumeration")
}

fn oracle_equivalence() -> Outcome {
    const FAMILIES: usize = 50;
    const L_MC: usize = 10_000;
    let mut rng = ChaCha20Rng::seed_from_u64(2024);
    let mut within_3se = 0;
    let mut worst_exact = 0.0f64;
    for family in 0..FAMILIES {
        let k = rng.gen_range(1..=5);
        let m = rng.gen_range(1..=10);
        let values: Vec<Vec<f64>> = (0..k)
            .map(|_| (0..m).map(|_| rng.gen::<f64>()).collect())
            .collect();

        let oracle = exact_empirical_rademacher(&values, true).map_err(|e| e.to_string())?;
        let mut full = RademacherState::with_signs(all_sign_vectors(m), true);
        for f in &values {
            full.update(f).map_err(|e| e.to_string())?;
        }
        let diff = (full.estimate() - oracle).abs();
        worst_exact = worst_exact.max(diff);
        ensure(diff <= 1e-12, || {
            format!(
                "family {family}: enumerated path {} vs oracle {oracle}",
                full.estimate()
            )
        })?;

        let mut sign_rng = ChaCha20Rng::seed_from_u64(10_000 + family as u64);
        let mut mc =
            RademacherState::new(m, L_MC, true, &mut sign_rng).map_err(|e| e.to_string())?;
        for f in &values {
            mc.update(f).map_err(|e| e.to_string())?;
        }
        let sups = mc.running_sup();
        let mean = mc.estimate();
        let var = sups.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (L_MC - 1) as f64;
        let se = (var / L_MC as f64).sqrt();
        if (mean - oracle).abs() <= 3.0 * se + 1e-12 {
            within_3se += 1;
        }
    }
    ensure(within_3se >= 48, || {
        format!("only {within_3se}/50 Monte-Carlo estimates within 3 SE")
    })?;
    Ok(format!(
        "exact match on {FAMILIES} families (max diff {worst_exact:.1e}); {within_3se}/{FAMILIES} Monte-Carlo within 3 SE"
    ))
}

// ---------------------------------------------------------------------------
// 2. Bound formula fidelity

#[derive(Deserialize)]
struct OracleRow {
    m: usize,
    l: usize,
    slack: f64,
    single_bim: String,
    mclt: String,
}

#[derive(Deserialize)]
struct OracleFile {
    rows: Vec<OracleRow>,
}

const DENSE_POINTS: usize = 1_000_000;

/// Best point of a `DENSE_POINTS` uniform interior grid: `(argmin, min, spacing)`.
fn dense_grid_min(lo: f64, hi: f64, f: &impl Fn(f64) -> f64) -> (f64, f64, f64) {
    let step = (hi - lo) / (DENSE_POINTS + 1) as f64;
    (1..=DENSE_POINTS)
        .map(|k| lo + step * k as f64)
        .map(|x| (x, f(x)))
        .fold((lo, f64::INFINITY, step), |best, (x, v)| {
            if v < best.1 {
                (x, v, step)
            } else {
                best
            }
        })
}

/// Dense-grid oracle: a second dense grid over the best cell of the first.
/// Returns `(single-level min, nested min)`.
fn dense_oracle(lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let (x, coarse, step) = dense_grid_min(lo, hi, &f);
    let (_, fine, _) = dense_grid_min((x - step).max(lo), (x + step).min(hi), &f);
    (coarse.min(1.0), coarse.min(fine).min(1.0))
}

fn bound_fidelity() -> Outcome {
    let b = est_error_bernstein(1000, 8, 0.01).map_err(|e| e.to_string())?;
    let expected = (-4.8f64 / 15.64).exp();
    ensure(rel(b, expected) <= 1e-12, || {
        format!("bernstein {b} vs {expected}")
    })?;

    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/oracles/bounds_oracle.json");
    let text = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    let oracle: OracleFile = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    ensure(oracle.rows.len() == 100, || {
        format!("fixture has {} rows", oracle.rows.len())
    })?;
    let mut worst = 0.0f64;
    for row in &oracle.rows {
        let want_bim: f64 = row
            .single_bim
            .parse()
            .map_err(|_| "bad fixture value".to_string())?;
        let want_mclt: f64 = row
            .mclt
            .parse()
            .map_err(|_| "bad fixture value".to_string())?;
        let got_bim = psi_bound_single_bim(row.m, row.l, row.slack).map_err(|e| e.to_string())?;
        let got_mclt = psi_bound_mclt(row.m, row.l, row.slack).map_err(|e| e.to_string())?;
        for (name, got, want) in [
            ("single_bim", got_bim, want_bim),
            ("mclt", got_mclt, want_mclt),
        ] {
            let r = rel(got, want);
            worst = worst.max(r);
            ensure(r <= 1e-9, || {
                format!(
                    "{name}(m={}, l={}, slack={}) = {got:e}, oracle {want:e}",
                    row.m, row.l, row.slack
                )
            })?;
        }
    }

    let mut instances = Vec::new();
    for &m in &[1000usize, 4000] {
        for &l in &[16usize, 64] {
            for &slack in &[0.06, 0.08, 0.1, 0.15, 0.2] {
                instances.push((m, l, slack));
            }
        }
    }
    let min_worst = instances
        .par_iter()
        .map(|&(m, l, slack)| -> std::result::Result<f64, String> {
            let two = psi_bound_two_term(m, l, slack).map_err(|e| e.to_string())?;
            let (two_coarse, two_grid) =
                dense_oracle(0.0, slack, |a| two_term_objective(m, l, slack, a));
            let mcd = psi_bound_mcdiarmid_combined(m, l, slack).map_err(|e| e.to_string())?;
            let (mcd_coarse, mcd_grid) = dense_oracle(0.0, slack / 2.0, |t| {
                mcdiarmid_combined_objective(m, l, slack, t)
            });
            ensure(two <= two_coarse && mcd <= mcd_coarse, || {
                format!("m={m}, l={l}, slack={slack}: minimizer above the single-level dense grid")
            })?;
            let (r1, r2) = (rel(two, two_grid), rel(mcd, mcd_grid));
            ensure(r1 <= 1e-9, || {
                format!("two_term(m={m}, l={l}, slack={slack}) {two:e} vs grid {two_grid:e}")
            })?;
            ensure(r2 <= 1e-9, || {
                format!(
                    "mcdiarmid_combined(m={m}, l={l}, slack={slack}) {mcd:e} vs grid {mcd_grid:e}"
                )
            })?;
            Ok(r1.max(r2))
        })
        .collect::<std::result::Result<Vec<_>, _>>()?
        .into_iter()
        .fold(0.0, f64::max);

    Ok(format!(
        "bernstein exact; 100-point closed-form grid max rel err {worst:.1e}; {} minimization instances x2 max rel err {min_worst:.1e}",
        instances.len()
    ))
}

// ---------------------------------------------------------------------------
// 3. Estimate-error ordering

fn estimate_error_ordering() -> Outcome {
    let mut cells = Vec::new();
    for l in [2usize, 4, 8, 16, 32, 64] {
        let mclt = mclt_two_step_rade(1000, l, 0.01).map_err(|e| e.to_string())?;
        let bern = est_error_bernstein(1000, l, 0.01).map_err(|e| e.to_string())?;
        let mcd = est_error_mcdiarmid(1000, l, 0.01).map_err(|e| e.to_string())?;
        ensure(mclt <= bern && bern <= mcd, || {
            format!("l={l}: mclt {mclt:.4} bernstein {bern:.4} mcdiarmid {mcd:.4}")
        })?;
        cells.push(format!("l={l}:{mclt:.3}<={bern:.3}<={mcd:.3}"));
    }
    Ok(cells.join(" "))
}

// ---------------------------------------------------------------------------
// 4. Guard validity on no-signal data

fn guard_validity() -> Outcome {
    const RUNS: u64 = 50;
    const MAX_VIOLATING: usize = 9;
    let epsilons = [0.05, 0.1, 0.2];
    let jobs: Vec<(usize, u64)> = (0..epsilons.len())
        .flat_map(|e| (0..RUNS).map(move |s| (e, s)))
        .collect();
    let results = jobs
        .par_iter()
        .map(
            |&(e, seed)| -> std::result::Result<(usize, bool, Option<usize>), String> {
                let eps = epsilons[e];
                let spec = DatasetSpec::no_signal(500, 1.0, seed);
                let cfg = GuardConfig::new(eps, 0.1, 32, BoundMethod::Mclt, seed);
                let res = run_experiment(&spec, &cfg).map_err(|e| e.to_string())?;
                let violated = res
                    .trace
                    .rows
                    .iter()
                    .filter_map(|r| r.holdout_accuracy)
                    .any(|acc| (acc - 0.5).abs() > eps);
                Ok((e, violated, res.trace.halt_index))
            },
        )
        .collect::<std::result::Result<Vec<_>, _>>()?;

    let mut parts = Vec::new();
    let mut failed = Vec::new();
    for (e, eps) in epsilons.iter().enumerate() {
        let mine: Vec<_> = results.iter().filter(|r| r.0 == e).collect();
        let violating = mine.iter().filter(|r| r.1).count();
        let halted = mine.iter().filter(|r| r.2.is_some()).count();
        parts.push(format!(
            "eps={eps}: {violating}/{RUNS} violating, {halted} halted"
        ));
        if violating > MAX_VIOLATING {
            failed.push(eps);
        }
    }
    let detail = parts.join("; ");
    ensure(failed.is_empty(), || {
        format!("{detail} (limit {MAX_VIOLATING})")
    })?;
    Ok(detail)
}

// ---------------------------------------------------------------------------
// 5. Signal detection

fn signal_detection() -> Outcome {
    const SEEDS: u64 = 10;
    const EPS: f64 = 0.055;
    let runs = (0..SEEDS)
        .into_par_iter()
        .map(
            |seed| -> std::result::Result<(f64, Option<usize>, Option<usize>), String> {
                let spec = DatasetSpec::signal(500, 4.0, 50, 0.5, seed);
                let mclt = run_experiment(
                    &spec,
                    &GuardConfig::new(EPS, 0.1, 32, BoundMethod::Mclt, seed),
                )
                .map_err(|e| e.to_string())?;
                let bern = run_experiment(
                    &spec,
                    &GuardConfig::new(EPS, 0.1, 32, BoundMethod::BernsteinSingle, seed),
                )
                .map_err(|e| e.to_string())?;
                Ok((
                    mclt.final_fresh_accuracy,
                    mclt.trace.halt_index,
                    bern.trace.halt_index,
                ))
            },
        )
        .collect::<std::result::Result<Vec<_>, _>>()?;

    // A run that never halts answered every query, so it ranks above any halt.
    let rank = |h: Option<usize>| h.unwrap_or(usize::MAX);
    let wins = runs.iter().filter(|r| rank(r.1) > rank(r.2)).count();
    let mut acc: Vec<f64> = runs.iter().map(|r| r.0).collect();
    acc.sort_by(f64::total_cmp);
    let median = (acc[4] + acc[5]) / 2.0;
    let halts: Vec<String> = runs
        .iter()
        .map(|r| {
            let show = |h: Option<usize>| h.map_or("-".to_string(), |v| v.to_string());
            format!("{}/{}", show(r.1), show(r.2))
        })
        .collect();
    let detail = format!(
        "eps={EPS}: median fresh accuracy {median:.3}; MCLT outlasts BernsteinSingle on {wins}/{SEEDS} (halts mclt/bernstein: {})",
        halts.join(" ")
    );
    ensure(median >= 0.75 && wins >= 8, || detail.clone())?;
    Ok(detail)
}

// ---------------------------------------------------------------------------
// 6. Monotonicity suite

fn run_property<S: Strategy>(
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> std::result::Result<(), TestCaseError>,
) -> std::result::Result<(), String> {
    let mut runner = TestRunner::new(PropConfig {
        cases: 1000,
        failure_persistence: None,
        ..PropConfig::default()
    });
    runner
        .run(&strategy, test)
        .map_err(|e| format!("{name}: {e}"))
}

fn method_strategy() -> impl Strategy<Value = BoundMethod> {
    prop::sample::select(BoundMethod::ALL.to_vec())
}

fn monotonicity_suite() -> Outcome {
    run_property(
        "r_tilde monotone",
        (1usize..20, 1usize..16, 1usize..12, any::<u64>()),
        |(m, l, k, seed)| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let mut state = RademacherState::new(m, l, true, &mut rng).unwrap();
            let mut prev = state.estimate();
            prop_assert_eq!(prev, 0.0);
            for _ in 0..k {
                let f: Vec<f64> = (0..m).map(|_| rng.gen()).collect();
                let r = state.update(&f).unwrap();
                prop_assert!(r >= prev && r <= 1.0);
                prev = r;
            }
            Ok(())
        },
    )?;

    let guard_case = (
        method_strategy(),
        0.02f64..0.5,
        0.01f64..0.5,
        1usize..40,
        5usize..60,
        any::<u64>(),
    );
    run_property(
        "delta' monotone and halt permanent",
        guard_case,
        |(method, eps, delta, l, m, seed)| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let points: Vec<f64> = (0..m).map(|_| rng.gen()).collect();
            let cfg = GuardConfig::new(eps, delta, l, method, seed);
            let mut guard = Guard::new(HoldoutSample::new(points).unwrap(), cfg).unwrap();
            let mut prev = 0.0;
            let mut halted_at = None;
            for q in 1..=25 {
                let shift: f64 = rng.gen();
                let submitted = guard.submit_query(|x| (x + shift).fract());
                if let Some(h) = halted_at {
                    let refused =
                        matches!(submitted, Err(Error::Halted { halt_index }) if halt_index == h);
                    prop_assert!(refused);
                    prop_assert!(guard.is_halted());
                    continue;
                }
                let out = submitted.unwrap();
                prop_assert!(out.delta_prime >= prev);
                prev = out.delta_prime;
                if out.status == QueryStatus::Halted {
                    prop_assert!(out.mean.is_none());
                    halted_at = Some(q);
                } else {
                    prop_assert!(out.mean.is_some());
                }
            }
            prop_assert_eq!(guard.is_halted(), halted_at.is_some());
            prop_assert_eq!(guard.halt_index(), halted_at);
            Ok(())
        },
    )?;

    let bound_case = (
        method_strategy(),
        10usize..20_000,
        1usize..256,
        0.0f64..0.3,
        1usize..4,
        1usize..4,
        0.0f64..0.05,
    );
    run_property(
        "bounds monotone in m, l, slack",
        bound_case,
        |(method, m, l, slack, dm, dl, ds)| {
            let at =
                |m: usize, l: usize, s: f64| method.delta_prime(BoundInputs::new(m, l, s).unwrap());
            let base = at(m, l, slack);
            prop_assert!((0.0..=1.0).contains(&base));
            let tol = 1e-9 * base.max(f64::MIN_POSITIVE);
            prop_assert!(at(m * dm + 1, l, slack) <= base + tol);
            prop_assert!(at(m, l * dl + 1, slack) <= base + tol);
            prop_assert!(at(m, l, (slack + ds).min(1.0)) <= base + tol);
            Ok(())
        },
    )?;

    run_property(
        "phi symmetry and monotonicity",
        (-40.0f64..40.0, 0.0f64..5.0),
        |(x, dx)| {
            let p = normal_cdf(x).unwrap();
            let q = normal_cdf(-x).unwrap();
            prop_assert!((p + q - 1.0).abs() <= 1e-15);
            prop_assert!(normal_cdf(x + dx).unwrap() >= p);
            Ok(())
        },
    )?;

    Ok("4 properties x 1000 cases: r_tilde, delta'/halt, bounds(m, l, slack), phi".into())
}

// ---------------------------------------------------------------------------
// 7. Thresholdout comparison

fn thresholdout_comparison() -> Outcome {
    let p = ThresholdoutParams::WORKED_EXAMPLE;
    let n = min_holdout_size(&p).map_err(|e| e.to_string())?;
    let expected = 96.0 * 4.0 * 400f64.ln() * 16.0;
    ensure(rel(n, expected) <= 1e-9, || {
        format!("formula gives {n}, expected {expected}")
    })?;
    ensure((n - 3.68e4).abs() / 3.68e4 < 0.01, || {
        format!("{n} is not about 3.68e4")
    })?;

    let report = comparison_report(&p, 4000).map_err(|e| e.to_string())?;
    ensure(
        report.printed_n == Some(PRINTED_EXAMPLE_N) && PRINTED_EXAMPLE_N == 3.7e6,
        || "report lacks the printed 3.7e6".into(),
    )?;
    ensure(report.note.is_some_and(|s| !s.is_empty()), || {
        "report lacks the discrepancy note".into()
    })?;

    let small = ThresholdoutParams { epsilon: 0.05, ..p };
    let n_small = min_holdout_size(&small).map_err(|e| e.to_string())?;
    ensure((n_small - 3.68e6).abs() / 3.68e6 < 0.01, || {
        format!("eps=0.05 gives {n_small}")
    })?;
    ensure(
        (n_small - PRINTED_EXAMPLE_N).abs() / PRINTED_EXAMPLE_N < 0.01,
        || format!("eps=0.05 gives {n_small}, far from the printed figure"),
    )?;
    Ok(format!(
        "n(eps=0.5) = {n:.1}; printed 3.7e6 carried with note; n(eps=0.05) = {n_small:.4e}"
    ))
}

// ---------------------------------------------------------------------------
// 8. Determinism

fn snapshot(dir: &Path) -> std::result::Result<BTreeMap<String, Vec<u8>>, String> {
    let mut files = BTreeMap::new();
    for entry in fs::read_dir(dir).map_err(|e| e.to_string())? {
        let entry = entry.map_err(|e| e.to_string())?;
        let name = entry.file_name().to_string_lossy().into_owned();
        files.insert(name, fs::read(entry.path()).map_err(|e| e.to_string())?);
    }
    Ok(files)
}

fn run_twice(config_json: &str) -> std::result::Result<(usize, usize), String> {
    let config = RunConfig::from_json(config_json).map_err(|e| e.to_string())?;
    let out: PathBuf = config.output_dir.clone();
    run_configured(&config).map_err(|e| e.to_string())?;
    let first = snapshot(&out)?;
    fs::remove_dir_all(&out).map_err(|e| e.to_string())?;
    run_configured(&config).map_err(|e| e.to_string())?;
    let second = snapshot(&out)?;
    ensure(first.keys().eq(second.keys()), || {
        "runs wrote different file sets".into()
    })?;
    for (name, bytes) in &first {
        ensure(second[name] == *bytes, || {
            format!("{name} differs between runs")
        })?;
    }
    Ok((first.len(), first.values().map(Vec::len).sum()))
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = tmp.path().join("out").to_string_lossy().replace('\\', "/");
    let full = format!(
        r#"{{
            "experiment": {{"d": 500, "variance": 1.0, "seed": 11}},
            "guard": {{"epsilon": 0.1, "delta": 0.1, "l": 32, "method": "mclt", "seed": 11}},
            "epsilon_list": [0.05, 0.1, 0.2],
            "output_dir": "{out}"
        }}"#
    );
    let (files, bytes) = run_twice(&full)?;
    let out_small = tmp
        .path()
        .join("small")
        .to_string_lossy()
        .replace('\\', "/");
    let small = format!(
        r#"{{
            "experiment": {{"m_train": 300, "m_holdout": 300, "m_fresh": 300, "d": 20,
                            "variance": 4.0, "n_biased": 5, "bias": 0.5, "seed": 3}},
            "guard": {{"epsilon": 0.1, "delta": 0.1, "l": 8, "method": "bernstein_single", "seed": 3}},
            "emit_dataset_dump": true,
            "output_dir": "{out_small}"
        }}"#
    );
    let (files_small, bytes_small) = run_twice(&small)?;
    Ok(format!(
        "byte-identical reruns: {files} files / {bytes} bytes, and {files_small} files / {bytes_small} bytes with dataset dump"
    ))
}

// ---------------------------------------------------------------------------

fn main() {
    let args: Vec<String> = std::env::args().collect();
    if args.iter().any(|a| a == "--list") {
        return;
    }
    let criteria: [Criterion; 8] = [
        ("oracle equivalence", oracle_equivalence),
        ("bound formula fidelity", bound_fidelity),
        ("estimate-error ordering", estimate_error_ordering),
        ("guard validity on no-signal data", guard_validity),
        ("signal detection", signal_detection),
        ("monotonicity suite", monotonicity_suite),
        ("thresholdout comparison", thresholdout_comparison),
        ("determinism", determinism),
    ];

    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {} ({name}) [{secs:.1}s]: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {} ({name}) [{secs:.1}s]: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
