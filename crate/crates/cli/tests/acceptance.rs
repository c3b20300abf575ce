//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use fthbi::calibrate::{
    best_fixed_exponent_drift, optimize_exponent_sub, optimize_exponent_sub_with, residual_drift, CalibrationOptions,
    DriftResidual, FitMetric,
};
use fthbi::fracops::{balance_residual, rl_derivative_power, rl_derivative_selfsimilar, rl_power_rule};
use fthbi::oracle::ExactProfile;
use fthbi::profiles::{eval_parabolic, front_factor, j_factor_subdiffusion, penetration_depth};
use fthbi::report::{self, Cell, Table, TABLE2_ETAS, TABLE3_ETAS};
use fthbi::specfun::{airy_ai, gamma, mwright, MWrightOrder};
use fthbi::{EvalMode, FractionalOrder, ProblemKind, ProblemSpec};

const TABLE1: &str = include_str!("fixtures/table1.csv");
const TABLE2: &str = include_str!("fixtures/table2.csv");
const TABLE3: &str = include_str!("fixtures/table3.csv");

struct Outcome {
    pass: bool,
    detail: String,
}

fn mu(v: f64) -> FractionalOrder {
    FractionalOrder::new(v).unwrap()
}

fn fixture(text: &str) -> Table {
    Table::from_csv(text).expect("fixture parses")
}

fn exponent_of(label: &str) -> f64 {
    label.trim_start_matches("n=").parse().unwrap()
}

/// Comparison of the approximate columns of a drift table with the published values.
struct ColumnCheck {
    max_dev: f64,
    worst: (f64, f64),
    /// Published cells where the Raw profile is undefined (non-integer power of a negative base).
    undefined: Vec<(f64, f64)>,
    /// Undefined cells that are not past the front, which would be a bug.
    unexpected: Vec<(f64, f64)>,
}

fn compare_columns(published: &Table, computed: &Table, lambdas: &dyn Fn(f64) -> f64) -> ColumnCheck {
    let mut check = ColumnCheck { max_dev: 0.0, worst: (0.0, 0.0), undefined: Vec::new(), unexpected: Vec::new() };
    assert_eq!(published.columns, computed.columns);
    for (prow, crow) in published.rows.iter().zip(&computed.rows) {
        let eta = prow[0].as_f64().unwrap();
        assert!((crow[0].as_f64().unwrap() - eta).abs() < 1e-12);
        for (k, label) in published.columns.iter().enumerate().skip(2) {
            let Some(expected) = prow[k].as_f64() else { continue };
            let n = exponent_of(label);
            match &crow[k] {
                Cell::Num(v) => {
                    let d = (v - expected).abs();
                    if d > check.max_dev {
                        check.max_dev = d;
                        check.worst = (eta, n);
                    }
                }
                _ => {
                    if eta > lambdas(n) && (n - n.round()).abs() > 1e-9 {
                        check.undefined.push((eta, n));
                    } else {
                        check.unexpected.push((eta, n));
                    }
                }
            }
        }
    }
    check
}

fn exact_column_deviation(published: &Table, reference: impl Fn(f64) -> f64, skip: &[f64]) -> f64 {
    published
        .rows
        .iter()
        .filter(|r| !skip.contains(&r[0].as_f64().unwrap()))
        .map(|r| (reference(r[0].as_f64().unwrap()) - r[1].as_f64().unwrap()).abs())
        .fold(0.0, f64::max)
}

fn cells(list: &[(f64, f64)]) -> String {
    list.iter().map(|(e, n)| format!("({e},{n})")).collect::<Vec<_>>().join(" ")
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let computed = report::table2().unwrap();
    let elapsed = start.elapsed();
    let published = fixture(TABLE2);
    let lambda = |n: f64| front_factor(ProblemKind::Drift, mu(0.5), n).unwrap();
    let check = compare_columns(&published, &computed, &lambda);
    let exact_dev = exact_column_deviation(&published, |e| (-e * e / 4.0).exp(), &[6.0]);
    let computed_exact_dev = computed
        .rows
        .iter()
        .map(|r| (r[1].as_f64().unwrap() - (-r[0].as_f64().unwrap().powi(2) / 4.0).exp()).abs())
        .fold(0.0, f64::max);
    let pass = check.max_dev <= 2e-3
        && check.unexpected.is_empty()
        && exact_dev <= 5e-4
        && computed_exact_dev <= 1e-12
        && elapsed < Duration::from_secs(1);
    Outcome {
        pass,
        detail: format!(
            "max |Raw - published| = {:.2e} at (eta={}, n={}) (bound 2e-3); exact column max dev {:.2e} excl. eta=6.0 (bound 5e-4); \
             {} published cells past the front with non-integer n are undefined in Raw mode: {}; runtime {:?}",
            check.max_dev,
            check.worst.0,
            check.worst.1,
            exact_dev,
            check.undefined.len(),
            cells(&check.undefined),
            elapsed
        ),
    }
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let computed = report::table3().unwrap();
    let g17 = gamma(1.7).unwrap();
    let diagnostic = report::table3_with_front_gamma(g17).unwrap();
    let elapsed = start.elapsed();
    let published = fixture(TABLE3);
    let g53 = gamma(5.0 / 3.0).unwrap();
    let exact_check = compare_columns(&published, &computed, &|n| n * (n + 1.0) * g53);
    let diag_check = compare_columns(&published, &diagnostic, &|n| n * (n + 1.0) * g17);
    let third = ExactProfile::new(mu(1.0 / 3.0));
    let airy = |e: f64| airy_ai(e / 3f64.cbrt()).unwrap() / airy_ai(0.0).unwrap();
    let exact_dev = exact_column_deviation(&published, airy, &[]);
    let computed_exact_dev =
        computed.rows.iter().map(|r| (r[1].as_f64().unwrap() - airy(r[0].as_f64().unwrap())).abs()).fold(0.0, f64::max);
    let series_dev = TABLE3_ETAS.iter().map(|&e| (third.eval_series(e).unwrap() - airy(e)).abs()).fold(0.0, f64::max);
    let pass = exact_check.max_dev <= 3e-3
        && diag_check.max_dev <= 1e-3
        && exact_check.unexpected.is_empty()
        && diag_check.unexpected.is_empty()
        && exact_dev <= 5e-4
        && computed_exact_dev <= 1e-9
        && series_dev <= 1e-9
        && elapsed < Duration::from_secs(1);
    Outcome {
        pass,
        detail: format!(
            "Gamma(5/3): max dev {:.2e} at (eta={}, n={}) (bound 3e-3); Gamma(1.7): max dev {:.2e} at (eta={}, n={}) (bound 1e-3); \
             exact column max dev {:.2e} (bound 5e-4); undefined past-front cells: {}; runtime {:?}",
            exact_check.max_dev,
            exact_check.worst.0,
            exact_check.worst.1,
            diag_check.max_dev,
            diag_check.worst.0,
            diag_check.worst.1,
            exact_dev,
            cells(&exact_check.undefined),
            elapsed
        ),
    }
}

fn criterion_3() -> Outcome {
    let published = fixture(TABLE1);
    let mut worst: f64 = 0.0;
    for row in &published.rows {
        let m = row[0].as_f64().unwrap();
        if (m - 0.4).abs() < 1e-12 {
            continue;
        }
        let direct = (gamma(2.0 - m).unwrap() / (2.0 - m)).sqrt();
        assert!((direct - j_factor_subdiffusion(mu(m))).abs() < 1e-14);
        worst = worst.max((direct - row[2].as_f64().unwrap()).abs());
    }
    Outcome { pass: worst <= 1e-3, detail: format!("max |j_mu - published| = {worst:.2e} excl. mu=0.4 (bound 1e-3)") }
}

fn criterion_4() -> Outcome {
    let published = fixture(TABLE1);
    let start = Instant::now();
    let mut pass = true;
    let mut found = Vec::new();
    let mut previous: Option<f64> = None;
    for row in &published.rows {
        let m = row[0].as_f64().unwrap();
        if (m - 0.4).abs() < 1e-12 {
            continue;
        }
        let expected = row[1].as_f64().unwrap();
        match optimize_exponent_sub(mu(m)) {
            Ok(r) => {
                let n = r.optimal_n;
                let ok = (n - expected).abs() <= 0.15 && (1.3..=1.6).contains(&n) && previous.is_none_or(|p| n <= p);
                pass &= ok;
                previous = Some(n);
                found.push(format!("mu={m}: {n:.4} (published {expected})"));
            }
            Err(e) => {
                pass = false;
                found.push(format!("mu={m}: {e} (published {expected})"));
            }
        }
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(120);
    Outcome { pass, detail: format!("{}; runtime {:?}", found.join("; "), elapsed) }
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let half = best_fixed_exponent_drift(mu(0.5), 2.25, 5.0, FitMetric::MaxAbs).unwrap();
    let third = best_fixed_exponent_drift(mu(1.0 / 3.0), 0.3, 1.25, FitMetric::MaxAbs).unwrap();
    let max_abs = |m: f64, etas: &[f64]| {
        let exact = ExactProfile::new(mu(m));
        let lambda = front_factor(ProblemKind::Drift, mu(m), 2.25).unwrap();
        etas.iter()
            .map(|&e| (eval_parabolic(lambda, 2.25, e, EvalMode::Clamped).unwrap() - exact.eval(e).unwrap()).abs())
            .fold(0.0, f64::max)
    };
    let err_half = max_abs(0.5, &TABLE2_ETAS);
    let err_third = max_abs(1.0 / 3.0, &TABLE3_ETAS);
    let elapsed = start.elapsed();
    let fit_ok = (1.5..=2.0).contains(&half.n) && (1.0..=1.5).contains(&third.n);
    let err_ok = err_half <= 0.055 && err_third <= 0.055;
    Outcome {
        pass: fit_ok && err_ok && elapsed < Duration::from_secs(10),
        detail: format!(
            "best n (mu=1/2, [2.25,5]) = {} (want [1.5,2.0]); best n (mu=1/3, [0.3,1.25]) = {} (want [1.0,1.5]); \
             max-abs error at n=2.25 over the table grid: {:.4} (mu=1/2), {:.4} (mu=1/3) (bound 0.055); runtime {:?}",
            half.n, third.n, err_half, err_third, elapsed
        ),
    }
}

fn criterion_6() -> Outcome {
    let half = MWrightOrder::new(0.5).unwrap();
    let third = MWrightOrder::new(1.0 / 3.0).unwrap();
    let c = 3f64.powf(2.0 / 3.0);
    let mut dev_half: f64 = 0.0;
    let mut dev_third: f64 = 0.0;
    for i in 0..=500 {
        let z = i as f64 * 0.01;
        dev_half = dev_half.max((std::f64::consts::PI.sqrt() * mwright(half, z).unwrap() - (-z * z / 4.0).exp()).abs());
        dev_third = dev_third.max((mwright(third, z).unwrap() - c * airy_ai(z / 3f64.cbrt()).unwrap()).abs());
    }
    Outcome {
        pass: dev_half <= 1e-10 && dev_third <= 1e-9,
        detail: format!("M_1/2 sup dev {dev_half:.2e} (bound 1e-10); M_1/3 sup dev {dev_third:.2e} (bound 1e-9)"),
    }
}

fn criterion_7() -> Outcome {
    let mut failures = Vec::new();
    let mut record = |name: &str, ok: bool, what: String| {
        if !ok {
            failures.push(format!("{name}: {what}"));
        }
    };

    let mut worst: f64 = 0.0;
    for m in [0.25, 0.5, 0.75] {
        for beta in [0.5, 1.0, 2.5] {
            let num = rl_derivative_power(mu(m), beta, 1.5).unwrap();
            let exact = rl_power_rule(mu(m), beta, 1.5).unwrap();
            worst = worst.max(((num - exact) / exact).abs());
        }
    }
    record("power rule", worst <= 1e-6, format!("{worst:.2e}"));

    let mut worst: f64 = 0.0;
    for kind in [ProblemKind::Subdiffusion, ProblemKind::Drift] {
        for m in [0.3, 0.5, 0.8] {
            let spec = ProblemSpec::new(kind, mu(m), 1.0).unwrap();
            let p = kind.time_exponent(spec.mu());
            for n in [1.0, 1.5, 2.5] {
                let lambda = front_factor(kind, mu(m), n).unwrap();
                for frac in [0.2, 0.6, 0.9] {
                    let eta = frac * lambda;
                    let d = rl_derivative_selfsimilar(kind, mu(m), n, lambda, eta).unwrap().value_coefficient;
                    for t in [1.0, 4.0] {
                        let x = eta * spec.length_scale(t);
                        let direct = common::time_domain_rl(m, gamma(1.0 - m).unwrap(), n, lambda, p, x, t) * t.powf(m);
                        worst = worst.max((direct - d).abs());
                    }
                }
            }
        }
    }
    record("self-similarity", worst <= 1e-5, format!("{worst:.2e}"));

    let mut worst: f64 = 0.0;
    for kind in [ProblemKind::Subdiffusion, ProblemKind::Drift] {
        for m in [0.1, 0.5, 0.9] {
            for n in [1.0, 1.5, 3.0] {
                for t in [0.5, 1.0, 10.0] {
                    let spec = ProblemSpec::new(kind, mu(m), 2.0).unwrap();
                    worst = worst.max(balance_residual(&spec, n, t).unwrap().abs());
                }
            }
        }
    }
    record("balance closure", worst <= 1e-8, format!("{worst:.2e}"));

    let mut front_ok = true;
    for kind in [ProblemKind::Subdiffusion, ProblemKind::Drift] {
        for m in [0.2, 0.5, 0.8] {
            for n in [1.0, 1.5, 2.5] {
                let lambda = front_factor(kind, mu(m), n).unwrap();
                front_ok &= eval_parabolic(lambda, n, 0.0, EvalMode::Clamped) == Some(1.0);
                front_ok &= eval_parabolic(lambda, n, lambda, EvalMode::Clamped) == Some(0.0);
                if n > 1.0 {
                    let h = 1e-9 * lambda;
                    let slope = eval_parabolic(lambda, n, lambda - h, EvalMode::Clamped).unwrap() / h;
                    front_ok &= slope < 1e-3;
                }
            }
        }
    }
    record("front conditions", front_ok, String::new());

    let mut worst: f64 = 0.0;
    for kind in [ProblemKind::Subdiffusion, ProblemKind::Drift] {
        for m in [0.1, 0.5, 0.9] {
            let spec = ProblemSpec::new(kind, mu(m), 1.7).unwrap();
            let (t1, t2) = (0.3, 30.0);
            let slope = (penetration_depth(&spec, 1.5, t2).unwrap() / penetration_depth(&spec, 1.5, t1).unwrap()).ln()
                / (t2 / t1).ln();
            let expected = match kind {
                ProblemKind::Subdiffusion => m / 2.0,
                ProblemKind::Drift => m,
            };
            worst = worst.max((slope - expected).abs());
        }
    }
    record("depth slopes", worst <= 1e-10, format!("{worst:.2e}"));

    let mut min_value = f64::INFINITY;
    for m in [1.0 / 3.0, 0.5, 0.8] {
        for n in [1.0, 1.25, 1.75, 2.5] {
            let lambda = front_factor(ProblemKind::Drift, mu(m), n).unwrap();
            for i in 0..1000 {
                let eta = lambda * i as f64 / 999.0;
                min_value = min_value.min(residual_drift(mu(m), n, eta, DriftResidual::Approximate).unwrap());
            }
        }
    }
    record("drift residual positivity", min_value >= 0.0, format!("min {min_value:e}"));

    let base = optimize_exponent_sub(mu(0.9));
    let scaled =
        optimize_exponent_sub_with(mu(0.9), &CalibrationOptions { objective_scale: 7.0, ..Default::default() });
    let mut halved = CalibrationOptions::default();
    halved.quad.abs_tol /= 2.0;
    halved.quad.rel_tol /= 2.0;
    let refined = optimize_exponent_sub_with(mu(0.9), &halved);
    match (base, scaled, refined) {
        (Ok(a), Ok(b), Ok(c)) => record(
            "argmin invariance",
            (a.optimal_n - b.optimal_n).abs() <= 1e-3 && (a.optimal_n - c.optimal_n).abs() <= 1e-3,
            format!("{} / {} / {}", a.optimal_n, b.optimal_n, c.optimal_n),
        ),
        (a, b, c) => record("argmin invariance", false, format!("{a:?} {b:?} {c:?}")),
    }

    let pass = failures.is_empty();
    Outcome {
        pass,
        detail: if pass {
            "power rule, self-similarity, balance closure, front conditions, depth slopes, drift residual positivity, argmin invariance".into()
        } else {
            failures.join("; ")
        },
    }
}

fn criterion_8() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_fthbi"))
            .args(["table", "2", "--format", "csv", "--out"])
            .arg(&path)
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(path).unwrap()
    };
    let a = run("first.csv");
    let b = run("second.csv");
    Outcome { pass: !a.is_empty() && a == b, detail: format!("{} bytes, identical: {}", a.len(), a == b) }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("Table 2 golden values", criterion_1),
        ("Table 3 golden values", criterion_2),
        ("Table 1 j_mu column", criterion_3),
        ("Table 1 n_s column", criterion_4),
        ("drift best-fit exponents", criterion_5),
        ("special-function identities", criterion_6),
        ("property suite", criterion_7),
        ("CSV determinism", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = check();
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!("acceptance {} [{tag}] {name}: {}", i + 1, outcome.detail);
        failed += usize::from(!outcome.pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
