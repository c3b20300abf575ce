//! Residual functionals and profile-exponent calibration.
//!
//! Subdiffusion: the squared residual of the exact self-similar RL
//! derivative against a_μ ∂²Θ/∂x², integrated over the layer, minimized in n.
//! Drift: the approximate residual, plus grid searches of fixed and
//! variable-order exponents against the exact M-Wright profile.

use std::cell::RefCell;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fracops::rl_derivative_selfsimilar;
use crate::minimize::minimize_interior;
use crate::oracle::{ExactProfile, MAX_ETA};
use crate::profiles::{
    front_factor, EvalMode, ExponentSpec, FractionalOrder, FrontMode, ProblemKind, ProblemSpec, SimilarityProfile,
};
use crate::quad::{integrate, QuadOptions};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CalibrationResult {
    pub mu: FractionalOrder,
    pub optimal_n: f64,
    pub objective_value: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
}

/// Similarity-reduced subdiffusion residual R(η); the physical residual is
/// t^{-μ} R(η).
pub fn residual_sub(mu: FractionalOrder, n: f64, eta: f64) -> Result<f64> {
    if !(n > 1.0) {
        return Err(Error::InvalidExponent(format!("subdiffusion residual needs n > 1, got {n}")));
    }
    let lambda = front_factor(ProblemKind::Subdiffusion, mu, n)?;
    let d = rl_derivative_selfsimilar(ProblemKind::Subdiffusion, mu, n, lambda, eta)?;
    let curvature = n * (n - 1.0) / (lambda * lambda) * (1.0 - eta / lambda).powf(n - 2.0);
    Ok(d.value_coefficient - curvature)
}

/// Upper end of the admissible exponent range of the subdiffusion functional.
pub const SUB_MAX_EXPONENT: f64 = 5.0;

fn outer_options() -> QuadOptions {
    QuadOptions { abs_tol: 1e-13, rel_tol: 1e-8, max_intervals: 1000 }
}

/// E(n) = ∫_0^λ R(η)² dη.
///
/// The curvature term behaves like (1 - η/λ)^{n-2} at the front, so the
/// integral is +∞ for n ≤ 3/2.
pub fn error_functional_sub(mu: FractionalOrder, n: f64) -> Result<f64> {
    error_functional_sub_with(mu, n, &outer_options())
}

pub fn error_functional_sub_with(mu: FractionalOrder, n: f64, opts: &QuadOptions) -> Result<f64> {
    if !(n > 1.0 && n <= SUB_MAX_EXPONENT) {
        return Err(Error::InvalidExponent(format!("subdiffusion functional needs n in (1, 5], got {n}")));
    }
    if n <= 1.5 {
        return Ok(f64::INFINITY);
    }
    let lambda = front_factor(ProblemKind::Subdiffusion, mu, n)?;
    // η = λ(1 - w^k) with k(2n - 3) = 1 cancels the front singularity of R².
    let k = if n < 2.0 { 1.0 / (2.0 * n - 3.0) } else { 1.0 };
    let failure = RefCell::new(None);
    let r = integrate(
        |w| {
            let gap = w.powf(k);
            let eta = (lambda * (1.0 - gap)).max(0.0);
            let jac = lambda * k * w.powf(k - 1.0);
            match rl_derivative_selfsimilar(ProblemKind::Subdiffusion, mu, n, lambda, eta) {
                Ok(d) => {
                    let curvature = n * (n - 1.0) / (lambda * lambda) * gap.powf(n - 2.0);
                    let dv = d.value_coefficient;
                    if n < 2.0 {
                        // Expanded so the singular square times the Jacobian is the constant c²λk.
                        let c = n * (n - 1.0) / (lambda * lambda);
                        dv * dv * jac - 2.0 * dv * curvature * jac + c * c * lambda * k
                    } else {
                        (dv - curvature).powi(2) * jac
                    }
                }
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    0.0
                }
            }
        },
        0.0,
        1.0,
        opts,
    )?;
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(r.value),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationOptions {
    pub bracket: (f64, f64),
    pub scan_points: usize,
    pub x_tol: f64,
    /// Positive factor applied to the objective; the minimizer must not move.
    pub objective_scale: f64,
    pub quad: QuadOptions,
}

impl Default for CalibrationOptions {
    fn default() -> Self {
        Self { bracket: (1.05, 3.0), scan_points: 40, x_tol: 1e-4, objective_scale: 1.0, quad: outer_options() }
    }
}

/// Interior minimizer of the subdiffusion functional over [1.05, 3].
pub fn optimize_exponent_sub(mu: FractionalOrder) -> Result<CalibrationResult> {
    optimize_exponent_sub_with(mu, &CalibrationOptions::default())
}

pub fn optimize_exponent_sub_with(mu: FractionalOrder, opts: &CalibrationOptions) -> Result<CalibrationResult> {
    let (lo, hi) = opts.bracket;
    if !(lo > 1.0 && hi > lo && hi <= SUB_MAX_EXPONENT) || !(opts.objective_scale > 0.0) {
        return Err(Error::InvalidParameter(format!("invalid calibration bracket [{lo}, {hi}]")));
    }
    let min = minimize_interior(
        |n| Ok(opts.objective_scale * error_functional_sub_with(mu, n, &opts.quad)?),
        lo,
        hi,
        opts.scan_points,
        opts.x_tol,
    )?;
    Ok(CalibrationResult {
        mu,
        optimal_n: min.x,
        objective_value: min.value / opts.objective_scale,
        bracket: min.bracket,
        iterations: min.iterations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DriftResidual {
    /// (n/λ)[1 - (1 - η/λ)^{n-1}], from the integrated FT-HBI value.
    #[default]
    Approximate,
    /// D(η) - (n/λ)(1 - η/λ)^{n-1} with the exact RL derivative.
    ExactRl,
}

/// Similarity-reduced drift residual; the physical residual is t^{-μ} R(η).
pub fn residual_drift(mu: FractionalOrder, n: f64, eta: f64, variant: DriftResidual) -> Result<f64> {
    let lambda = front_factor(ProblemKind::Drift, mu, n)?;
    if !(eta >= 0.0) || eta > lambda {
        return Err(Error::Domain { what: "residual_drift: eta must lie in [0, λ]", value: eta });
    }
    let slope = n / lambda * (1.0 - eta / lambda).powf(n - 1.0);
    match variant {
        DriftResidual::Approximate => Ok(n / lambda - slope),
        DriftResidual::ExactRl => {
            let d = rl_derivative_selfsimilar(ProblemKind::Drift, mu, n, lambda, eta)?;
            Ok(d.value_coefficient - slope)
        }
    }
}

/// Drift residual at a physical point (x, t) inside the layer.
pub fn physical_residual_drift(spec: &ProblemSpec, n: f64, x: f64, t: f64, variant: DriftResidual) -> Result<f64> {
    if spec.kind() != ProblemKind::Drift {
        return Err(Error::InvalidParameter("drift residual requested for a subdiffusion problem".into()));
    }
    let eta = crate::profiles::similarity_eta(spec, x, t)?;
    Ok(residual_drift(spec.mu(), n, eta, variant)? * t.powf(-spec.mu().value()))
}

/// ∫_0^λ R_p(η)² dη for the approximate drift residual.
pub fn error_functional_drift(mu: FractionalOrder, n: f64) -> Result<f64> {
    let lambda = front_factor(ProblemKind::Drift, mu, n)?;
    if n == 1.0 {
        return Ok(0.0);
    }
    let r = integrate(
        |eta| {
            let b = (1.0 - eta / lambda).max(0.0);
            let v = n / lambda * (1.0 - b.powf(n - 1.0));
            v * v
        },
        0.0,
        lambda,
        &QuadOptions::default(),
    )?;
    Ok(r.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FitMetric {
    #[default]
    MaxAbs,
    Rms,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BestFixedExponent {
    pub mu: FractionalOrder,
    pub n: f64,
    pub metric: FitMetric,
    pub metric_value: f64,
    pub eta_range: (f64, f64),
}

pub const DRIFT_N_GRID: (f64, f64, f64) = (1.0, 3.0, 0.05);
pub const DRIFT_ETA_POINTS: usize = 200;

/// Best constant exponent on {1.00, 1.05, …, 3.00} against the exact profile.
pub fn best_fixed_exponent_drift(
    mu: FractionalOrder,
    eta_lo: f64,
    eta_hi: f64,
    metric: FitMetric,
) -> Result<BestFixedExponent> {
    best_fixed_exponent_drift_with(mu, eta_lo, eta_hi, metric, DRIFT_ETA_POINTS)
}

pub fn best_fixed_exponent_drift_with(
    mu: FractionalOrder,
    eta_lo: f64,
    eta_hi: f64,
    metric: FitMetric,
    points: usize,
) -> Result<BestFixedExponent> {
    if !(eta_lo >= 0.0 && eta_hi > eta_lo && eta_hi <= MAX_ETA) || points < 2 {
        return Err(Error::InvalidParameter(format!("invalid eta range [{eta_lo}, {eta_hi}]")));
    }
    let exact = ExactProfile::new(mu);
    let grid = uniform_grid(eta_lo, eta_hi, points);
    let reference = grid.iter().map(|&e| exact.eval(e)).collect::<Result<Vec<_>>>()?;

    let (n_lo, n_hi, n_step) = DRIFT_N_GRID;
    let steps = ((n_hi - n_lo) / n_step).round() as usize;
    let mut best: Option<(f64, f64)> = None;
    for k in 0..=steps {
        // Exact decimal grid values: (100 + 5k)/100.
        let n = (n_lo * 100.0 + (n_step * 100.0) * k as f64) / 100.0;
        let profile =
            SimilarityProfile::for_problem(ProblemKind::Drift, mu, ExponentSpec::fixed(n)?, FrontMode::Recompute)?;
        let mut max_abs: f64 = 0.0;
        let mut sum_sq = 0.0;
        for (&eta, &ex) in grid.iter().zip(&reference) {
            let approx = profile.eval(eta, EvalMode::Clamped)?.expect("clamped profiles are always defined");
            let d = (approx - ex).abs();
            max_abs = max_abs.max(d);
            sum_sq += d * d;
        }
        let value = match metric {
            FitMetric::MaxAbs => max_abs,
            FitMetric::Rms => (sum_sq / grid.len() as f64).sqrt(),
        };
        // Strict comparison keeps the smaller n on ties.
        if best.is_none_or(|(_, v)| value < v) {
            best = Some((n, value));
        }
    }
    let (n, metric_value) = best.expect("exponent grid is non-empty");
    Ok(BestFixedExponent { mu, n, metric, metric_value, eta_range: (eta_lo, eta_hi) })
}

/// Inclusive uniform grid of `points` values.
pub fn uniform_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (points - 1) as f64;
    (0..points).map(|i| if i + 1 == points { hi } else { lo + step * i as f64 }).collect()
}

/// Pointwise approximate-vs-exact comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub eta_grid: Vec<f64>,
    pub approx: Vec<f64>,
    pub exact: Vec<f64>,
    pub max_abs: f64,
    pub mean_abs: f64,
    pub rms: f64,
    /// 100 · max_abs; profiles live in [0, 1].
    pub max_abs_percent: f64,
    /// Grid points skipped because the exponent rule is undefined there.
    pub dropped: Vec<f64>,
}

impl ErrorReport {
    pub fn from_values(eta_grid: Vec<f64>, approx: Vec<f64>, exact: Vec<f64>, dropped: Vec<f64>) -> Self {
        assert_eq!(eta_grid.len(), approx.len());
        assert_eq!(eta_grid.len(), exact.len());
        let count = eta_grid.len();
        let mut max_abs: f64 = 0.0;
        let mut sum_abs = 0.0;
        let mut sum_sq = 0.0;
        for (a, e) in approx.iter().zip(&exact) {
            let d = (a - e).abs();
            max_abs = max_abs.max(d);
            sum_abs += d;
            sum_sq += d * d;
        }
        let (mean_abs, rms) =
            if count == 0 { (0.0, 0.0) } else { (sum_abs / count as f64, (sum_sq / count as f64).sqrt()) };
        Self { eta_grid, approx, exact, max_abs, mean_abs, rms, max_abs_percent: 100.0 * max_abs, dropped }
    }
}

fn profile_report(mu: FractionalOrder, profile: &SimilarityProfile, eta_grid: &[f64]) -> Result<ErrorReport> {
    let exact = ExactProfile::new(mu);
    let mut etas = Vec::with_capacity(eta_grid.len());
    let mut approx = Vec::with_capacity(eta_grid.len());
    let mut reference = Vec::with_capacity(eta_grid.len());
    let mut dropped = Vec::new();
    for &eta in eta_grid {
        match profile.eval(eta, EvalMode::Clamped) {
            Ok(v) => {
                etas.push(eta);
                approx.push(v.expect("clamped profiles are always defined"));
                reference.push(exact.eval(eta)?);
            }
            Err(Error::Domain { .. }) => dropped.push(eta),
            Err(e) => return Err(e),
        }
    }
    Ok(ErrorReport::from_values(etas, approx, reference, dropped))
}

/// Variable-order profile against the exact drift solution.
pub fn variable_order_report(mu: FractionalOrder, rule: ExponentSpec, eta_grid: &[f64]) -> Result<ErrorReport> {
    variable_order_report_with(mu, rule, eta_grid, FrontMode::Recompute)
}

pub fn variable_order_report_with(
    mu: FractionalOrder,
    rule: ExponentSpec,
    eta_grid: &[f64],
    front: FrontMode,
) -> Result<ErrorReport> {
    if !rule.is_variable() {
        return Err(Error::InvalidExponent("variable_order_report needs a variable-order rule".into()));
    }
    let profile = SimilarityProfile::for_problem(ProblemKind::Drift, mu, rule, front)?;
    profile_report(mu, &profile, eta_grid)
}

/// Fixed-exponent drift profile against the exact solution.
pub fn fixed_exponent_report(mu: FractionalOrder, n: f64, eta_grid: &[f64]) -> Result<ErrorReport> {
    let profile =
        SimilarityProfile::for_problem(ProblemKind::Drift, mu, ExponentSpec::fixed(n)?, FrontMode::Recompute)?;
    profile_report(mu, &profile, eta_grid)
}
