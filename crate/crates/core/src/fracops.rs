//! Riemann–Liouville time derivatives: a validated quadrature route for
//! general functions, the self-similar reduction of the parabolic profile,
//! and the closed-form integrated FT-HBI value.
//!
//! Under δ(τ) = λ L τ^p the profile at fixed x is
//! Θ(x, τ) = (1 - (η/λ) s^{-p})₊^n with s = τ/t, so the memory integral
//! collapses to t^{1-μ} G(η) and the derivative to t^{-μ} D(η).

use crate::error::{Error, Result};
use crate::profiles::{factor_n, front_factor, FractionalOrder, ProblemKind, ProblemSpec};
use crate::quad::{integrate, QuadOptions};
use crate::specfun::gamma;

/// Relative step of the local power-law fit in [`rl_derivative_local_power`].
const POWER_FIT_STEP: f64 = 1e-3;

/// ∫_0^t f(u) (t-u)^{-μ} du with the kernel singularity removed by
/// t - u = t v^{1/(1-μ)}.
pub fn memory_integral<F: Fn(f64) -> f64>(f: &F, mu: FractionalOrder, t: f64, opts: &QuadOptions) -> Result<f64> {
    let m = mu.value();
    let expo = 1.0 / (1.0 - m);
    let r = integrate(|v| f(t * (1.0 - v.powf(expo))), 0.0, 1.0, opts)?;
    Ok(t.powf(1.0 - m) / (1.0 - m) * r.value)
}

/// RL derivative (1/Γ(1-μ)) d/dt ∫_0^t f(u)(t-u)^{-μ} du for functions whose
/// memory integral behaves locally like a power of t.
///
/// The outer derivative comes from fitting I(τ) ≈ C τ^k through τ = t(1 ± h)
/// and differentiating the fit, which is exact for power laws.
pub fn rl_derivative_local_power<F: Fn(f64) -> f64>(f: F, mu: FractionalOrder, t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain { what: "rl_derivative: time", value: t });
    }
    let opts = QuadOptions::with_tolerance(1e-15, 1e-13);
    let lo = memory_integral(&f, mu, t * (1.0 - POWER_FIT_STEP), &opts)?;
    let mid = memory_integral(&f, mu, t, &opts)?;
    let hi = memory_integral(&f, mu, t * (1.0 + POWER_FIT_STEP), &opts)?;
    if mid == 0.0 {
        return Ok(0.0);
    }
    let k = (hi / lo).ln() / ((1.0 + POWER_FIT_STEP) / (1.0 - POWER_FIT_STEP)).ln();
    Ok(k * mid / t / mu.gamma_one_minus())
}

/// D_t^μ t^β evaluated numerically.
pub fn rl_derivative_power(mu: FractionalOrder, beta: f64, t: f64) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::InvalidParameter(format!("power must be positive, got {beta}")));
    }
    rl_derivative_local_power(|u: f64| u.max(0.0).powf(beta), mu, t)
}

/// The analytic power rule Γ(β+1)/Γ(β+1-μ) t^{β-μ}.
pub fn rl_power_rule(mu: FractionalOrder, beta: f64, t: f64) -> Result<f64> {
    Ok(gamma(beta + 1.0)? / gamma(beta + 1.0 - mu.value())? * t.powf(beta - mu.value()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GValue {
    pub g: f64,
    pub g_prime: f64,
    /// Summed quadrature error estimate of both integrals.
    pub error: f64,
}

fn g_options() -> QuadOptions {
    QuadOptions { abs_tol: 1e-12, rel_tol: 1e-12, max_intervals: 4000 }
}

/// Reduced memory integral G(η) and its η-derivative G′(η).
///
/// G(η) = ∫_{s0}^1 (1 - (η/λ)s^{-p})^n (1-s)^{-μ} ds, s0 = (η/λ)^{1/p}.
pub fn g_integral(kind: ProblemKind, mu: FractionalOrder, n: f64, lambda: f64, eta: f64) -> Result<GValue> {
    g_integral_with(kind, mu, n, lambda, eta, &g_options())
}

pub fn g_integral_with(
    kind: ProblemKind,
    mu: FractionalOrder,
    n: f64,
    lambda: f64,
    eta: f64,
    opts: &QuadOptions,
) -> Result<GValue> {
    if !(n >= 1.0) {
        return Err(Error::InvalidExponent(format!("profile exponent must be >= 1, got {n}")));
    }
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("front position must be positive, got {lambda}")));
    }
    if !(eta >= 0.0) || eta > lambda {
        return Err(Error::Domain { what: "g_integral: eta must lie in [0, λ]", value: eta });
    }
    let m = mu.value();
    let p = kind.time_exponent(mu);
    if eta == lambda {
        return Ok(GValue { g: 0.0, g_prime: 0.0, error: 0.0 });
    }
    if eta == 0.0 {
        // ∫_0^1 s^{-p}(1-s)^{-μ} ds = B(1-p, 1-μ)
        let beta = gamma(1.0 - p)? * gamma(1.0 - m)? / gamma(2.0 - p - m)?;
        return Ok(GValue { g: 1.0 / (1.0 - m), g_prime: -n / lambda * beta, error: 0.0 });
    }

    let r = eta / lambda;
    let s0 = r.powf(1.0 / p);
    let v0 = (1.0 - s0).powf(1.0 - m);
    let expo = 1.0 / (1.0 - m);
    // v = v0 (1 - y²) smooths the zero of the profile at s0; the kernel is
    // already absorbed by v = (1 - s)^{1-μ}.
    let point = |y: f64| -> (f64, f64, f64) {
        let v = v0 * (1.0 - y * y);
        let s = (1.0 - v.powf(expo)).max(s0);
        let base = (1.0 - r * s.powf(-p)).max(0.0);
        let jac = 2.0 * v0 * y;
        (s, base, jac)
    };
    let gi = integrate(
        |y| {
            let (_, base, jac) = point(y);
            base.powf(n) * jac
        },
        0.0,
        1.0,
        opts,
    )?;
    let gpi = integrate(
        |y| {
            let (s, base, jac) = point(y);
            let pow = if n == 1.0 { 1.0 } else { base.powf(n - 1.0) };
            s.powf(-p) * pow * jac
        },
        0.0,
        1.0,
        opts,
    )?;
    let scale = 1.0 / (1.0 - m);
    Ok(GValue {
        g: scale * gi.value,
        g_prime: -n / lambda * scale * gpi.value,
        error: scale * (gi.error + n / lambda * gpi.error),
    })
}

/// Exact RL derivative of the self-similar profile: D_t^μ Θ = t^{-μ} D(η).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfSimilarDerivative {
    pub value_coefficient: f64,
    pub eta: f64,
    pub g_value: f64,
    pub g_prime: f64,
}

/// D(η) = [(1-μ)G(η) - p η G′(η)] / Γ(1-μ).
pub fn rl_derivative_selfsimilar(
    kind: ProblemKind,
    mu: FractionalOrder,
    n: f64,
    lambda: f64,
    eta: f64,
) -> Result<SelfSimilarDerivative> {
    let gv = g_integral(kind, mu, n, lambda, eta)?;
    let p = kind.time_exponent(mu);
    let m = mu.value();
    let d = ((1.0 - m) * gv.g - p * eta * gv.g_prime) / mu.gamma_one_minus();
    Ok(SelfSimilarDerivative { value_coefficient: d, eta, g_value: gv.g, g_prime: gv.g_prime })
}

/// Same as [`rl_derivative_selfsimilar`] with λ taken from the problem's front law.
pub fn rl_derivative_profile(
    kind: ProblemKind,
    mu: FractionalOrder,
    n: f64,
    eta: f64,
) -> Result<SelfSimilarDerivative> {
    let lambda = front_factor(kind, mu, n)?;
    rl_derivative_selfsimilar(kind, mu, n, lambda, eta)
}

/// Integrated FT-HBI value ∫_0^δ D_t^μ Θ_a dx in the approximate form
/// (1/Γ(1-μ)) (1/((1-μ)(n+1))) d/dt(δ t^{1-μ}), with the time derivative
/// taken in closed form for δ = C t^p.
pub fn ft_hbi_approx_derivative(spec: &ProblemSpec, n: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain { what: "ft_hbi: time", value: t });
    }
    let mu = spec.mu();
    let m = mu.value();
    let p = spec.kind().time_exponent(mu);
    let c = front_factor(spec.kind(), mu, n)? * spec.length_scale(1.0);
    // d/dt (C t^{p+1-μ})
    let rate = c * (p + 1.0 - m) * t.powf(p - m);
    Ok(rate / (mu.gamma_one_minus() * (1.0 - m) * (n + 1.0)))
}

/// Right-hand side the front law balances against the FT-HBI value:
/// a_μ n/δ for subdiffusion, V_μ n for drift.
///
/// The drift value follows the front law δ = V_μ N t^μ; the literal drift
/// flux -V_μ[Θ(δ) - Θ(0)] is V_μ, which that law does not balance for n ≠ 1.
pub fn boundary_flux_term(spec: &ProblemSpec, n: f64, t: f64) -> Result<f64> {
    match spec.kind() {
        ProblemKind::Subdiffusion => {
            let delta = crate::profiles::penetration_depth(spec, n, t)?;
            Ok(spec.coeff() * n / delta)
        }
        ProblemKind::Drift => {
            factor_n(n, spec.mu())?;
            Ok(spec.coeff() * n)
        }
    }
}

/// FT-HBI value minus the boundary term; zero along the front laws.
pub fn balance_residual(spec: &ProblemSpec, n: f64, t: f64) -> Result<f64> {
    Ok(ft_hbi_approx_derivative(spec, n, t)? - boundary_flux_term(spec, n, t)?)
}
