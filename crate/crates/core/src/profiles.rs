//! Penetration-depth laws, similarity variables and the generalized
//! parabolic profile Θ(η) = (1 - η/λ)^n for both problems.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::gamma;

/// Order μ of the time derivative, 0 < μ < 1.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    pub fn new(mu: f64) -> Result<Self> {
        if mu > 0.0 && mu < 1.0 {
            Ok(Self(mu))
        } else {
            Err(Error::InvalidOrder(mu))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Γ(2 - μ), equal to (1 - μ)Γ(1 - μ).
    pub fn gamma_two_minus(self) -> f64 {
        gamma(2.0 - self.0).expect("2 - μ lies in (1, 2)")
    }

    pub fn gamma_one_minus(self) -> f64 {
        gamma(1.0 - self.0).expect("1 - μ lies in (0, 1)")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    /// ∂^μT/∂t^μ = a_μ ∂²T/∂x²
    Subdiffusion,
    /// ∂^μT/∂t^μ = -V_μ ∂T/∂x
    Drift,
}

impl ProblemKind {
    /// Exponent p of the front law δ ∝ t^p.
    pub fn time_exponent(self, mu: FractionalOrder) -> f64 {
        match self {
            ProblemKind::Subdiffusion => 0.5 * mu.value(),
            ProblemKind::Drift => mu.value(),
        }
    }
}

/// One of the two Dirichlet problems: the kind, μ, and the transport
/// coefficient (a_μ in m²/s^μ or V_μ in m/s^μ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemSpec {
    kind: ProblemKind,
    mu: FractionalOrder,
    coeff: f64,
}

impl ProblemSpec {
    pub fn new(kind: ProblemKind, mu: FractionalOrder, coeff: f64) -> Result<Self> {
        if !(coeff > 0.0) || !coeff.is_finite() {
            return Err(Error::InvalidParameter(format!("coefficient must be positive, got {coeff}")));
        }
        Ok(Self { kind, mu, coeff })
    }

    pub fn subdiffusion(mu: f64, a: f64) -> Result<Self> {
        Self::new(ProblemKind::Subdiffusion, FractionalOrder::new(mu)?, a)
    }

    pub fn drift(mu: f64, v: f64) -> Result<Self> {
        Self::new(ProblemKind::Drift, FractionalOrder::new(mu)?, v)
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    pub fn mu(&self) -> FractionalOrder {
        self.mu
    }

    pub fn coeff(&self) -> f64 {
        self.coeff
    }

    /// Length scale √a_μ t^{μ/2} or V_μ t^μ.
    pub fn length_scale(&self, t: f64) -> f64 {
        let p = self.kind.time_exponent(self.mu);
        match self.kind {
            ProblemKind::Subdiffusion => self.coeff.sqrt() * t.powf(p),
            ProblemKind::Drift => self.coeff * t.powf(p),
        }
    }
}

fn check_exponent(n: f64) -> Result<f64> {
    if n >= 1.0 && n.is_finite() {
        Ok(n)
    } else {
        Err(Error::InvalidExponent(format!("profile exponent must be >= 1, got {n}")))
    }
}

/// N = n(n+1)(1-μ)Γ(1-μ) = n(n+1)Γ(2-μ).
pub fn factor_n(n: f64, mu: FractionalOrder) -> Result<f64> {
    let n = check_exponent(n)?;
    Ok(n * (n + 1.0) * mu.gamma_two_minus())
}

/// Fractional correction factor of the subdiffusion front, √(Γ(2-μ)/(2-μ)).
pub fn j_factor_subdiffusion(mu: FractionalOrder) -> f64 {
    (mu.gamma_two_minus() / (2.0 - mu.value())).sqrt()
}

/// Fractional correction factor of the drift front, Γ(2-μ).
pub fn j_factor_drift(mu: FractionalOrder) -> f64 {
    mu.gamma_two_minus()
}

/// Dimensionless front position λ = δ / length_scale.
pub fn front_factor(kind: ProblemKind, mu: FractionalOrder, n: f64) -> Result<f64> {
    let n = check_exponent(n)?;
    Ok(match kind {
        ProblemKind::Subdiffusion => (2.0 * n * (n + 1.0)).sqrt() * j_factor_subdiffusion(mu),
        ProblemKind::Drift => n * (n + 1.0) * j_factor_drift(mu),
    })
}

/// δ(t) with δ(0) = 0.
pub fn penetration_depth(spec: &ProblemSpec, n: f64, t: f64) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain { what: "penetration_depth: time", value: t });
    }
    let lambda = front_factor(spec.kind, spec.mu, n)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    Ok(lambda * spec.length_scale(t))
}

/// η = x/√(a_μ t^μ) or x/(V_μ t^μ).
pub fn similarity_eta(spec: &ProblemSpec, x: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain { what: "similarity_eta: time", value: t });
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain { what: "similarity_eta: position", value: x });
    }
    Ok(x / spec.length_scale(t))
}

/// Fitted optimal subdiffusion exponent as a Gaussian in μ.
pub fn n_s_fit(mu: FractionalOrder) -> f64 {
    let d = mu.value() - 0.264;
    1.256 + 0.224 * (-d * d / 4.303).exp()
}

/// Profile exponent: a constant, or a drift-only rule n_d(η).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExponentSpec {
    Fixed(f64),
    /// n_d = n_d0 + μ/η
    Hyperbolic(f64),
    /// n_d = n_d0 + μ η e^{-η}
    InverseExponential(f64),
}

impl ExponentSpec {
    pub fn fixed(n: f64) -> Result<Self> {
        Ok(Self::Fixed(check_exponent(n)?))
    }

    pub fn hyperbolic(n0: f64) -> Result<Self> {
        Ok(Self::Hyperbolic(check_exponent(n0)?))
    }

    pub fn inverse_exponential(n0: f64) -> Result<Self> {
        Ok(Self::InverseExponential(check_exponent(n0)?))
    }

    /// The constant exponent, or n_d0 for a variable rule.
    pub fn base(&self) -> f64 {
        match *self {
            Self::Fixed(n) | Self::Hyperbolic(n) | Self::InverseExponential(n) => n,
        }
    }

    pub fn is_variable(&self) -> bool {
        !matches!(self, Self::Fixed(_))
    }

    pub fn value_at(&self, mu: FractionalOrder, eta: f64) -> Result<f64> {
        match self {
            Self::Fixed(n) => Ok(*n),
            _ => variable_exponent(*self, mu, eta),
        }
    }
}

/// Pointwise exponent of a variable-order rule.
pub fn variable_exponent(rule: ExponentSpec, mu: FractionalOrder, eta: f64) -> Result<f64> {
    match rule {
        ExponentSpec::Fixed(n) => Ok(n),
        ExponentSpec::Hyperbolic(n0) => {
            if !(eta > 0.0) {
                return Err(Error::Domain { what: "hyperbolic exponent rule", value: eta });
            }
            Ok(n0 + mu.value() / eta)
        }
        ExponentSpec::InverseExponential(n0) => {
            if !(eta >= 0.0) {
                return Err(Error::Domain { what: "inverse-exponential exponent rule", value: eta });
            }
            Ok(n0 + mu.value() * eta * (-eta).exp())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvalMode {
    /// (1 - η/λ)^n wherever real, including past the front.
    Raw,
    /// max(0, 1 - η/λ)^n.
    #[default]
    Clamped,
}

/// How λ is chosen for a variable-order exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FrontMode {
    /// λ recomputed from the local n_d(η).
    #[default]
    Recompute,
    /// λ fixed at its n_d0 value.
    Frozen,
}

const INTEGER_TOL: f64 = 1e-9;

/// Θ(η) = (1 - η/λ)^n with either a constant exponent or a pointwise rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityProfile {
    lambda: f64,
    exponent: ExponentSpec,
    problem: Option<(ProblemKind, FractionalOrder)>,
    front: FrontMode,
}

impl SimilarityProfile {
    /// Fixed-exponent profile with an explicit front position.
    pub fn new(lambda: f64, n: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!("front position must be positive, got {lambda}")));
        }
        Ok(Self { lambda, exponent: ExponentSpec::fixed(n)?, problem: None, front: FrontMode::Recompute })
    }

    /// Profile whose λ follows the problem's front law.
    pub fn for_problem(
        kind: ProblemKind,
        mu: FractionalOrder,
        exponent: ExponentSpec,
        front: FrontMode,
    ) -> Result<Self> {
        if exponent.is_variable() && kind != ProblemKind::Drift {
            return Err(Error::InvalidExponent("variable-order exponents apply to the drift problem only".into()));
        }
        let lambda = front_factor(kind, mu, exponent.base())?;
        Ok(Self { lambda, exponent, problem: Some((kind, mu)), front })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn exponent(&self) -> ExponentSpec {
        self.exponent
    }

    /// Local (λ, n) at η.
    pub fn local_parameters(&self, eta: f64) -> Result<(f64, f64)> {
        match (self.exponent, self.problem) {
            (ExponentSpec::Fixed(n), _) => Ok((self.lambda, n)),
            (rule, Some((kind, mu))) => {
                let n = variable_exponent(rule, mu, eta)?;
                let lambda = match self.front {
                    FrontMode::Recompute => front_factor(kind, mu, n)?,
                    FrontMode::Frozen => self.lambda,
                };
                Ok((lambda, n))
            }
            (_, None) => unreachable!("variable exponents are only built through for_problem"),
        }
    }

    /// Θ at η; `Ok(None)` is an undefined Raw value (non-integer power of a
    /// negative base).
    pub fn eval(&self, eta: f64, mode: EvalMode) -> Result<Option<f64>> {
        if !(eta >= 0.0) || !eta.is_finite() {
            return Err(Error::Domain { what: "profile: eta", value: eta });
        }
        let (lambda, n) = self.local_parameters(eta)?;
        Ok(eval_parabolic(lambda, n, eta, mode))
    }
}

/// (1 - η/λ)^n under the given mode.
pub fn eval_parabolic(lambda: f64, n: f64, eta: f64, mode: EvalMode) -> Option<f64> {
    let base = 1.0 - eta / lambda;
    if base >= 0.0 {
        return Some(base.powf(n));
    }
    match mode {
        EvalMode::Clamped => Some(0.0),
        EvalMode::Raw => {
            let rounded = n.round();
            if (n - rounded).abs() < INTEGER_TOL {
                Some(base.powi(rounded as i32))
            } else {
                None
            }
        }
    }
}

/// Convenience wrapper over [`SimilarityProfile::eval`].
pub fn eval_profile(profile: &SimilarityProfile, eta: f64, mode: EvalMode) -> Result<Option<f64>> {
    profile.eval(eta, mode)
}
