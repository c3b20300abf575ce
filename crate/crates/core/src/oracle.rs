//! Exact drift-problem profiles, normalized so Θ(0) = 1.

use crate::error::{Error, Result};
use crate::profiles::FractionalOrder;
use crate::specfun::{airy_ai, mwright, reciprocal_gamma, MWrightOrder};

/// Largest η for which the series route is validated.
pub const MAX_ETA: f64 = 6.0;

const FAST_PATH_TOL: f64 = 1e-15;

/// Normalized exact profile M_μ(η)/M_μ(0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactProfile {
    mu: FractionalOrder,
    normalization: f64,
}

impl ExactProfile {
    pub fn new(mu: FractionalOrder) -> Self {
        Self { mu, normalization: reciprocal_gamma(1.0 - mu.value()) }
    }

    pub fn mu(&self) -> FractionalOrder {
        self.mu
    }

    /// M_μ(0) = 1/Γ(1-μ).
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn eval(&self, eta: f64) -> Result<f64> {
        check_eta(eta)?;
        let m = self.mu.value();
        if (m - 0.5).abs() < FAST_PATH_TOL {
            return exact_half(eta);
        }
        if (m - 1.0 / 3.0).abs() < FAST_PATH_TOL {
            return exact_third(eta);
        }
        self.eval_series(eta)
    }

    /// The M-Wright series route, bypassing closed forms.
    pub fn eval_series(&self, eta: f64) -> Result<f64> {
        check_eta(eta)?;
        let order = MWrightOrder::new(self.mu.value())?;
        Ok(mwright(order, eta)? / self.normalization)
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if (0.0..=MAX_ETA).contains(&eta) {
        Ok(())
    } else {
        Err(Error::Domain { what: "exact drift profile: eta", value: eta })
    }
}

pub fn exact_drift_profile(mu: FractionalOrder, eta: f64) -> Result<f64> {
    ExactProfile::new(mu).eval(eta)
}

/// μ = 1/2: exp(-η²/4).
pub fn exact_half(eta: f64) -> Result<f64> {
    if !(eta >= 0.0) {
        return Err(Error::Domain { what: "exact_half", value: eta });
    }
    Ok((-0.25 * eta * eta).exp())
}

/// μ = 1/3: Ai(η/3^{1/3}) / Ai(0).
pub fn exact_third(eta: f64) -> Result<f64> {
    if !(eta >= 0.0) {
        return Err(Error::Domain { what: "exact_third", value: eta });
    }
    Ok(airy_ai(eta / 3f64.cbrt())? / airy_ai(0.0)?)
}
