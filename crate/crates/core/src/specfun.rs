//! Real-valued special functions: gamma, reciprocal gamma, Airy Ai and the
//! M-Wright (Mainardi) function.
//!
//! Everything here is a pure function of its arguments.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(1/3) and Γ(2/3) to full double precision.
pub const GAMMA_ONE_THIRD: f64 = 2.678_938_534_707_747_6;
pub const GAMMA_TWO_THIRDS: f64 = 1.354_117_939_426_400_4;

/// Lanczos sum A_g(z) for z = x - 1, x >= 0.5.
fn lanczos_sum(z: f64) -> f64 {
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    acc
}

/// Γ(x) for x >= 0.5 by the Lanczos approximation.
fn gamma_lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    // Split t^(z+1/2) so large arguments do not overflow before the e^-t factor.
    let half = t.powf(0.5 * (z + 0.5));
    (2.0 * PI).sqrt() * half * (half * (-t).exp()) * lanczos_sum(z)
}

fn ln_gamma_lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
}

/// Euler gamma function for positive arguments.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain { what: "gamma", value: x });
    }
    if let Some(f) = small_factorial(x) {
        return Ok(f);
    }
    if x < 0.5 {
        // Reflection keeps the Lanczos sum in its accurate range.
        Ok(PI / ((PI * x).sin() * gamma_lanczos(1.0 - x)))
    } else {
        Ok(gamma_lanczos(x))
    }
}

/// (x-1)! for integer x in [1, 23], exact in f64.
fn small_factorial(x: f64) -> Option<f64> {
    if (1.0..=23.0).contains(&x) && x == x.round() {
        Some((2..x as u64).fold(1.0, |acc, k| acc * k as f64))
    } else {
        None
    }
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain { what: "ln_gamma", value: x });
    }
    if x < 0.5 {
        Ok((PI / (PI * x).sin()).ln() - ln_gamma_lanczos(1.0 - x))
    } else {
        Ok(ln_gamma_lanczos(x))
    }
}

/// 1/Γ(x) for any real x. Exactly zero at the non-positive integers.
pub fn reciprocal_gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 && x == x.round() {
        return 0.0;
    }
    if let Some(f) = small_factorial(x) {
        return 1.0 / f;
    }
    if x <= 0.5 {
        // 1/Γ(x) = Γ(1 - x) sin(πx) / π
        sin_pi(x) * gamma_lanczos(1.0 - x) / PI
    } else {
        1.0 / gamma_lanczos(x)
    }
}

/// sin(πx) with the argument reduced first, so integer and half-integer
/// inputs come out exact.
fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (0.5 * x).floor(); // r in [0, 2)
    let (r, sign) = if r >= 1.0 { (r - 1.0, -1.0) } else { (r, 1.0) };
    let s = if r == 0.0 {
        0.0
    } else if r == 0.5 {
        1.0
    } else if r < 0.5 {
        (PI * r).sin()
    } else {
        (PI * (1.0 - r)).sin()
    };
    sign * s
}

/// Sign and log-magnitude of 1/Γ(x); `None` at the zeros.
fn ln_abs_reciprocal_gamma(x: f64) -> Option<(f64, f64)> {
    if x <= 0.0 && x == x.round() {
        return None;
    }
    if x > 0.5 {
        return Some((1.0, -ln_gamma_lanczos(x)));
    }
    let s = sin_pi(x);
    Some((s.signum(), s.abs().ln() + ln_gamma_lanczos(1.0 - x) - PI.ln()))
}

pub const AIRY_MAX_ABS_ARG: f64 = 20.0;

/// Airy function of the first kind from its two Maclaurin series.
pub fn airy_ai(x: f64) -> Result<f64> {
    if !x.is_finite() || x.abs() > AIRY_MAX_ABS_ARG {
        return Err(Error::Domain { what: "airy_ai", value: x });
    }
    let c1 = 1.0 / (3f64.powf(2.0 / 3.0) * GAMMA_TWO_THIRDS);
    let c2 = 1.0 / (3f64.powf(1.0 / 3.0) * GAMMA_ONE_THIRD);
    let x3 = x * x * x;

    // f = Σ 3^k (1/3)_k x^{3k} / (3k)!,  g = Σ 3^k (2/3)_k x^{3k+1} / (3k+1)!
    let mut f = Kahan::default();
    let mut g = Kahan::default();
    let mut tf = 1.0;
    let mut tg = x;
    f.add(tf);
    g.add(tg);
    for k in 1..400usize {
        let kf = k as f64;
        tf *= x3 / ((3.0 * kf - 1.0) * (3.0 * kf));
        tg *= x3 / ((3.0 * kf) * (3.0 * kf + 1.0));
        f.add(tf);
        g.add(tg);
        if tf.abs() <= 1e-17 * f.sum().abs() && tg.abs() <= 1e-17 * g.sum().abs().max(1e-300) {
            break;
        }
    }
    Ok(c1 * f.sum() - c2 * g.sum())
}

/// Order ν of the M-Wright function, 0 < ν < 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MWrightOrder(f64);

impl MWrightOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if nu > 0.0 && nu < 1.0 {
            Ok(Self(nu))
        } else {
            Err(Error::InvalidOrder(nu))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

pub const MWRIGHT_MAX_TERMS: usize = 250;

/// M_ν(z) = Σ_k (-z)^k / (k! Γ(1 - ν - νk)), summed directly.
pub fn mwright(order: MWrightOrder, z: f64) -> Result<f64> {
    let nu = order.value();
    if !(z >= 0.0) || !z.is_finite() {
        return Err(Error::Domain { what: "mwright", value: z });
    }
    if z == 0.0 {
        return Ok(reciprocal_gamma(1.0 - nu));
    }
    let ln_z = z.ln();
    let mut acc = Kahan::default();
    let mut ln_k_fact = 0.0;
    for k in 0..MWRIGHT_MAX_TERMS {
        let kf = k as f64;
        if k > 0 {
            ln_k_fact += kf.ln();
        }
        // 1/Γ(1 - ν(k+1)) vanishes when ν(k+1) is a positive integer; snap
        // rounding residue so those terms are exact zeros.
        let shift = nu * (kf + 1.0);
        let arg = if (shift - shift.round()).abs() < 1e-12 * shift { 1.0 - shift.round() } else { 1.0 - shift };
        let term = match ln_abs_reciprocal_gamma(arg) {
            None => 0.0,
            Some((sign, ln_rg)) => {
                let parity = if k % 2 == 0 { 1.0 } else { -1.0 };
                parity * sign * (kf * ln_z - ln_k_fact + ln_rg).exp()
            }
        };
        acc.add(term);
        // Zeros of 1/Γ make isolated terms vanish; only stop on a genuinely small term.
        if term != 0.0 && k > 2 && term.abs() < 1e-16 * (acc.sum().abs() + 1.0) {
            return Ok(acc.sum());
        }
    }
    Err(Error::SeriesConvergence { what: "mwright", z, terms: MWRIGHT_MAX_TERMS })
}

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn sum(&self) -> f64 {
        self.sum + self.comp
    }
}
