//! Reference routines for integration tests, deliberately independent of the
//! library's Gauss–Kronrod machinery.

#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

/// Tanh-sinh quadrature of f over [0, len]. The integrand receives the
/// distance from the left end so singular factors like w^{-μ} stay accurate.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, len: f64, tol: f64) -> f64 {
    let t_max = 4.5;
    let eval = |t: f64| {
        let u = FRAC_PI_2 * t.sinh();
        let w = len / (1.0 + (-2.0 * u).exp());
        if !(w > 0.0) || w >= len {
            return 0.0;
        }
        let weight = len / 2.0 * FRAC_PI_2 * t.cosh() / u.cosh().powi(2);
        if weight == 0.0 {
            0.0
        } else {
            f(w) * weight
        }
    };
    let mut h = 0.5;
    let mut sum = eval(0.0);
    let mut k = 1;
    while (k as f64) * h <= t_max {
        sum += eval(k as f64 * h) + eval(-(k as f64) * h);
        k += 1;
    }
    let mut estimate = sum * h;
    for _ in 0..10 {
        h /= 2.0;
        let mut k = 1;
        while (k as f64) * h <= t_max {
            sum += eval(k as f64 * h) + eval(-(k as f64) * h);
            k += 2;
        }
        let next = sum * h;
        if (next - estimate).abs() <= tol * next.abs().max(1e-300) {
            return next;
        }
        estimate = next;
    }
    estimate
}

/// Time-domain RL derivative of Θ(x, τ) = (1 - x/δ(τ))₊^n with δ = c τ^p,
/// from the memory integral and a five-point difference in t.
pub fn time_domain_rl(mu: f64, gamma_one_minus_mu: f64, n: f64, c: f64, p: f64, x: f64, t: f64) -> f64 {
    let memory = |tt: f64| {
        let tau0 = (x / c).powf(1.0 / p);
        if tt <= tau0 {
            return 0.0;
        }
        let theta = |tau: f64| {
            let b = 1.0 - x / (c * tau.powf(p));
            if b > 0.0 {
                b.powf(n)
            } else {
                0.0
            }
        };
        tanh_sinh(|w| theta(tt - w) * w.powf(-mu), tt - tau0, 1e-14)
    };
    let h = 1e-2 * t;
    let d = (memory(t - 2.0 * h) - 8.0 * memory(t - h) + 8.0 * memory(t + h) - memory(t + 2.0 * h)) / (12.0 * h);
    d / gamma_one_minus_mu
}

/// Product-trapezoid rule for ∫_{a}^{1} f(s)(1-s)^{-μ} ds: f linear on each
/// panel, kernel integrated exactly.
pub fn product_trapezoid<F: Fn(f64) -> f64>(f: F, a: f64, mu: f64, panels: usize) -> f64 {
    let h = (1.0 - a) / panels as f64;
    let q = 1.0 - mu;
    let mut total = 0.0;
    let mut comp = 0.0;
    let mut f_lo = f(a);
    for i in 0..panels {
        let lo = a + h * i as f64;
        let hi = if i + 1 == panels { 1.0 } else { a + h * (i + 1) as f64 };
        let f_hi = f(hi);
        let (ul, uh) = (1.0 - lo, 1.0 - hi);
        // ∫ u^{-μ} ds and ∫ (s - lo) u^{-μ} ds over the panel, u = 1 - s
        let m0 = (ul.powf(q) - uh.powf(q)) / q;
        let m1 = ul * m0 - (ul.powf(q + 1.0) - uh.powf(q + 1.0)) / (q + 1.0);
        let term = f_lo * m0 + (f_hi - f_lo) / (hi - lo) * m1;
        // Kahan summation over a million panels
        let y = term - comp;
        let s = total + y;
        comp = (s - total) - y;
        total = s;
        f_lo = f_hi;
    }
    total
}
