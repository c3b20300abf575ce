//! Bracketed scalar minimization: a coarse scan to locate an interior
//! bracket, then Brent's golden-section/parabolic refinement.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    /// The bracket the refinement ran on.
    pub bracket: (f64, f64),
    pub iterations: usize,
}

const GOLDEN: f64 = 0.381_966_011_250_105_1; // (3 - √5) / 2

/// Brent minimization of `f` on `[a, b]` to an absolute abscissa tolerance.
pub fn brent<F: FnMut(f64) -> Result<f64>>(mut f: F, a: f64, b: f64, x_tol: f64) -> Result<Minimum> {
    let (mut a, mut b) = if a < b { (a, b) } else { (b, a) };
    let bracket = (a, b);
    let mut x = a + GOLDEN * (b - a);
    let mut w = x;
    let mut v = x;
    let mut fx = f(x)?;
    let mut fw = fx;
    let mut fv = fx;
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;

    for iter in 1..=200 {
        let mid = 0.5 * (a + b);
        let tol1 = x_tol * 0.5;
        let tol2 = 2.0 * tol1;
        if (x - mid).abs() <= tol2 - 0.5 * (b - a) {
            return Ok(Minimum { x, value: fx, bracket, iterations: iter });
        }
        let mut golden_step = true;
        if e.abs() > tol1 && fx.is_finite() && fw.is_finite() && fv.is_finite() {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let e_prev = e;
            if p.abs() < (0.5 * q * e_prev).abs() && p > q * (a - x) && p < q * (b - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if mid >= x { tol1 } else { -tol1 };
                }
                golden_step = false;
            }
        }
        if golden_step {
            e = if x >= mid { a - x } else { b - x };
            d = GOLDEN * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let fu = f(u)?;
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    Ok(Minimum { x, value: fx, bracket, iterations: 200 })
}

/// Minimize on `[lo, hi]` requiring an interior minimum.
///
/// A uniform scan with `scan_points` samples picks the bracket; if the best
/// sample is an endpoint the objective is treated as monotone there.
pub fn minimize_interior<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    lo: f64,
    hi: f64,
    scan_points: usize,
    x_tol: f64,
) -> Result<Minimum> {
    let m = scan_points.max(3);
    let step = (hi - lo) / (m - 1) as f64;
    let mut best = (0usize, f64::INFINITY);
    for i in 0..m {
        let x = lo + step * i as f64;
        let fx = f(x)?;
        if fx < best.1 {
            best = (i, fx);
        }
    }
    if best.0 == 0 || best.0 == m - 1 || !best.1.is_finite() {
        return Err(Error::NoInteriorMinimum { lo, hi });
    }
    let a = lo + step * (best.0 - 1) as f64;
    let b = lo + step * (best.0 + 1) as f64;
    let mut min = brent(&mut f, a, b, x_tol)?;
    min.iterations += m;
    if min.value > best.1 {
        // Parabolic steps never return a worse point than the scan, but keep the contract.
        min.x = lo + step * best.0 as f64;
        min.value = best.1;
    }
    Ok(min)
}
