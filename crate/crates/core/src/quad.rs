//! Globally adaptive Gauss–Kronrod (10/21) quadrature.
//!
//! Intervals are bisected in order of decreasing error estimate until the
//! summed estimate meets `max(abs_tol, rel_tol * |I|)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_208_292_751,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

// Gauss weights for the odd-indexed Kronrod nodes XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-12, rel_tol: 1e-10, max_intervals: 2000 }
    }
}

impl QuadOptions {
    pub fn with_tolerance(abs_tol: f64, rel_tol: f64) -> Self {
        Self { abs_tol, rel_tol, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One 21-point Kronrod panel with the QUADPACK error heuristic.
fn kronrod21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = (fc * WGK[10]).abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

/// ∫_a^b f(x) dx. The integrand must be finite at the interior Kronrod
/// nodes; endpoints are never evaluated.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult { value: 0.0, error: 0.0, intervals: 0 });
    }
    let (value, error) = kronrod21(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    let min_width = (b - a).abs() * 1e-15;

    loop {
        let tol = opts.abs_tol.max(opts.rel_tol * total.abs());
        if total_err <= tol {
            break;
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::Quadrature { estimate: total_err, tolerance: tol });
        }
        let worst = heap.pop().expect("heap never empties");
        if (worst.b - worst.a).abs() < min_width {
            // Cannot split further; keep it and report what was achieved.
            heap.push(worst);
            return Err(Error::Quadrature { estimate: total_err, tolerance: tol });
        }
        let mid = 0.5 * (worst.a + worst.b);
        let (v1, e1) = kronrod21(&f, worst.a, mid);
        let (v2, e2) = kronrod21(&f, mid, worst.b);
        heap.push(Segment { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, error: e2 });
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
    }
    let value = heap.iter().map(|s| s.value).sum();
    let error = heap.iter().map(|s| s.error).sum();
    Ok(QuadResult { value, error, intervals: heap.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| 3.0 * x * x + 1.0, 0.0, 2.0, &QuadOptions::default()).unwrap();
        assert!((r.value - 10.0).abs() < 1e-13);
        assert_eq!(r.intervals, 1);
    }

    #[test]
    fn endpoint_singularity() {
        // ∫_0^1 √x dx = 2/3
        let r = integrate(f64::sqrt, 0.0, 1.0, &QuadOptions::default()).unwrap();
        assert!((r.value - 2.0 / 3.0).abs() < 1e-11, "{r:?}");
        // ∫_0^1 x^{-1/2} dx = 2 at a looser tolerance
        let r = integrate(|x| x.powf(-0.5), 0.0, 1.0, &QuadOptions::with_tolerance(1e-6, 1e-6)).unwrap();
        assert!((r.value - 2.0).abs() < 1e-5, "{r:?}");
    }

    #[test]
    fn reversed_limits_change_sign() {
        let r = integrate(f64::sin, std::f64::consts::PI, 0.0, &QuadOptions::default()).unwrap();
        assert!((r.value + 2.0).abs() < 1e-13);
    }

    #[test]
    fn failure_reports_estimate() {
        let opts = QuadOptions { abs_tol: 1e-14, rel_tol: 0.0, max_intervals: 3 };
        match integrate(|x| x.powf(-0.9), 0.0, 1.0, &opts) {
            Err(Error::Quadrature { estimate, .. }) => assert!(estimate > 1e-14),
            other => panic!("expected failure, got {other:?}"),
        }
    }
}
