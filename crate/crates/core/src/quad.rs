//! Adaptive Gauss–Kronrod (10/21-point) quadrature on finite intervals.
//!
//! Per-panel error estimates use the QUADPACK scaling of |K21 − G10|.
//! Panels are bisected worst-first until the summed estimate meets the
//! tolerance.

use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

use crate::error::{GncsError, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_142_658_364,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Values that can be integrated: reals and complex numbers.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Fixed-length real vector integrated componentwise. Its magnitude is the
/// largest component, so components should be scaled to comparable size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vector<const N: usize>(pub [f64; N]);

impl<const N: usize> Add for Vector<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
        self
    }
}

impl<const N: usize> Sub for Vector<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a -= b;
        }
        self
    }
}

impl<const N: usize> Mul<f64> for Vector<N> {
    type Output = Self;
    fn mul(mut self, rhs: f64) -> Self {
        for a in self.0.iter_mut() {
            *a *= rhs;
        }
        self
    }
}

impl<const N: usize> QuadValue for Vector<N> {
    fn zero() -> Self {
        Vector([0.0; N])
    }
    fn magnitude(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Integral<T> {
    pub value: T,
    pub error: f64,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 0.0,
            rel_tol: 1e-12,
            max_panels: 4000,
        }
    }
}

impl QuadOptions {
    pub fn rel(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }
}

fn gk21<T: QuadValue, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> (T, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut values = [T::zero(); 21];
    values[20] = f(center);
    for j in 0..10 {
        let dx = half * XGK[j];
        values[2 * j] = f(center - dx);
        values[2 * j + 1] = f(center + dx);
    }
    let mut kronrod = values[20] * WGK[10];
    let mut gauss = T::zero();
    for j in 0..10 {
        let pair = values[2 * j] + values[2 * j + 1];
        kronrod = kronrod + pair * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + pair * WG[j / 2];
        }
    }
    // QUADPACK error scaling
    let mean = kronrod * 0.5;
    let mut asc = WGK[10] * (values[20] - mean).magnitude();
    for j in 0..10 {
        asc += WGK[j] * ((values[2 * j] - mean).magnitude() + (values[2 * j + 1] - mean).magnitude());
    }
    let asc = asc * half.abs();
    let k = kronrod * half;
    let raw = ((kronrod - gauss) * half).magnitude();
    let mut err = raw;
    if asc != 0.0 && raw != 0.0 {
        err = asc * (200.0 * raw / asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * k.magnitude();
    (k, err.max(floor))
}

/// Integrates `f` over `[a, b]` by adaptive bisection.
pub fn integrate<T, F>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Result<Integral<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    if a == b {
        return Ok(Integral {
            value: T::zero(),
            error: 0.0,
            panels: 0,
        });
    }
    let (v0, e0) = gk21(&mut f, a, b);
    let mut panels: Vec<(f64, f64, T, f64)> = vec![(a, b, v0, e0)];
    loop {
        let mut total = T::zero();
        let mut err = 0.0;
        let mut worst = 0;
        for (i, p) in panels.iter().enumerate() {
            total = total + p.2;
            err += p.3;
            if p.3 > panels[worst].3 {
                worst = i;
            }
        }
        let target = opts.abs_tol.max(opts.rel_tol * total.magnitude());
        if err <= target || err <= 100.0 * f64::EPSILON * total.magnitude() {
            return Ok(Integral {
                value: total,
                error: err,
                panels: panels.len(),
            });
        }
        let (lo, hi, _, _) = panels[worst];
        let mid = 0.5 * (lo + hi);
        if panels.len() >= opts.max_panels || mid <= lo || mid >= hi {
            // roundoff floor: accept when the remaining estimate is tiny
            if err <= 1e-14 * total.magnitude().max(opts.abs_tol) {
                return Ok(Integral {
                    value: total,
                    error: err,
                    panels: panels.len(),
                });
            }
            return Err(GncsError::Convergence(format!(
                "quadrature on [{a}, {b}] stalled at error {err:.3e} (target {target:.3e}) after {} panels",
                panels.len()
            )));
        }
        let (vl, el) = gk21(&mut f, lo, mid);
        let (vr, er) = gk21(&mut f, mid, hi);
        panels[worst] = (lo, mid, vl, el);
        panels.push((mid, hi, vr, er));
    }
}

/// Integrates over consecutive breakpoints, summing the pieces.
pub fn integrate_breakpoints<T, F>(mut f: F, points: &[f64], opts: QuadOptions) -> Result<Integral<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    let mut value = T::zero();
    let mut error = 0.0;
    let mut panels = 0;
    for w in points.windows(2) {
        let piece = integrate(&mut f, w[0], w[1], opts)?;
        value = value + piece.value;
        error += piece.error;
        panels += piece.panels;
    }
    Ok(Integral {
        value,
        error,
        panels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x: f64| x.powi(7) - 3.0 * x * x, 0.0, 2.0, QuadOptions::default()).unwrap();
        assert_relative_eq!(r.value, 256.0 / 8.0 - 8.0, max_relative = 1e-14);
        assert_eq!(r.panels, 1);
    }

    #[test]
    fn vector_integrand_is_componentwise() {
        let r = integrate(|x: f64| Vector([1.0, x, x * x]), 0.0, 3.0, QuadOptions::default()).unwrap();
        assert_relative_eq!(r.value.0[0], 3.0, max_relative = 1e-15);
        assert_relative_eq!(r.value.0[1], 4.5, max_relative = 1e-15);
        assert_relative_eq!(r.value.0[2], 9.0, max_relative = 1e-15);
    }

    #[test]
    fn endpoint_singularity_converges() {
        // ∫₀¹ x^{-1/2} dx = 2
        let r = integrate(|x: f64| x.powf(-0.5), 0.0, 1.0, QuadOptions::rel(1e-10)).unwrap();
        assert_relative_eq!(r.value, 2.0, max_relative = 1e-9);
    }

    #[test]
    fn oscillatory_complex_integrand() {
        // ∫₀^{2π} e^{3ix} e^{-x} dx
        let r: Integral<Complex64> = integrate(
            |x: f64| Complex64::new(0.0, 3.0 * x).exp() * (-x).exp(),
            0.0,
            2.0 * std::f64::consts::PI,
            QuadOptions::rel(1e-13),
        )
        .unwrap();
        let s = Complex64::new(-1.0, 3.0);
        let expected = ((s * 2.0 * std::f64::consts::PI).exp() - 1.0) / s;
        assert_relative_eq!(r.value.re, expected.re, max_relative = 1e-12);
        assert_relative_eq!(r.value.im, expected.im, max_relative = 1e-12);
    }

    #[test]
    fn non_integrable_reports_convergence_error() {
        let opts = QuadOptions {
            max_panels: 50,
            ..QuadOptions::default()
        };
        let r = integrate(|x: f64| 1.0 / x, 0.0, 1.0, opts);
        assert!(matches!(r, Err(GncsError::Convergence(_))));
    }
}
