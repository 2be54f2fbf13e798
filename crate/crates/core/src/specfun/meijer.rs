//! Meijer G^{m,0}_{0,m}(t | b) from its Mellin–Barnes integral
//!
//! ```text
//! G(t) = (1/2π) ∫ ∏ⱼ Γ(bⱼ + c + iu) t^{−(c+iu)} du
//! ```
//!
//! along a vertical line Re s = c to the right of every pole. By default the
//! line passes through the real saddle point of the integrand, where
//! `Σ ψ(bⱼ + s) = ln t`. On that line the integrand is bell-shaped around
//! u = 0 and the integral carries no cancellation, so the result keeps its
//! relative accuracy for very small and very large t. A fixed abscissa is
//! also supported.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::gamma::{digamma, log_gamma_complex};
use crate::error::{GncsError, Result};
use crate::quad::{integrate_breakpoints, QuadOptions};

/// Relative imaginary residue tolerated before the result is rejected.
pub const IMAG_RESIDUE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Contour {
    /// Vertical line through the real saddle point, recomputed per t.
    Saddle,
    /// Fixed abscissa c, which must exceed −min(b).
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MellinWeight {
    pub b_list: Vec<f64>,
    pub contour: Contour,
    pub normalization: f64,
}

impl MellinWeight {
    pub fn new(b_list: Vec<f64>, normalization: f64) -> Result<Self> {
        let w = Self {
            b_list,
            contour: Contour::Saddle,
            normalization,
        };
        w.validate()?;
        Ok(w)
    }

    /// `1 + max(0, −min b)`: a line safely right of all poles.
    pub fn default_abscissa(b_list: &[f64]) -> f64 {
        1.0 + (-min_of(b_list)).max(0.0)
    }

    pub fn with_fixed_contour(mut self, c: f64) -> Result<Self> {
        self.contour = Contour::Fixed(c);
        self.validate()?;
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.b_list.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.b_list.len() < 2 {
            return Err(GncsError::Shape(format!(
                "G^{{m,0}}_{{0,m}} needs m >= 2, got m = {}",
                self.b_list.len()
            )));
        }
        if !(self.normalization > 0.0) {
            return Err(GncsError::Domain(format!(
                "normalization must be positive, got {}",
                self.normalization
            )));
        }
        if let Contour::Fixed(c) = self.contour {
            if !(c > -min_of(&self.b_list)) {
                return Err(GncsError::Domain(format!(
                    "contour abscissa {c} must exceed -min(b) = {}",
                    -min_of(&self.b_list)
                )));
            }
        }
        Ok(())
    }
}

fn min_of(b: &[f64]) -> f64 {
    b.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Real saddle point of `Σ ln Γ(bⱼ + s) − s ln t`.
pub fn saddle_abscissa(b_list: &[f64], t: f64) -> Result<f64> {
    let ln_t = t.ln();
    let pole = -min_of(b_list);
    let slope = |s: f64| -> Result<f64> {
        let mut acc = -ln_t;
        for b in b_list {
            acc += digamma(b + s)?;
        }
        Ok(acc)
    };
    let mut lo = pole + 1e-12;
    let mut hi = pole + 1.0;
    while slope(hi)? < 0.0 {
        lo = hi;
        hi = pole + 2.0 * (hi - pole);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn log_integrand(b_list: &[f64], s: Complex64, ln_t: f64) -> Result<Complex64> {
    let mut acc = -s * ln_t;
    for b in b_list {
        acc += log_gamma_complex(s + b)?;
    }
    Ok(acc)
}

/// `normalization × G^{m,0}_{0,m}(t | b)`.
pub fn meijer_g_weight(w: &MellinWeight, t: f64, tolerance: f64) -> Result<f64> {
    w.validate()?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(GncsError::Domain(format!("meijer_g_weight requires t > 0, got {t}")));
    }
    let c = match w.contour {
        Contour::Saddle => saddle_abscissa(&w.b_list, t)?,
        Contour::Fixed(c) => c,
    };
    let ln_t = t.ln();
    let f0 = log_integrand(&w.b_list, Complex64::new(c, 0.0), ln_t)?.re;
    let rel = |u: f64| -> Result<Complex64> {
        Ok((log_integrand(&w.b_list, Complex64::new(c, u), ln_t)? - f0).exp())
    };

    // |∏Γ(x + iu)| decreases monotonically in |u|
    let cutoff = tolerance * 1e-3;
    let mut upper = 1.0;
    while rel(upper)?.norm() > cutoff {
        upper *= 1.5;
        if upper > 1e4 {
            return Err(GncsError::Convergence(format!(
                "Mellin–Barnes integrand does not decay at t = {t}"
            )));
        }
    }

    let mut failure = None;
    let integral = integrate_breakpoints(
        |u: f64| match rel(u) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        },
        &[-upper, 0.0, upper],
        QuadOptions {
            abs_tol: 0.0,
            rel_tol: tolerance.max(1e-15),
            max_panels: 2000,
        },
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    let v = integral.value;
    if v.im.abs() > IMAG_RESIDUE_TOL * v.re.abs().max(f64::MIN_POSITIVE) && v.im.abs() > 1e-300 {
        return Err(GncsError::Convergence(format!(
            "Mellin–Barnes integral at t = {t} left an imaginary residue {:.3e} against {:.3e}",
            v.im, v.re
        )));
    }
    Ok(w.normalization * (f0.exp() / (2.0 * PI)) * v.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate;
    use crate::specfun::bessel::bessel_k;
    use crate::specfun::gamma::log_gamma;
    use approx::assert_relative_eq;

    fn g(b: &[f64], t: f64) -> f64 {
        meijer_g_weight(&MellinWeight::new(b.to_vec(), 1.0).unwrap(), t, 1e-12).unwrap()
    }

    #[test]
    fn order_two_is_bessel_k0() {
        let t: f64 = 1.0;
        let expected = 2.0 * bessel_k(0.0, 2.0 * t.sqrt()).unwrap();
        assert_relative_eq!(g(&[0.0, 0.0], t), expected, max_relative = 1e-10);
    }

    #[test]
    fn order_two_is_bessel_k_nu() {
        let (nu, t): (f64, f64) = (0.75, 2.0);
        let expected = 2.0 * t.powf(nu / 2.0) * bessel_k(nu, 2.0 * t.sqrt()).unwrap();
        assert_relative_eq!(g(&[0.0, nu], t), expected, max_relative = 1e-10);
    }

    #[test]
    fn saddle_and_fixed_contours_agree_in_the_validated_range() {
        let b = vec![0.0, 1.0, 2.0, 2.0];
        let c = MellinWeight::default_abscissa(&b);
        let fixed = MellinWeight::new(b.clone(), 1.0).unwrap().with_fixed_contour(c).unwrap();
        let saddle = MellinWeight::new(b, 1.0).unwrap();
        for &t in &[1e-3, 0.1, 1.0, 5.0, 25.0] {
            let a = meijer_g_weight(&fixed, t, 1e-13).unwrap();
            let s = meijer_g_weight(&saddle, t, 1e-13).unwrap();
            assert_relative_eq!(a, s, max_relative = 1e-8);
        }
    }

    #[test]
    fn mellin_moments_equal_gamma_products() {
        // r = 3, λ = 3/2 parameter block
        let b = [0.0, 1.0, 2.0, 2.0];
        for n in 0..=2 {
            let nf = n as f64;
            // ∫₀^∞ tⁿ G dt in v = ln t
            let moment = integrate(
                |v: f64| {
                    let t = v.exp();
                    t.powf(nf + 1.0) * g(&b, t)
                },
                (1e-14f64).ln(),
                (2e5f64).ln(),
                QuadOptions::rel(1e-10),
            )
            .unwrap()
            .value;
            let expected: f64 = b.iter().map(|bj| log_gamma(bj + nf + 1.0).unwrap()).sum::<f64>().exp();
            assert_relative_eq!(moment, expected, max_relative = 1e-6);
        }
    }

    #[test]
    fn nonnegative_on_probe_range() {
        for r in 2..=4usize {
            for &lambda in &[0.75, 1.5] {
                let mut b = vec![0.0, lambda - 0.5];
                for k in 2..r {
                    let v = lambda + k as f64 - 1.5;
                    b.push(v);
                    b.push(v);
                }
                let mut t: f64 = 1e-3;
                while t <= 25.0 {
                    assert!(g(&b, t) >= 0.0, "negative weight at r={r} λ={lambda} t={t}");
                    t *= 1.7;
                }
            }
        }
    }

    #[test]
    fn shape_and_domain_errors() {
        assert!(matches!(MellinWeight::new(vec![0.5], 1.0), Err(GncsError::Shape(_))));
        assert!(MellinWeight::new(vec![0.0, 0.5], 1.0)
            .unwrap()
            .with_fixed_contour(-0.5)
            .is_err());
        let w = MellinWeight::new(vec![0.0, 0.5], 1.0).unwrap();
        assert!(matches!(meijer_g_weight(&w, 0.0, 1e-12), Err(GncsError::Domain(_))));
    }
}
