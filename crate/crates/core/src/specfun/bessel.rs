//! Modified Bessel function of the second kind from its cosh-integral
//! representation `K_ν(x) = ∫₀^∞ exp(−x cosh u) cosh(νu) du`.

use crate::error::{GncsError, Result};
use crate::quad::{integrate_breakpoints, QuadOptions};

pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(GncsError::Domain(format!("bessel_k requires x > 0, got {x}")));
    }
    let nu = nu.abs();
    // x (cosh u − 1) = 2x sinh²(u/2); integrate the e^{x}-scaled integrand
    let exponent = |u: f64| {
        let s = (0.5 * u).sinh();
        -2.0 * x * s * s + nu * u
    };
    let mut upper = 1.0;
    while exponent(upper) > -60.0 {
        upper *= 1.5;
    }
    // the scaled integrand peaks where sinh u = ν / x
    let peak = (nu / x).asinh();
    let mut points = vec![0.0];
    if peak > 0.0 && peak < upper {
        points.push(peak);
    }
    points.push(upper);
    let value = integrate_breakpoints(
        |u: f64| {
            let s = (0.5 * u).sinh();
            (-2.0 * x * s * s).exp() * (nu * u).cosh()
        },
        &points,
        QuadOptions::rel(1e-13),
    )?
    .value;
    Ok(value * (-x).exp())
}
