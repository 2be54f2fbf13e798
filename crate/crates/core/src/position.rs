//! Half-line wavefunctions of the Fock basis and of the coherent states.
//!
//! ```text
//! ⟨x|n,λ⟩ = (−1)ⁿ √(2 n!/Γ(n+λ+1/2)) x^λ e^{−x²/2} Lₙ^{λ−1/2}(x²)
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraParams;
use crate::error::{GncsError, Result};
use crate::quad::{integrate_breakpoints, QuadOptions};
use crate::specfun::{log_gamma, pfq, PfqParams};
use crate::states::{build_state, normalization_series, FockCoefficients, GncsSpec};

/// Largest index accepted by `orthogonality_check`.
pub const ORTHOGONALITY_MAX_INDEX: usize = 40;
/// Distance kept beyond the classical turning point √(4n+2λ+1).
pub const TURNING_MARGIN: f64 = 8.0;

const RESCALE: f64 = 1e150;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WavefunctionSample {
    pub x: f64,
    pub value: Complex64,
}

fn require_positive(x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(GncsError::Domain(format!("wavefunctions live on x > 0, got x = {x}")));
    }
    Ok(())
}

/// ⟨x|n,λ⟩ for n = 0 … n_max at one x. The Laguerre recurrence runs on
/// rescaled values so that x^λ e^{−x²/2} never underflows on its own.
pub fn fock_wavefunctions(p: &AlgebraParams, n_max: usize, x: f64) -> Result<Vec<f64>> {
    p.validate()?;
    require_positive(x)?;
    let alpha = p.lambda - 0.5;
    let y = x * x;
    // ln of √(2 n!/Γ(n+κ)), advanced by ½ ln(n/(n+κ−1))
    let mut log_pref = 0.5 * (2f64.ln() - log_gamma(p.kappa())?);
    let log_seed = p.lambda * x.ln() - 0.5 * y;
    let mut exponent = 0.0;
    let mut out = Vec::with_capacity(n_max + 1);
    let mut prev = 0.0;
    let mut cur = 1.0;
    for n in 0..=n_max {
        if n > 0 {
            let nf = n as f64;
            log_pref += 0.5 * (nf.ln() - (nf + p.kappa() - 1.0).ln());
            let k = nf - 1.0;
            let next = ((2.0 * k + 1.0 + alpha - y) * cur - (k + alpha) * prev) / (k + 1.0);
            prev = cur;
            cur = next;
            if cur.abs() > RESCALE {
                cur /= RESCALE;
                prev /= RESCALE;
                exponent += RESCALE.ln();
            }
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        out.push(sign * cur * (log_pref + log_seed + exponent).exp());
    }
    Ok(out)
}

pub fn fock_wavefunction(p: &AlgebraParams, n: usize, x: f64) -> Result<f64> {
    Ok(fock_wavefunctions(p, n, x)?[n])
}

/// Cut-off beyond which every ⟨x|n,λ⟩ with n ≤ n_max is negligible.
pub fn x_cut(p: &AlgebraParams, n_max: usize) -> f64 {
    (4.0 * n_max as f64 + 2.0 * p.lambda + 1.0).sqrt() + TURNING_MARGIN
}

/// ∫₀^{x_cut} f(x) dx, with x = u² on [0, 1] to tame the x^{2λ} endpoint.
fn half_line<F: FnMut(f64) -> f64>(mut f: F, cut: f64, opts: QuadOptions) -> Result<f64> {
    let near = integrate_breakpoints(|u: f64| if u == 0.0 { 0.0 } else { 2.0 * u * f(u * u) }, &[0.0, 0.5, 1.0], opts)?;
    let mut points = vec![1.0];
    while *points.last().unwrap() + 1.0 < cut {
        points.push(points.last().unwrap() + 1.0);
    }
    points.push(cut);
    let far = integrate_breakpoints(f, &points, opts)?;
    Ok(near.value + far.value)
}

/// ∫₀^∞ ⟨x|n,λ⟩⟨x|m,λ⟩ dx.
pub fn orthogonality_check(p: &AlgebraParams, n: usize, m: usize) -> Result<f64> {
    if n.max(m) > ORTHOGONALITY_MAX_INDEX {
        return Err(GncsError::Range(format!(
            "orthogonality quadrature is validated for n, m <= {ORTHOGONALITY_MAX_INDEX}"
        )));
    }
    let top = n.max(m);
    let opts = QuadOptions {
        abs_tol: 1e-12,
        rel_tol: 1e-12,
        max_panels: 4000,
    };
    half_line(
        |x| {
            let psi = fock_wavefunctions(p, top, x).expect("x > 0 inside the quadrature");
            psi[n] * psi[m]
        },
        x_cut(p, top),
        opts,
    )
}

/// Σₙ cₙ ⟨x|n,λ⟩ for an already built state.
pub fn state_wavefunction(s: &FockCoefficients, x: f64) -> Result<Complex64> {
    let psi = fock_wavefunctions(s.params(), s.n_max(), x)?;
    Ok(s.amplitudes().iter().zip(&psi).map(|(c, f)| c * f).sum())
}

pub fn gncs_wavefunction(spec: &GncsSpec, x: f64, tolerance: f64) -> Result<Complex64> {
    state_wavefunction(&build_state(spec, tolerance)?, x)
}

/// ∫₀^∞ |⟨x|ψ⟩|² dx.
pub fn wavefunction_norm(s: &FockCoefficients) -> Result<f64> {
    half_line(
        |x| state_wavefunction(s, x).expect("x > 0 inside the quadrature").norm_sqr(),
        x_cut(s.params(), s.n_max()),
        QuadOptions::rel(1e-11),
    )
}

/// Compact forms of the r = 2 and r = 3 wavefunctions.
///
/// r = 2: [(−z/|z|)^{1/2−λ} 2x / I_α(2|z|)]^{1/2} e^{−z−x²/2} J_α(2ix√z), α = λ−1/2,
/// with J_α(w) = (w/2)^α/Γ(α+1) ₀F₁(;α+1;−w²/4) and
/// I_α(2|z|) = |z|^α/Γ(α+1) ₀F₁(;α+1;|z|²); principal branches throughout.
///
/// r = 3: ₀F₃(;λ+1/2, λ+3/2, λ+3/2; |z|²)^{−1/2} x^{2λ} e^{−x²} ₀F₁(;λ+3/2; z(x²−1)).
pub fn gncs_wavefunction_closed(spec: &GncsSpec, x: f64) -> Result<Complex64> {
    spec.validate()?;
    require_positive(x)?;
    let lambda = spec.lambda();
    let z = spec.z();
    let tol = 1e-16;
    match spec.r() {
        2 => {
            if spec.z_abs == 0.0 {
                return Err(GncsError::Domain("the r = 2 compact form needs z != 0".into()));
            }
            let alpha = lambda - 0.5;
            let gamma = log_gamma(alpha + 1.0)?.exp();
            let f_i = pfq(&PfqParams::real(&[], &[alpha + 1.0], spec.z_abs * spec.z_abs), tol)?.value.re;
            let bessel_i = spec.z_abs.powf(alpha) / gamma * f_i;
            let half_w = Complex64::new(0.0, x) * z.sqrt();
            let f_j = pfq(&PfqParams::new(vec![], vec![alpha + 1.0], x * x * z), tol)?.value;
            let bessel_j = half_w.powf(alpha) / gamma * f_j;
            let unit = -z / spec.z_abs;
            let prefactor = unit.powf(0.5 - lambda) * (2.0 * x / bessel_i);
            Ok(prefactor.sqrt() * (-z - 0.5 * x * x).exp() * bessel_j)
        }
        3 => {
            let f03 = pfq(
                &PfqParams::real(&[], &[lambda + 0.5, lambda + 1.5, lambda + 1.5], spec.z_abs * spec.z_abs),
                tol,
            )?
            .value
            .re;
            let f01 = pfq(&PfqParams::new(vec![], vec![lambda + 1.5], z * (x * x - 1.0)), tol)?.value;
            Ok(f01 * (x.powf(2.0 * lambda) * (-x * x).exp() / f03.sqrt()))
        }
        r => Err(GncsError::Unsupported(format!(
            "compact wavefunctions exist for r = 2 and r = 3 only, got r = {r}"
        ))),
    }
}

/// Closed form against the series at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormPoint {
    pub x: f64,
    pub series: Complex64,
    pub closed: Complex64,
    /// |closed| / |series| − 1.
    pub modulus_error: f64,
    /// arg(closed / series).
    pub phase_difference: f64,
}

pub fn compare_closed_form(spec: &GncsSpec, xs: &[f64], tolerance: f64) -> Result<Vec<ClosedFormPoint>> {
    let s = build_state(spec, tolerance)?;
    xs.iter()
        .map(|&x| {
            let series = state_wavefunction(&s, x)?;
            let closed = gncs_wavefunction_closed(spec, x)?;
            Ok(ClosedFormPoint {
                x,
                series,
                closed,
                modulus_error: closed.norm() / series.norm() - 1.0,
                phase_difference: (closed / series).arg(),
            })
        })
        .collect()
}

/// The series wavefunction with the closed-form normalization written out:
/// √(2/(M Γ(λ+1/2))) Σ (−z)ⁿ ∏_k Γ(λ+k−1/2)/Γ(n+λ+k−1/2) x^λ e^{−x²/2} Lₙ^{λ−1/2}(x²).
pub fn expansion_wavefunction(spec: &GncsSpec, x: f64, tolerance: f64) -> Result<Complex64> {
    let s = build_state(spec, tolerance)?;
    let m = normalization_series(spec, tolerance)?;
    let p = spec.params;
    let alpha = p.lambda - 0.5;
    let y = x * x;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut coeff = Complex64::new(1.0, 0.0);
    for n in 0..=s.n_max() {
        if n > 0 {
            let nf = n as f64;
            let mut d = 1.0;
            for k in 1..p.r {
                d *= nf + p.lambda + k as f64 - 1.5;
            }
            coeff *= -spec.z() / d;
        }
        sum += coeff * crate::specfun::laguerre(n, alpha, y);
    }
    let pref = (2.0 / (m * log_gamma(p.kappa())?.exp())).sqrt() * x.powf(p.lambda) * (-0.5 * y).exp();
    Ok(sum * pref)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::laguerre;
    use approx::assert_relative_eq;

    fn params(lambda: f64) -> AlgebraParams {
        AlgebraParams::new(lambda, 2).unwrap()
    }

    #[test]
    fn ground_state_closed_form() {
        let p = params(0.75);
        for &x in &[0.1f64, 1.0, 3.3] {
            let expected = (2.0 / log_gamma(1.25).unwrap().exp()).sqrt() * x.powf(0.75) * (-x * x / 2.0).exp();
            assert_relative_eq!(fock_wavefunction(&p, 0, x).unwrap(), expected, max_relative = 1e-14);
        }
    }

    #[test]
    fn matches_direct_formula() {
        let p = params(1.5);
        let x: f64 = 1.7;
        for n in [1usize, 5, 17] {
            let nf = n as f64;
            let pref = (2.0 * (log_gamma(nf + 1.0).unwrap() - log_gamma(nf + 2.0).unwrap()).exp()).sqrt();
            let expected = (-1f64).powi(n as i32) * pref * x.powf(1.5) * (-x * x / 2.0).exp() * laguerre(n, 1.0, x * x);
            assert_relative_eq!(fock_wavefunction(&p, n, x).unwrap(), expected, max_relative = 1e-12);
        }
    }

    #[test]
    fn sign_alternates_near_origin() {
        let p = params(0.3);
        let psi = fock_wavefunctions(&p, 8, 1e-3).unwrap();
        for (n, v) in psi.iter().enumerate() {
            assert_eq!(v.signum(), if n % 2 == 0 { 1.0 } else { -1.0 });
        }
    }

    #[test]
    fn far_tail_does_not_overflow() {
        let p = params(0.75);
        let psi = fock_wavefunctions(&p, 900, 60.0).unwrap();
        assert!(psi.iter().all(|v| v.is_finite()));
        assert!(psi[0] == 0.0 || psi[0].abs() < 1e-300);
    }

    #[test]
    fn orthonormal_examples() {
        let p = params(0.75);
        assert_relative_eq!(orthogonality_check(&p, 0, 0).unwrap(), 1.0, epsilon = 1e-10);
        assert!(orthogonality_check(&p, 0, 1).unwrap().abs() < 1e-10);
        assert!(orthogonality_check(&params(1.5), 3, 7).unwrap().abs() < 1e-8);
        assert!(matches!(orthogonality_check(&p, 41, 0), Err(GncsError::Range(_))));
    }

    #[test]
    fn vacuum_wavefunction() {
        let spec = GncsSpec::new(0.75, 3, 0.0, 0.0).unwrap();
        let v = gncs_wavefunction(&spec, 1.2, 1e-14).unwrap();
        assert_relative_eq!(v.re, fock_wavefunction(&spec.params, 0, 1.2).unwrap(), max_relative = 1e-14);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn rejects_nonpositive_x_and_unsupported_r() {
        let p = params(0.75);
        assert!(fock_wavefunction(&p, 0, 0.0).is_err());
        let spec = GncsSpec::new(0.75, 4, 1.0, 0.0).unwrap();
        assert!(matches!(gncs_wavefunction_closed(&spec, 1.0), Err(GncsError::Unsupported(_))));
    }

    #[test]
    fn r3_compact_form_at_unit_x() {
        let spec = GncsSpec::new(1.5, 3, 1.5, 0.0).unwrap();
        let v = gncs_wavefunction_closed(&spec, 1.0).unwrap();
        let m = normalization_series(&spec, 1e-16).unwrap();
        assert_relative_eq!(v.re, (-1f64).exp() / m.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn written_out_expansion_equals_fock_sum() {
        let spec = GncsSpec::new(0.75, 3, 1.2, 0.5).unwrap();
        for &x in &[0.4, 1.1, 2.5] {
            let a = expansion_wavefunction(&spec, x, 1e-15).unwrap();
            let b = gncs_wavefunction(&spec, x, 1e-15).unwrap();
            assert!((a - b).norm() < 1e-12 * b.norm());
        }
    }
}
