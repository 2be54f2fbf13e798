//! Generator moments, quadrature squeezing and photon statistics.
//!
//! Every moment is available two ways: as a direct sum over Fock
//! amplitudes, which is authoritative, and from the hypergeometric closed
//! forms, which are compared against it.

pub mod sweep;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GncsError, Result};
use crate::specfun::{log_gamma, pfq, PfqParams, TERM_CAP};
use crate::states::{coefficient_ratio, normalization_series, FockCoefficients, GncsSpec};
use crate::summation::{Compensated, CompensatedComplex};

/// Largest tail bound accepted by `expectations_direct`.
pub const MAX_TAIL: f64 = 1e-13;
/// Relative tail left out of the n⁴-weighted moment sums.
pub const MOMENT_TAIL: f64 = 1e-18;
/// Relative deviation above which a closed form is reported.
pub const DISCREPANCY_THRESHOLD: f64 = 1e-8;
/// s_i below −SQUEEZE_THRESHOLD counts as squeezing.
pub const SQUEEZE_THRESHOLD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpectationSet {
    pub jp: Complex64,
    pub jm: Complex64,
    pub jp2: Complex64,
    pub jm2: Complex64,
    pub jpjm: f64,
    pub j3: f64,
    pub n_mean: f64,
    pub n2_mean: f64,
}

impl ExpectationSet {
    /// (name, value) pairs in a fixed order.
    pub fn entries(&self) -> [(&'static str, Complex64); 8] {
        let re = |x: f64| Complex64::new(x, 0.0);
        [
            ("<J+>", self.jp),
            ("<J->", self.jm),
            ("<J+^2>", self.jp2),
            ("<J-^2>", self.jm2),
            ("<J+J->", re(self.jpjm)),
            ("<J3>", re(self.j3)),
            ("<N>", re(self.n_mean)),
            ("<N^2>", re(self.n2_mean)),
        ]
    }
}

pub fn expectations_direct(s: &FockCoefficients) -> Result<ExpectationSet> {
    if !(s.tail_bound() <= MAX_TAIL) {
        return Err(GncsError::Precision(format!(
            "state truncated with tail bound {:e}, moments need <= {MAX_TAIL:e}",
            s.tail_bound()
        )));
    }
    let kappa = s.params().kappa();
    let last = moment_cutoff(s);
    let ext = s.extended(last + 2);
    let c = ext.amplitudes();
    let mut norm = Compensated::new();
    let mut jp = CompensatedComplex::new();
    let mut jp2 = CompensatedComplex::new();
    let mut jpjm = Compensated::new();
    let mut n_mean = Compensated::new();
    let mut n2_mean = Compensated::new();
    let mut j3 = Compensated::new();
    for n in 0..=last {
        let nf = n as f64;
        let p = c[n].norm_sqr();
        norm.add(p);
        jp.add(c[n + 1].conj() * c[n] * ((nf + 1.0) * (nf + kappa)).sqrt());
        jp2.add(c[n + 2].conj() * c[n] * ((nf + 1.0) * (nf + 2.0) * (nf + kappa) * (nf + kappa + 1.0)).sqrt());
        jpjm.add(p * nf * (nf + kappa - 1.0));
        j3.add(p * (nf + 0.5 * kappa));
        n_mean.add(p * nf);
        n2_mean.add(p * nf * nf);
    }
    let norm = norm.value();
    let jp = jp.value() / norm;
    let jp2 = jp2.value() / norm;
    Ok(ExpectationSet {
        jp,
        jm: jp.conj(),
        jp2,
        jm2: jp2.conj(),
        jpjm: jpjm.value() / norm,
        j3: j3.value() / norm,
        n_mean: n_mean.value() / norm,
        n2_mean: n2_mean.value() / norm,
    })
}

/// Index past which |cₙ|²(n+κ+2)⁴ sums to less than MOMENT_TAIL of the total.
fn moment_cutoff(s: &FockCoefficients) -> usize {
    let kappa = s.params().kappa();
    let weight = |n: usize, p: f64| p * (n as f64 + kappa + 2.0).powi(4);
    let mut total = Compensated::new();
    for (n, c) in s.amplitudes().iter().enumerate() {
        total.add(weight(n, c.norm_sqr()));
    }
    let mut n = s.n_max();
    let mut c = s.amplitudes()[n];
    let mut prev = weight(n, c.norm_sqr());
    while prev > 0.0 && n < TERM_CAP {
        n += 1;
        c *= coefficient_ratio(s.spec(), n as u64);
        let w = weight(n, c.norm_sqr());
        total.add(w);
        let q = w / prev;
        prev = w;
        if q < 1.0 && w * q / (1.0 - q) < MOMENT_TAIL * total.value() {
            break;
        }
    }
    n
}

fn series(numerator: &[f64], denominator: &[f64], t: f64, tol: f64) -> Result<f64> {
    Ok(pfq(&PfqParams::real(numerator, denominator, t), tol)?.value.re)
}

/// λ+k−1/2 for k = 2 … r−1, shifted by `shift`, each repeated `times`.
fn block(lambda: f64, r: u32, shift: f64, times: usize) -> Vec<f64> {
    (2..r)
        .flat_map(|k| std::iter::repeat(lambda + k as f64 - 0.5 + shift).take(times))
        .collect()
}

/// Γ(λ+3/2)/Γ(λ+r−1/2).
fn gamma_ratio(lambda: f64, r: u32, shift: f64) -> Result<f64> {
    Ok((log_gamma(lambda + 1.5 + shift)? - log_gamma(lambda + r as f64 - 0.5 + shift)?).exp())
}

/// The closed forms as printed, with the elided parameter lists filled in
/// by their two-parameters-per-k pattern.
pub fn expectations_closed(spec: &GncsSpec, tolerance: f64) -> Result<ExpectationSet> {
    spec.validate()?;
    let (lambda, r) = (spec.lambda(), spec.r());
    if r < 2 {
        return Err(GncsError::Unsupported(
            "the closed-form moments need r >= 2; use the direct sums for r = 1".into(),
        ));
    }
    let kappa = lambda + 0.5;
    let t = spec.z_abs * spec.z_abs;
    let zbar = spec.z().conj();
    let m = normalization_series(spec, tolerance)?;

    // ⟨J₊⟩: ₀F₂ᵣ₋₃(; λ+1/2, {λ+k−1/2, λ+k+1/2}_{k≥2}; t)
    let mut d = vec![kappa];
    for k in 2..r {
        let a = lambda + k as f64 - 0.5;
        d.extend([a, a + 1.0]);
    }
    let jp = zbar * gamma_ratio(lambda, r, 0.0)? * series(&[], &d, t, tolerance)? / m;

    // ⟨J₊²⟩: ₁F₂ᵣ₋₂([λ+5/2]; λ+1/2, λ+5/2, {λ+k−1/2, λ+k+3/2}_{k≥2}; t)
    let mut d = vec![kappa, kappa + 2.0];
    for k in 2..r {
        let a = lambda + k as f64 - 0.5;
        d.extend([a, a + 2.0]);
    }
    let pref2 = gamma_ratio(lambda, r, 0.0)? * gamma_ratio(lambda, r, 1.0)?;
    let jp2 = zbar * zbar * pref2 * series(&[kappa + 2.0], &d, t, tolerance)? / m;

    // ⟨J₊J₋⟩: ₀F₂ᵣ₋₃(; λ+1/2, {λ+k+1/2 ×2}_{k≥2}; t)
    let mut d = vec![kappa];
    d.extend(block(lambda, r, 1.0, 2));
    let jpjm = gamma_ratio(lambda, r, 0.0)?.powi(2) * t * series(&[], &d, t, tolerance)? / m;

    // ⟨J₃⟩: (λ+1/2) ₂F₂ᵣ₋₁([λ/2+5/4, λ+1/2]; λ/2+1/4, λ+1/2, λ+1/2, {λ+k−1/2 ×2}_{k≥2}; t)
    let mut d = vec![0.5 * lambda + 0.25, kappa, kappa];
    d.extend(block(lambda, r, 0.0, 2));
    let j3 = kappa * series(&[0.5 * lambda + 1.25, kappa], &d, t, tolerance)? / m;

    // shared denominator ₀F₂ᵣ₋₃(; λ+1/2, {λ+k−1/2 ×2}_{k≥2}; t) = M
    let mut d0 = vec![kappa];
    d0.extend(block(lambda, r, 0.0, 2));
    let m0 = series(&[], &d0, t, tolerance)?;

    // ⟨N̂⟩: t/(λ+1/2) (Γ(λ+5/2)/Γ(λ+r+1/2))² ₀F₂ᵣ₋₃(; λ+3/2, {λ+k+1/2 ×2}_{k≥2}; t)
    let mut d = vec![kappa + 1.0];
    d.extend(block(lambda, r, 1.0, 2));
    let n_mean = t / kappa * gamma_ratio(lambda, r, 1.0)?.powi(2) * series(&[], &d, t, tolerance)? / m0;

    // ⟨N̂²⟩: t/(λ+1/2) (Γ(λ+3/2)/Γ(λ+r−1/2))² ₁F₂ᵣ₋₂([2]; 1, λ+3/2, {λ+k+1/2 ×2}_{k≥2}; t)
    let mut d = vec![1.0, kappa + 1.0];
    d.extend(block(lambda, r, 1.0, 2));
    let n2_mean = t / kappa * gamma_ratio(lambda, r, 0.0)?.powi(2) * series(&[2.0], &d, t, tolerance)? / m0;

    Ok(ExpectationSet {
        jp,
        jm: jp.conj(),
        jp2,
        jm2: jp2.conj(),
        jpjm,
        j3,
        n_mean,
        n2_mean,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub quantity: String,
    pub direct: Complex64,
    pub closed: Complex64,
    pub relative_deviation: f64,
}

/// Closed forms that deviate from the direct sums by more than `threshold`.
pub fn discrepancies(direct: &ExpectationSet, closed: &ExpectationSet, threshold: f64) -> Vec<Discrepancy> {
    direct
        .entries()
        .iter()
        .zip(closed.entries())
        .filter_map(|((name, d), (_, c))| {
            let scale = d.norm().max(c.norm());
            let dev = if scale == 0.0 { 0.0 } else { (d - c).norm() / scale };
            (dev > threshold).then(|| Discrepancy {
                quantity: name.to_string(),
                direct: *d,
                closed: c,
                relative_deviation: dev,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureReport {
    pub var_x1: f64,
    pub var_x2: f64,
    pub j3_abs: f64,
    pub s1: f64,
    pub s2: f64,
}

impl QuadratureReport {
    pub fn squeezed_x1(&self) -> bool {
        self.s1 < -SQUEEZE_THRESHOLD
    }

    pub fn squeezed_x2(&self) -> bool {
        self.s2 < -SQUEEZE_THRESHOLD
    }

    /// var_x1 · var_x2 − |⟨J₃⟩|²/4.
    pub fn uncertainty_excess(&self) -> f64 {
        self.var_x1 * self.var_x2 - 0.25 * self.j3_abs * self.j3_abs
    }
}

/// Variances of X₁ = (J₊+J₋)/2 and X₂ = (J₋−J₊)/2i and the squeezing factors.
///
/// ⟨X₁⟩ = Re⟨J₋⟩ and ⟨X₂⟩ = Im⟨J₋⟩; the second moments use J₋J₊ = J₊J₋ + 2J₃.
pub fn quadratures(e: &ExpectationSet) -> Result<QuadratureReport> {
    let j3_abs = e.j3.abs();
    if j3_abs == 0.0 {
        return Err(GncsError::DegenerateDenominator("|<J3>| = 0".into()));
    }
    let common = 2.0 * e.jpjm + 2.0 * e.j3;
    let cross = (e.jp2 + e.jm2).re;
    let var_x1 = (common + cross) / 4.0 - e.jm.re * e.jm.re;
    let var_x2 = (common - cross) / 4.0 - e.jm.im * e.jm.im;
    let half = 0.5 * j3_abs;
    Ok(QuadratureReport {
        var_x1,
        var_x2,
        j3_abs,
        s1: (var_x1 - half) / half,
        s2: (var_x2 - half) / half,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatisticsReport {
    pub g2: f64,
    pub q: f64,
}

pub fn statistics(e: &ExpectationSet) -> Result<StatisticsReport> {
    if !(e.n_mean > 0.0) {
        return Err(GncsError::UndefinedStatistics(
            "g2 is undefined when <N> = 0".into(),
        ));
    }
    let g2 = (e.n2_mean - e.n_mean) / (e.n_mean * e.n_mean);
    Ok(StatisticsReport {
        g2,
        q: e.n_mean * (g2 - 1.0),
    })
}

/// Candidate values of the r = 1 correlation constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct G2Candidates {
    /// 1 + 1/(1 + λ/2), as printed.
    pub printed: f64,
    /// 1 + 1/(λ + 1/2), from the negative-binomial distribution.
    pub derived: f64,
}

pub fn g2_candidates_r1(lambda: f64) -> G2Candidates {
    G2Candidates {
        printed: 1.0 + 1.0 / (1.0 + 0.5 * lambda),
        derived: 1.0 + 1.0 / (lambda + 0.5),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{build_state, DEFAULT_TOLERANCE};
    use approx::assert_relative_eq;

    fn direct(lambda: f64, r: u32, z_abs: f64, phi: f64) -> ExpectationSet {
        let spec = GncsSpec::new(lambda, r, z_abs, phi).unwrap();
        expectations_direct(&build_state(&spec, DEFAULT_TOLERANCE).unwrap()).unwrap()
    }

    #[test]
    fn vacuum_moments() {
        let e = direct(0.7, 3, 0.0, 0.0);
        assert_eq!(e.jp, Complex64::new(0.0, 0.0));
        assert_eq!(e.jpjm, 0.0);
        assert_eq!(e.n_mean, 0.0);
        assert_relative_eq!(e.j3, 0.35 + 0.25, max_relative = 1e-15);
        let q = quadratures(&e).unwrap();
        assert_relative_eq!(q.var_x1, e.j3 / 2.0, max_relative = 1e-15);
        assert_relative_eq!(q.var_x2, e.j3 / 2.0, max_relative = 1e-15);
        assert_eq!(q.s1, 0.0);
        assert_eq!(q.s2, 0.0);
        assert!(matches!(statistics(&e), Err(GncsError::UndefinedStatistics(_))));
    }

    #[test]
    fn adjoint_pairs_are_exact() {
        let e = direct(0.25, 4, 1.3, 0.8);
        assert_eq!(e.jm, e.jp.conj());
        assert_eq!(e.jm2, e.jp2.conj());
    }

    #[test]
    fn barut_girardello_moments() {
        // J₋|z⟩ = z|z⟩ for r = 2
        let z = Complex64::from_polar(1.0, 0.4);
        let e = direct(0.5, 2, 1.0, 0.4);
        assert!((e.jm - z).norm() < 1e-14);
        assert!((e.jm2 - z * z).norm() < 1e-14);
        let closed = expectations_closed(&GncsSpec::new(0.5, 2, 1.0, 0.4).unwrap(), 1e-16).unwrap();
        assert_relative_eq!(e.jpjm, closed.jpjm, max_relative = 1e-12);
    }

    #[test]
    fn number_mean_at_r2() {
        // (t/(λ+1/2)) ₀F₁(;λ+3/2;t)/₀F₁(;λ+1/2;t)
        let (lambda, t) = (0.5f64, 2.3f64);
        let e = direct(lambda, 2, t.sqrt(), 0.0);
        let num = crate::specfun::pfq_real(&[], &[lambda + 1.5], t, 1e-16).unwrap();
        let den = crate::specfun::pfq_real(&[], &[lambda + 0.5], t, 1e-16).unwrap();
        assert_relative_eq!(e.n_mean, t / (lambda + 0.5) * num / den, max_relative = 1e-13);
    }

    #[test]
    fn j3_is_shifted_number() {
        let e = direct(1.2, 3, 2.0, 0.1);
        assert_relative_eq!(e.j3, e.n_mean + 0.6 + 0.25, max_relative = 1e-14);
    }

    #[test]
    fn closed_forms_reject_r1() {
        let spec = GncsSpec::new(0.5, 1, 0.5, 0.0).unwrap();
        assert!(matches!(expectations_closed(&spec, 1e-15), Err(GncsError::Unsupported(_))));
    }

    #[test]
    fn mandel_sign_follows_g2() {
        for &(lambda, r, z) in &[(0.0, 3, 2.0), (0.75, 1, 0.6), (1.5, 2, 1.0)] {
            let s = statistics(&direct(lambda, r, z, 0.0)).unwrap();
            assert_eq!(s.q.signum(), (s.g2 - 1.0).signum());
        }
    }

    #[test]
    fn poor_truncation_is_rejected() {
        let spec = GncsSpec::new(0.5, 1, 0.9, 0.0).unwrap();
        let s = build_state(&spec, 1e-6).unwrap();
        assert!(matches!(expectations_direct(&s), Err(GncsError::Precision(_))));
    }
}
