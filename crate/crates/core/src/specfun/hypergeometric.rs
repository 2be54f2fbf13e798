//! Generalized hypergeometric series `pFq([a]; [b]; x)` with real parameters
//! and complex argument.
//!
//! Terms are advanced by their ratio, with the magnitude carried as a
//! logarithm and the phase as a unit complex number, so individual terms
//! never overflow even when the partial sums are large.

use num_complex::Complex64;

use crate::error::{GncsError, Result};

/// Hard cap on the number of series terms.
pub const TERM_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct PfqParams {
    pub numerator: Vec<f64>,
    pub denominator: Vec<f64>,
    pub argument: Complex64,
}

impl PfqParams {
    pub fn new(numerator: Vec<f64>, denominator: Vec<f64>, argument: Complex64) -> Self {
        Self {
            numerator,
            denominator,
            argument,
        }
    }

    pub fn real(numerator: &[f64], denominator: &[f64], x: f64) -> Self {
        Self::new(numerator.to_vec(), denominator.to_vec(), Complex64::new(x, 0.0))
    }

    /// Numerator parameters that are non-positive integers terminate the series.
    fn terminating_degree(&self) -> Option<usize> {
        self.numerator
            .iter()
            .filter(|a| **a <= 0.0 && a.fract() == 0.0)
            .map(|a| (-a) as usize)
            .min()
    }

    pub fn validate(&self) -> Result<()> {
        for b in &self.denominator {
            if *b <= 0.0 && b.fract() == 0.0 {
                return Err(GncsError::Domain(format!(
                    "denominator parameter {b} is a non-positive integer"
                )));
            }
        }
        if self.terminating_degree().is_some() || self.argument.norm() == 0.0 {
            return Ok(());
        }
        let p = self.numerator.len();
        let q = self.denominator.len();
        if p > q + 1 {
            return Err(GncsError::Shape(format!(
                "{p}F{q} diverges for nonzero argument"
            )));
        }
        if p == q + 1 && self.argument.norm() >= 1.0 {
            return Err(GncsError::Shape(format!(
                "{p}F{q} requires |x| < 1, got |x| = {}",
                self.argument.norm()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: Complex64,
    pub terms_used: usize,
    /// Estimated absolute truncation error.
    pub tail_bound: f64,
}

/// Sums the series until the estimated tail is below `tolerance × |sum|`.
pub fn pfq(params: &PfqParams, tolerance: f64) -> Result<SeriesResult> {
    params.validate()?;
    if !(tolerance > 0.0) {
        return Err(GncsError::Domain(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    let x = params.argument;
    let one = Complex64::new(1.0, 0.0);
    if x.norm() == 0.0 {
        return Ok(SeriesResult {
            value: one,
            terms_used: 1,
            tail_bound: 0.0,
        });
    }
    let terminating = params.terminating_degree();
    let confluent_limit = if params.numerator.len() == params.denominator.len() + 1 {
        x.norm()
    } else {
        0.0
    };

    let mut terms = Terms::new(params);
    let mut sum = one;
    let mut prev_ratio = f64::INFINITY;

    for n in 0..TERM_CAP {
        if terminating == Some(n) {
            return Ok(SeriesResult {
                value: sum,
                terms_used: n + 1,
                tail_bound: 0.0,
            });
        }
        let (term, log_ratio) = terms.advance();
        sum += term;
        let log_mag = terms.log_mag;

        let ratio = log_ratio.exp();
        // geometric extrapolation once the ratio is < 1; for p = q + 1 the
        // later ratios are bounded by max(ratio, |x|), otherwise by the
        // current ratio once it stops increasing
        let rho = if confluent_limit > 0.0 {
            Some(ratio.max(confluent_limit))
        } else if ratio <= prev_ratio {
            Some(ratio)
        } else {
            None
        };
        if let Some(rho) = rho.filter(|r| *r < 1.0) {
            let next = log_mag.exp() * ratio_at(params, x.norm(), n + 1);
            let tail = next / (1.0 - rho);
            if tail <= tolerance * sum.norm() {
                return Ok(SeriesResult {
                    value: sum,
                    terms_used: n + 2,
                    tail_bound: tail,
                });
            }
        }
        prev_ratio = ratio;
    }
    Err(GncsError::Convergence(format!(
        "{}F{} did not reach relative tolerance {tolerance:e} within {TERM_CAP} terms",
        params.numerator.len(),
        params.denominator.len()
    )))
}

/// Term generator: `advance` moves from t_n to t_{n+1} by the ratio
/// `∏(a+n) / ∏(b+n) · x / (n+1)` and returns the new term together with
/// the log of the ratio modulus.
pub struct Terms<'a> {
    params: &'a PfqParams,
    ln_abs_x: f64,
    unit_x: Complex64,
    n: usize,
    log_mag: f64,
    phase: Complex64,
}

impl<'a> Terms<'a> {
    pub fn new(params: &'a PfqParams) -> Self {
        let x = params.argument;
        Self {
            params,
            ln_abs_x: x.norm().ln(),
            unit_x: x / x.norm(),
            n: 0,
            log_mag: 0.0,
            phase: Complex64::new(1.0, 0.0),
        }
    }

    pub fn index(&self) -> usize {
        self.n
    }

    pub fn advance(&mut self) -> (Complex64, f64) {
        let nf = self.n as f64;
        let mut log_ratio = self.ln_abs_x - (nf + 1.0).ln();
        let mut sign = 1.0;
        for a in &self.params.numerator {
            let f = a + nf;
            log_ratio += f.abs().ln();
            if f < 0.0 {
                sign = -sign;
            }
        }
        for b in &self.params.denominator {
            let f = b + nf;
            log_ratio -= f.abs().ln();
            if f < 0.0 {
                sign = -sign;
            }
        }
        self.log_mag += log_ratio;
        self.phase = self.phase * self.unit_x * sign;
        self.n += 1;
        (self.phase * self.log_mag.exp(), log_ratio)
    }
}

fn ratio_at(params: &PfqParams, abs_x: f64, n: usize) -> f64 {
    let nf = n as f64;
    let mut r = abs_x / (nf + 1.0);
    for a in &params.numerator {
        r *= (a + nf).abs();
    }
    for b in &params.denominator {
        r /= (b + nf).abs();
    }
    r
}

/// Convenience wrapper returning only the real part for real arguments.
pub fn pfq_real(numerator: &[f64], denominator: &[f64], x: f64, tolerance: f64) -> Result<f64> {
    pfq(&PfqParams::real(numerator, denominator, x), tolerance).map(|r| r.value.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma::log_gamma;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn bessel_i0_series(x: f64) -> f64 {
        // independent oracle: Σ (x/2)^{2k} / (k!)²
        let q = x * x / 4.0;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..200 {
            term *= q / (k as f64 * k as f64);
            sum += term;
        }
        sum
    }

    #[test]
    fn exponential_series() {
        let r = pfq(&PfqParams::real(&[], &[], 1.0), 1e-15).unwrap();
        assert_relative_eq!(r.value.re, std::f64::consts::E, max_relative = 1e-15);
        assert!(r.tail_bound <= 1e-15 * r.value.norm());
    }

    #[test]
    fn binomial_series() {
        let v = pfq_real(&[1.25], &[], 0.5, 1e-15).unwrap();
        assert_relative_eq!(v, 0.5f64.powf(-1.25), max_relative = 1e-14);
        // ratios increase towards |x| when a < 1
        let v = pfq_real(&[0.25], &[], 0.8, 1e-15).unwrap();
        assert_relative_eq!(v, 0.2f64.powf(-0.25), max_relative = 1e-13);
    }

    #[test]
    fn zero_f_one_is_bessel_i0() {
        // ₀F₁(;1;|z|²) at |z| = 2 equals I₀(4)
        let v = pfq_real(&[], &[1.0], 4.0, 1e-15).unwrap();
        assert_relative_eq!(v, bessel_i0_series(4.0), max_relative = 1e-14);
    }

    #[test]
    fn complex_argument_exponential() {
        let x = Complex64::new(0.3, -2.1);
        let r = pfq(&PfqParams::new(vec![], vec![], x), 1e-15).unwrap();
        assert_relative_eq!(r.value.re, x.exp().re, max_relative = 1e-13);
        assert_relative_eq!(r.value.im, x.exp().im, max_relative = 1e-13);
    }

    #[test]
    fn terminating_series_is_polynomial() {
        // ₁F₁(-2; α+1; x) = 2! L_2^α(x) / (α+1)_2
        let (alpha, x) = (0.5, 1.0);
        let v = pfq_real(&[-2.0], &[alpha + 1.0], x, 1e-15).unwrap();
        let l2 = x * x / 2.0 - (alpha + 2.0) * x + (alpha + 1.0) * (alpha + 2.0) / 2.0;
        assert_relative_eq!(v, 2.0 * l2 / ((alpha + 1.0) * (alpha + 2.0)), max_relative = 1e-15);
    }

    #[test]
    fn shape_errors() {
        let p = PfqParams::real(&[1.0, 2.0, 3.0], &[1.5], 0.1);
        assert!(matches!(pfq(&p, 1e-12), Err(GncsError::Shape(_))));
        let p = PfqParams::real(&[1.0], &[], 1.0);
        assert!(matches!(pfq(&p, 1e-12), Err(GncsError::Shape(_))));
        let p = PfqParams::real(&[1.0], &[-3.0], 0.5);
        assert!(matches!(pfq(&p, 1e-12), Err(GncsError::Domain(_))));
    }

    #[test]
    fn slow_series_hits_term_cap() {
        let p = PfqParams::real(&[1.0], &[], 0.9999);
        assert!(matches!(pfq(&p, 1e-15), Err(GncsError::Convergence(_))));
    }

    fn direct_term(a: &[f64], b: &[f64], x: f64, n: u32) -> f64 {
        let mut l = n as f64 * x.ln() - log_gamma(n as f64 + 1.0).unwrap();
        for ai in a {
            l += log_gamma(ai + n as f64).unwrap() - log_gamma(*ai).unwrap();
        }
        for bi in b {
            l -= log_gamma(bi + n as f64).unwrap() - log_gamma(*bi).unwrap();
        }
        l.exp()
    }

    fn nth_term_by_ratio(a: &[f64], b: &[f64], x: f64, n: u32) -> f64 {
        let params = PfqParams::real(a, b, x);
        let mut terms = Terms::new(&params);
        let mut t = Complex64::new(1.0, 0.0);
        while terms.index() < n as usize {
            t = terms.advance().0;
        }
        t.re
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn ratio_recursion_matches_log_gamma_terms(
            n in 1u32..120,
            a in 0.2f64..4.0,
            b1 in 0.3f64..5.0,
            b2 in 0.3f64..5.0,
            x in 0.1f64..25.0,
        ) {
            let by_ratio = nth_term_by_ratio(&[a], &[b1, b2], x, n);
            let direct = direct_term(&[a], &[b1, b2], x, n);
            prop_assume!(direct > 1e-300);
            prop_assert!(((by_ratio - direct) / direct).abs() < 1e-12);
        }
    }
}
