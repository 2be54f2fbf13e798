//! Resolution-of-identity weight and its moment conditions.
//!
//! With w(t) = π K(√t)/M(√t) and t = |z|², completeness on the plane reduces to
//!
//! ```text
//! ∫₀^∞ tⁿ w(t) dt = n! ∏_{k=1}^{r−1} [(λ+k−1/2)ₙ]² / (λ+1/2)ₙ,   n = 0, 1, …
//! ```
//!
//! The weight is a Meijer G^{m,0}_{0,m} with m = 2r − 2 and
//! b = (0, λ−1/2, λ+1/2, λ+1/2, …, λ+r−5/2, λ+r−5/2), scaled by 1/∏Γ(bⱼ+1)
//! so that the zeroth moment is exactly 1.

use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraParams;
use crate::error::{GncsError, Result};
use crate::quad::{integrate, integrate_breakpoints, QuadOptions, QuadValue, Vector};
use crate::specfun::{log_gamma, log_pochhammer, meijer_g_weight, MellinWeight};

/// Validated range of t for `weight`.
pub const T_MIN: f64 = 1e-3;
pub const T_MAX: f64 = 25.0;
/// Accuracy requested from each weight evaluation.
pub const WEIGHT_TOLERANCE: f64 = 1e-12;

/// G-function parameter vector for deformation r ≥ 2.
pub fn b_list(p: &AlgebraParams) -> Vec<f64> {
    let mut b = vec![0.0, p.lambda - 0.5];
    for k in 2..p.r {
        let v = p.lambda + k as f64 - 1.5;
        b.push(v);
        b.push(v);
    }
    b
}

fn require_deformed(p: &AlgebraParams) -> Result<()> {
    p.validate()?;
    if p.r < 2 {
        return Err(GncsError::Unsupported(
            "the r = 1 states live on the unit disk; no half-line Mellin weight applies".into(),
        ));
    }
    Ok(())
}

/// ln of the constant 1/∏Γ(bⱼ+1) fixed by ∫w = 1.
pub fn log_anchored_constant(p: &AlgebraParams) -> Result<f64> {
    let mut l = 0.0;
    for b in b_list(p) {
        l -= log_gamma(b + 1.0)?;
    }
    Ok(l)
}

/// Ratio of the constant in front of G in the printed measure,
/// 2Γ(λ+1/2)/[∏_{k=1}^{r−1} Γ(λ+k−1/2)]², to the moment-anchored one.
pub fn printed_prefactor_ratio(p: &AlgebraParams) -> Result<f64> {
    require_deformed(p)?;
    let mut printed = 2f64.ln() + log_gamma(p.kappa())?;
    for k in 1..p.r {
        printed -= 2.0 * log_gamma(p.lambda + k as f64 - 0.5)?;
    }
    Ok((printed - log_anchored_constant(p)?).exp())
}

/// The anchored Mellin weight, usable on the whole half-line.
pub fn mellin_weight(p: &AlgebraParams) -> Result<MellinWeight> {
    require_deformed(p)?;
    MellinWeight::new(b_list(p), log_anchored_constant(p)?.exp())
}

/// w(t) on the validated range [T_MIN, T_MAX].
pub fn weight(p: &AlgebraParams, t: f64) -> Result<f64> {
    require_deformed(p)?;
    if !(T_MIN..=T_MAX).contains(&t) {
        return Err(GncsError::Range(format!(
            "weight is validated on t in [{T_MIN}, {T_MAX}], got t = {t}"
        )));
    }
    meijer_g_weight(&mellin_weight(p)?, t, WEIGHT_TOLERANCE)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentTarget {
    pub n: u32,
    pub target: f64,
}

/// n! ∏_{k=1}^{r−1} [(λ+k−1/2)ₙ]² / (λ+1/2)ₙ.
pub fn moment_target(p: &AlgebraParams, n: u32) -> Result<MomentTarget> {
    p.validate()?;
    let mut l = log_gamma(n as f64 + 1.0)? - log_pochhammer(p.kappa(), n)?.0;
    for k in 1..p.r {
        l += 2.0 * log_pochhammer(p.lambda + k as f64 - 0.5, n)?.0;
    }
    Ok(MomentTarget {
        n,
        target: l.exp(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentCheck {
    pub n: u32,
    pub target: f64,
    pub integral: f64,
    pub relative_error: f64,
}

const CHUNK: usize = 4;
// tails are followed until the scaled integrand drops below this fraction of its peak
const TAIL_CUTOFF: f64 = 1e-16;

/// ∫₀^∞ tⁿ w(t) dt for each n, compared with the moment targets.
///
/// [T_MIN, T_MAX] is covered by dyadic panels in t; both tails are
/// integrated in v = ln t out to where the integrand is negligible.
pub fn verify_moments(p: &AlgebraParams, n_list: &[u32], tolerance: f64) -> Result<Vec<MomentCheck>> {
    require_deformed(p)?;
    let w = mellin_weight(p)?;
    let mut out = Vec::with_capacity(n_list.len());
    for chunk in n_list.chunks(CHUNK) {
        let targets: Vec<MomentTarget> = chunk.iter().map(|&n| moment_target(p, n)).collect::<Result<_>>()?;
        let mut failure = None;
        let mut scaled = |t: f64, jacobian: f64| -> Vector<CHUNK> {
            let g = match meijer_g_weight(&w, t, WEIGHT_TOLERANCE * 1e2) {
                Ok(g) => g,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            };
            let mut v = [0.0; CHUNK];
            for (slot, m) in v.iter_mut().zip(&targets) {
                *slot = jacobian * t.powi(m.n as i32) * g / m.target;
            }
            Vector(v)
        };

        let mut core_points = vec![T_MIN];
        while core_points.last().unwrap() * 2.0 < T_MAX {
            core_points.push(core_points.last().unwrap() * 2.0);
        }
        core_points.push(T_MAX);
        let opts = QuadOptions::rel(tolerance);
        let core = integrate_breakpoints(|t| scaled(t, 1.0), &core_points, opts)?;

        let in_log = |v: f64, s: &mut dyn FnMut(f64, f64) -> Vector<CHUNK>| {
            let t = v.exp();
            s(t, t)
        };
        let upper_end = tail_end(T_MAX.ln(), 1.0, 700.0, |v| in_log(v, &mut scaled));
        let upper = integrate(|v| in_log(v, &mut scaled), T_MAX.ln(), upper_end, opts)?;
        let lower_end = tail_end(T_MIN.ln(), -1.0, 700.0, |v| in_log(v, &mut scaled));
        let lower = integrate(|v| in_log(v, &mut scaled), lower_end, T_MIN.ln(), opts)?;
        if let Some(e) = failure {
            return Err(e);
        }

        let total = core.value + upper.value + lower.value;
        for (i, m) in targets.iter().enumerate() {
            let integral = total.0[i] * m.target;
            out.push(MomentCheck {
                n: m.n,
                target: m.target,
                integral,
                relative_error: (integral - m.target).abs() / m.target,
            });
        }
    }
    Ok(out)
}

/// Steps v from `start` in `direction` until the integrand has fallen below
/// TAIL_CUTOFF times its largest value seen, or `span` is exhausted.
fn tail_end<F: FnMut(f64) -> Vector<CHUNK>>(start: f64, direction: f64, span: f64, mut f: F) -> f64 {
    let mut peak: f64 = 0.0;
    let mut v = start;
    let mut step = 0.5;
    while (v - start).abs() < span {
        let next = v + direction * step;
        let m = f(next).magnitude();
        peak = peak.max(m);
        v = next;
        if m <= TAIL_CUTOFF * peak.max(f64::MIN_POSITIVE) {
            break;
        }
        step = (step * 1.5).min(8.0);
    }
    v
}

/// 2 t^{ν/2} K_ν(2√t) / Γ(λ+1/2) with ν = λ − 1/2: the r = 2 weight in closed form.
pub fn bessel_weight_r2(lambda: f64, t: f64) -> Result<f64> {
    let nu = lambda - 0.5;
    let k = crate::specfun::bessel_k(nu, 2.0 * t.sqrt())?;
    Ok(2.0 * t.powf(nu / 2.0) * k * (-log_gamma(lambda + 0.5)?).exp())
}

/// One row of a measure curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightSample {
    pub t: f64,
    pub weight: f64,
}

/// w(t) on `points` values evenly spaced over [t_min, t_max].
pub fn weight_curve(p: &AlgebraParams, t_min: f64, t_max: f64, points: usize) -> Result<Vec<WeightSample>> {
    if points < 2 {
        return Err(GncsError::Size(format!("a curve needs at least 2 points, got {points}")));
    }
    (0..points)
        .map(|i| {
            let t = t_min + (t_max - t_min) * i as f64 / (points - 1) as f64;
            Ok(WeightSample {
                t,
                weight: weight(p, t)?,
            })
        })
        .collect()
}

/// Sign changes of the first difference along a curve.
pub fn slope_sign_changes(samples: &[WeightSample]) -> usize {
    let diffs: Vec<f64> = samples.windows(2).map(|w| w[1].weight - w[0].weight).collect();
    diffs
        .windows(2)
        .filter(|d| d[0] != 0.0 && d[1] != 0.0 && d[0].signum() != d[1].signum())
        .count()
}
