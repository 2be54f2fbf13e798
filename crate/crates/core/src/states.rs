//! Generalized nonlinear coherent states in the |n, λ⟩ basis.
//!
//! ```text
//! cₙ = M^{−1/2} zⁿ ∏_{k=1}^{r−1} Γ(λ+k−1/2)/Γ(n+λ+k−1/2) · √(Γ(n+λ+1/2) / (Γ(λ+1/2) n!))
//! M  = ₁F₂ᵣ₋₂([λ+1/2]; [λ+1/2, λ+1/2, …, λ+r−3/2, λ+r−3/2]; |z|²)
//! ```
//!
//! Amplitudes are produced by the ratio cₙ/cₙ₋₁ with magnitudes carried as
//! logarithms, then rescaled by the largest term before exponentiation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraParams;
use crate::error::{GncsError, Result};
use crate::specfun::{pfq, PfqParams, TERM_CAP};
use crate::summation::{Compensated, CompensatedComplex};

/// Default relative truncation tolerance on the norm.
pub const DEFAULT_TOLERANCE: f64 = 1e-14;
/// Smallest basis kept, whatever the tail estimate says.
pub const MIN_N_MAX: usize = 30;
/// For r = 1 the label must satisfy |z| < 1 − UNIT_DISK_MARGIN.
pub const UNIT_DISK_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GncsSpec {
    pub params: AlgebraParams,
    pub z_abs: f64,
    pub z_phase: f64,
}

impl GncsSpec {
    pub fn new(lambda: f64, r: u32, z_abs: f64, z_phase: f64) -> Result<Self> {
        Self::from_params(AlgebraParams::new(lambda, r)?, z_abs, z_phase)
    }

    pub fn from_params(params: AlgebraParams, z_abs: f64, z_phase: f64) -> Result<Self> {
        let s = Self {
            params,
            z_abs,
            z_phase,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if !(self.z_abs >= 0.0) || !self.z_abs.is_finite() {
            return Err(GncsError::Domain(format!(
                "|z| must be finite and nonnegative, got {}",
                self.z_abs
            )));
        }
        if !self.z_phase.is_finite() {
            return Err(GncsError::Domain(format!(
                "phase of z must be finite, got {}",
                self.z_phase
            )));
        }
        if self.params.r == 1 && self.z_abs >= 1.0 - UNIT_DISK_MARGIN {
            return Err(GncsError::Divergence(format!(
                "r = 1 states need |z| < 1, got |z| = {}",
                self.z_abs
            )));
        }
        Ok(())
    }

    pub fn z(&self) -> Complex64 {
        Complex64::from_polar(self.z_abs, self.z_phase)
    }

    pub fn lambda(&self) -> f64 {
        self.params.lambda
    }

    pub fn r(&self) -> u32 {
        self.params.r
    }

    pub fn with_phase(&self, z_phase: f64) -> Self {
        Self { z_phase, ..*self }
    }
}

/// ln|cₙ/cₙ₋₁| − ln|z| = ½ ln((n+λ−1/2)/n) − Σ_{k=1}^{r−1} ln(n+λ+k−3/2).
fn log_ratio_modulus(p: &AlgebraParams, n: u64) -> f64 {
    let nf = n as f64;
    let mut l = 0.5 * ((nf + p.lambda - 0.5).ln() - nf.ln());
    for k in 1..p.r {
        l -= (nf + p.lambda + k as f64 - 1.5).ln();
    }
    l
}

/// cₙ/cₙ₋₁ for n ≥ 1.
pub fn coefficient_ratio(spec: &GncsSpec, n: u64) -> Complex64 {
    assert!(n >= 1, "coefficient_ratio is defined for n >= 1");
    if spec.z_abs == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let modulus = (spec.z_abs.ln() + log_ratio_modulus(&spec.params, n)).exp();
    Complex64::from_polar(modulus, spec.z_phase)
}

/// Denominator list of the normalization series: λ+k−1/2 twice for k = 1 … r−1.
pub fn normalization_denominators(p: &AlgebraParams) -> Vec<f64> {
    (1..p.r)
        .flat_map(|k| {
            let v = p.lambda + k as f64 - 0.5;
            [v, v]
        })
        .collect()
}

/// M(|z|) from the hypergeometric series.
pub fn normalization_series(spec: &GncsSpec, tolerance: f64) -> Result<f64> {
    spec.validate()?;
    let params = PfqParams::real(
        &[spec.params.kappa()],
        &normalization_denominators(&spec.params),
        spec.z_abs * spec.z_abs,
    );
    Ok(pfq(&params, tolerance)?.value.re)
}

/// Normalized, truncated Fock amplitudes of one state.
#[derive(Debug, Clone, PartialEq)]
pub struct FockCoefficients {
    spec: GncsSpec,
    amplitudes: Vec<Complex64>,
    tail_bound: f64,
    log_norm: f64,
    peak_index: usize,
}

impl FockCoefficients {
    pub fn spec(&self) -> &GncsSpec {
        &self.spec
    }

    pub fn params(&self) -> &AlgebraParams {
        &self.spec.params
    }

    pub fn z(&self) -> Complex64 {
        self.spec.z()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn n_max(&self) -> usize {
        self.amplitudes.len() - 1
    }

    /// Bound on Σ_{n > n_max} |cₙ|² for the normalized state.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// ln M, the log of the pre-normalization norm.
    pub fn log_norm(&self) -> f64 {
        self.log_norm
    }

    pub fn normalization(&self) -> f64 {
        self.log_norm.exp()
    }

    /// Index of the largest |cₙ|; magnitudes decrease beyond it.
    pub fn peak_index(&self) -> usize {
        self.peak_index
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_check() - 1.0).abs() <= 1e-12
    }

    /// Σ|cₙ|² over the retained amplitudes.
    pub fn norm_check(&self) -> f64 {
        let mut acc = Compensated::new();
        for c in &self.amplitudes {
            acc.add(c.norm_sqr());
        }
        acc.value()
    }

    /// Continues the amplitude recurrence up to `n_max`; shorter requests
    /// return the state unchanged.
    pub fn extended(&self, n_max: usize) -> FockCoefficients {
        let mut out = self.clone();
        while out.amplitudes.len() <= n_max {
            let n = out.amplitudes.len();
            let next = out.amplitudes[n - 1] * coefficient_ratio(&self.spec, n as u64);
            out.amplitudes.push(next);
        }
        out
    }

    pub fn record(&self) -> StateRecord {
        StateRecord {
            lambda: self.spec.lambda(),
            r: self.spec.r(),
            z_abs: self.spec.z_abs,
            z_phase: self.spec.z_phase,
            n_max: self.n_max(),
            tail_bound: self.tail_bound,
            normalization: self.normalization(),
            amplitudes: self.amplitudes.iter().map(|c| [c.re, c.im]).collect(),
            norm_check: self.norm_check(),
        }
    }
}

/// JSON form of a state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    pub lambda: f64,
    pub r: u32,
    pub z_abs: f64,
    pub z_phase: f64,
    pub n_max: usize,
    pub tail_bound: f64,
    pub normalization: f64,
    pub amplitudes: Vec<[f64; 2]>,
    pub norm_check: f64,
}

pub fn build_state(spec: &GncsSpec, tolerance: f64) -> Result<FockCoefficients> {
    spec.validate()?;
    if !(tolerance > 0.0) {
        return Err(GncsError::Domain(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    let p = &spec.params;
    if spec.z_abs == 0.0 {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); MIN_N_MAX + 1];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        return Ok(FockCoefficients {
            spec: *spec,
            amplitudes,
            tail_bound: 0.0,
            log_norm: 0.0,
            peak_index: 0,
        });
    }

    let ln_z = spec.z_abs.ln();
    let disk_limit = if p.r == 1 { spec.z_abs * spec.z_abs } else { 0.0 };
    // log |cₙ| (unnormalized, c₀ = 1)
    let mut logs = vec![0.0];
    let mut running = Compensated::new();
    running.add(1.0);
    let mut log_peak = 0.0;
    let mut tail = f64::INFINITY;

    for n in 1..TERM_CAP as u64 {
        let l = logs[n as usize - 1] + ln_z + log_ratio_modulus(p, n);
        logs.push(l);
        if l > log_peak {
            // rescale the accumulated norm to the new peak
            let shrink = (2.0 * (log_peak - l)).exp();
            let mut rescaled = Compensated::new();
            rescaled.add(running.value() * shrink);
            running = rescaled;
            log_peak = l;
        }
        running.add((2.0 * (l - log_peak)).exp());

        // |c_{n+1}/c_n|² bounds every later ratio: it decreases for r ≥ 2
        // and stays below max(q, |z|²) for r = 1
        let q = (2.0 * (ln_z + log_ratio_modulus(p, n + 1))).exp();
        let rho = q.max(disk_limit);
        if rho < 1.0 {
            tail = (2.0 * (l - log_peak)).exp() * q / (1.0 - rho);
            if n as usize >= MIN_N_MAX && tail < tolerance * running.value() {
                break;
            }
        }
        if n as usize == TERM_CAP - 1 {
            return Err(GncsError::Convergence(format!(
                "state amplitudes did not reach tolerance {tolerance:e} within {TERM_CAP} terms"
            )));
        }
    }

    let scaled_norm = running.value();
    let log_norm = 2.0 * log_peak + scaled_norm.ln();
    let half = 0.5 * log_norm;
    let mut peak_index = 0;
    let amplitudes = logs
        .iter()
        .enumerate()
        .map(|(n, l)| {
            if *l == log_peak {
                peak_index = n;
            }
            Complex64::from_polar((l - half).exp(), n as f64 * spec.z_phase)
        })
        .collect();
    Ok(FockCoefficients {
        spec: *spec,
        amplitudes,
        tail_bound: tail / scaled_norm,
        log_norm,
        peak_index,
    })
}

fn check_same_lambda(a: f64, b: f64) -> Result<()> {
    if a != b {
        return Err(GncsError::Domain(format!(
            "states with λ = {a} and λ = {b} live in different Hilbert spaces"
        )));
    }
    Ok(())
}

/// ⟨a|b⟩ = Σ c̄ₙ(a) cₙ(b), with the shorter state extended to the longer basis.
pub fn overlap(a: &FockCoefficients, b: &FockCoefficients) -> Result<Complex64> {
    check_same_lambda(a.params().lambda, b.params().lambda)?;
    let n_max = a.n_max().max(b.n_max());
    let (a, b) = (a.extended(n_max), b.extended(n_max));
    let mut acc = CompensatedComplex::new();
    for (x, y) in a.amplitudes.iter().zip(&b.amplitudes) {
        acc.add(x.conj() * y);
    }
    Ok(acc.value())
}

/// Hypergeometric form of ⟨z₁|z₂⟩ for deformations r₁, r₂:
/// ₁F_{r₁+r₂−2}([λ+1/2]; {λ+k−1/2}_{k<r₁} ∪ {λ+k−1/2}_{k<r₂}; z̄₁z₂) / √(M₁M₂).
pub fn overlap_closed(a: &GncsSpec, b: &GncsSpec, tolerance: f64) -> Result<Complex64> {
    a.validate()?;
    b.validate()?;
    check_same_lambda(a.lambda(), b.lambda())?;
    let lambda = a.lambda();
    let denominators: Vec<f64> = (1..a.r())
        .chain(1..b.r())
        .map(|k| lambda + k as f64 - 0.5)
        .collect();
    let series = pfq(
        &PfqParams::new(vec![lambda + 0.5], denominators, a.z().conj() * b.z()),
        tolerance,
    )?
    .value;
    let ma = normalization_series(a, tolerance)?;
    let mb = normalization_series(b, tolerance)?;
    Ok(series / (ma * mb).sqrt())
}

/// e^{−itH} applied to the state: cₙ → e^{−it(2n+λ+1/2)} cₙ, label phase φ → φ − 2t.
pub fn evolve(s: &FockCoefficients, t: f64) -> FockCoefficients {
    let kappa = s.params().kappa();
    let amplitudes = s
        .amplitudes
        .iter()
        .enumerate()
        .map(|(n, c)| c * Complex64::from_polar(1.0, -t * (2.0 * n as f64 + kappa)))
        .collect();
    FockCoefficients {
        spec: s.spec.with_phase(s.spec.z_phase - 2.0 * t),
        amplitudes,
        ..s.clone()
    }
}

/// f(n) = Γ(n+λ+r−1/2) / Γ(n+λ+3/2), expanded as a finite product.
pub fn nonlinearity_function(p: &AlgebraParams, n: u64) -> f64 {
    let base = n as f64 + p.lambda;
    if p.r == 1 {
        return 1.0 / (base + 0.5);
    }
    (2..p.r).map(|k| base + k as f64 - 0.5).product()
}

/// ‖f(N̂)J₋ s − z s‖ over the components n < n_max.
pub fn verify_eigenstate(s: &FockCoefficients, spec: &GncsSpec) -> Result<f64> {
    check_same_lambda(s.params().lambda, spec.lambda())?;
    if s.params().r != spec.r() {
        return Err(GncsError::Domain(format!(
            "state has r = {}, eigenvalue relation requested for r = {}",
            s.params().r,
            spec.r()
        )));
    }
    let p = s.params();
    let z = spec.z();
    let c = &s.amplitudes;
    let mut acc = Compensated::new();
    for n in 0..s.n_max() {
        let nf = n as f64;
        let lowered = c[n + 1] * ((nf + 1.0) * (nf + p.kappa())).sqrt();
        let defect = lowered * nonlinearity_function(p, n as u64) - z * c[n];
        acc.add(defect.norm_sqr());
    }
    Ok(acc.value().sqrt())
}

/// The r = 1 state whose label is (z/|z|) tanh|z|, i.e. the Klauder–Perelomov state.
pub fn klauder_perelomov(lambda: f64, z_abs: f64, z_phase: f64) -> Result<GncsSpec> {
    GncsSpec::new(lambda, 1, z_abs.tanh(), z_phase)
}

/// λ values of the standard probe grid.
pub const PROBE_LAMBDAS: [f64; 4] = [-0.25, 0.25, 0.75, 1.5];
/// |z|² values for r ≥ 2.
pub const PROBE_ZSQ: [f64; 4] = [0.04, 1.0, 4.0, 16.0];
/// |z|² values for r = 1, inside the unit disk.
pub const PROBE_ZSQ_DISK: [f64; 4] = [0.04, 0.25, 0.49, 0.81];
pub const PROBE_PHASES: [f64; 2] = [0.0, std::f64::consts::FRAC_PI_3];

/// The 4 × 5 × 4 × 2 grid over (λ, r, |z|², φ).
pub fn probe_grid() -> Vec<GncsSpec> {
    let mut out = Vec::with_capacity(160);
    for &lambda in &PROBE_LAMBDAS {
        for r in 1..=5u32 {
            let zsq = if r == 1 { &PROBE_ZSQ_DISK } else { &PROBE_ZSQ };
            for &t in zsq {
                for &phi in &PROBE_PHASES {
                    out.push(GncsSpec::new(lambda, r, t.sqrt(), phi).expect("probe grid is valid"));
                }
            }
        }
    }
    out
}
