//! Log-gamma, Pochhammer and digamma kernels.
//!
//! Real arguments are reduced into `[1.5, 2.5]` (Taylor series about 2 with
//! `ζ(k) − 1` coefficients) or shifted to `x ≥ 8` (Stirling). Complex
//! arguments use the shifted Stirling series only.

use num_complex::Complex64;

use crate::error::{GncsError, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_6;

// ζ(k) − 1 for k = 2, 3, ...
const ZETA_MINUS_ONE: [f64; 30] = [
    0.644_934_066_848_226_436_47,
    0.202_056_903_159_594_285_4,
    0.082_323_233_711_138_191_516,
    0.036_927_755_143_369_926_331,
    0.017_343_061_984_449_139_715,
    0.008_349_277_381_922_826_839_8,
    0.004_077_356_197_944_339_378_7,
    0.002_008_392_826_082_214_417_9,
    0.000_994_575_127_818_085_337_15,
    0.000_494_188_604_119_464_558_7,
    0.000_246_086_553_308_048_298_64,
    0.000_122_713_347_578_489_146_75,
    6.124_813_505_870_482_925_9e-5,
    3.058_823_630_702_049_355_2e-5,
    1.528_225_940_865_187_173_3e-5,
    7.637_197_637_899_762_273_6e-6,
    3.817_293_264_999_839_856_5e-6,
    1.908_212_716_553_938_925_7e-6,
    9.539_620_338_727_961_131_5e-7,
    4.769_329_867_878_064_631_2e-7,
    2.384_505_027_277_329_9e-7,
    1.192_199_259_653_110_730_7e-7,
    5.960_818_905_125_947_961_2e-8,
    2.980_350_351_465_228_018_6e-8,
    1.490_155_482_836_504_123_5e-8,
    7.450_711_789_835_429_492e-9,
    3.725_334_024_788_457_054_8e-9,
    1.862_659_723_513_049_006_4e-9,
    9.313_274_324_196_681_828_7e-10,
    4.656_629_065_033_784_073e-10,
];

// B_{2k} / (2k (2k − 1))
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

// B_{2k} / (2k)
const DIGAMMA_ASYMPT: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_741_78;

fn stirling_real(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut corr = 0.0;
    let mut pow = inv;
    for c in STIRLING {
        corr += c * pow;
        pow *= inv2;
    }
    (x - 0.5) * x.ln() - x + LN_SQRT_2PI + corr
}

/// ln Γ(2 + ε) for |ε| ≤ 0.5.
fn ln_gamma_near_two(eps: f64) -> f64 {
    let mut sum = 0.0;
    let mut pow = -eps;
    for (i, zm1) in ZETA_MINUS_ONE.iter().enumerate() {
        pow *= -eps;
        let k = (i + 2) as f64;
        sum += zm1 * pow / k;
    }
    (1.0 - EULER_GAMMA) * eps + sum
}

/// Natural logarithm of Γ(x) for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(GncsError::Domain(format!(
            "log_gamma requires a positive finite argument, got {x}"
        )));
    }
    Ok(ln_gamma_pos(x))
}

pub(crate) fn ln_gamma_pos(x: f64) -> f64 {
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    if x >= 8.0 {
        return stirling_real(x);
    }
    if x < 1.5 {
        // Γ(x) = Γ(x + k) / (x (x+1) ... (x+k-1))
        let mut prod = 1.0;
        let mut y = x;
        while y < 1.5 {
            prod *= y;
            y += 1.0;
        }
        return ln_gamma_near_two(y - 2.0) - prod.ln();
    }
    if x <= 2.5 {
        return ln_gamma_near_two(x - 2.0);
    }
    let mut prod = 1.0;
    let mut y = x;
    while y > 2.5 {
        y -= 1.0;
        prod *= y;
    }
    ln_gamma_near_two(y - 2.0) + prod.ln()
}

/// Returns `(ln |(a)_n|, sign of (a)_n)`.
pub fn log_pochhammer(a: f64, n: u32) -> Result<(f64, f64)> {
    let mut log_abs = 0.0;
    let mut sign = 1.0;
    let mut prod = 1.0_f64;
    let mut k = 0u32;
    // walk explicitly through the non-positive factors
    while k < n && a + k as f64 <= 0.0 {
        let f = a + k as f64;
        if f == 0.0 {
            return Err(GncsError::Domain(format!(
                "Pochhammer ({a})_{n} has a zero factor at k = {k}"
            )));
        }
        if f < 0.0 {
            sign = -sign;
        }
        prod *= f.abs();
        if prod > 1e250 || prod < 1e-250 {
            log_abs += prod.ln();
            prod = 1.0;
        }
        k += 1;
    }
    log_abs += prod.ln();
    if k < n {
        let start = a + k as f64;
        let remaining = n - k;
        if remaining <= 16 {
            let mut p = 1.0;
            for j in 0..remaining {
                p *= start + j as f64;
            }
            log_abs += p.ln();
        } else {
            log_abs += ln_gamma_pos(start + remaining as f64) - ln_gamma_pos(start);
        }
    }
    Ok((log_abs, sign))
}

/// A logarithm of Γ(z) for Re z > 0. The imaginary part is not reduced to
/// the principal branch; callers exponentiate the result.
pub fn log_gamma_complex(z: Complex64) -> Result<Complex64> {
    if !(z.re > 0.0) {
        return Err(GncsError::Domain(format!(
            "complex log_gamma requires Re z > 0, got {z}"
        )));
    }
    let mut prod = Complex64::new(1.0, 0.0);
    let mut w = z;
    while w.re < 10.0 {
        prod *= w;
        w += 1.0;
    }
    let shift = prod.ln();
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut corr = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        corr += pow * c;
        pow *= inv2;
    }
    Ok((w - 0.5) * w.ln() - w + LN_SQRT_2PI + corr - shift)
}

/// Digamma ψ(x) for x > 0.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(GncsError::Domain(format!("digamma requires x > 0, got {x}")));
    }
    let mut acc = 0.0;
    let mut y = x;
    while y < 10.0 {
        acc -= 1.0 / y;
        y += 1.0;
    }
    let inv2 = 1.0 / (y * y);
    let mut pow = inv2;
    let mut series = 0.0;
    for c in DIGAMMA_ASYMPT {
        series += c * pow;
        pow *= inv2;
    }
    Ok(acc + y.ln() - 0.5 / y - series)
}

/// Γ(x) for moderate positive x, via `exp(ln Γ)`.
pub fn gamma(x: f64) -> Result<f64> {
    log_gamma(x).map(f64::exp)
}
