//! Special-function kernel: log-gamma arithmetic, hypergeometric series,
//! Laguerre polynomials, Bessel K and the Meijer G^{m,0}_{0,m} weight.
//!
//! Everything here is pure and reentrant.

pub mod bessel;
pub mod gamma;
pub mod hypergeometric;
pub mod laguerre;
pub mod meijer;

pub use bessel::bessel_k;
pub use gamma::{digamma, gamma, log_gamma, log_gamma_complex, log_pochhammer};
pub use hypergeometric::{pfq, pfq_real, PfqParams, SeriesResult, TERM_CAP};
pub use laguerre::{laguerre, laguerre_all};
pub use meijer::{meijer_g_weight, Contour, MellinWeight};
