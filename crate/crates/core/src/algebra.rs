//! Truncated Fock-space representation of the su(1,1) generators.
//!
//! On the basis |n, λ⟩, n = 0 … n_max:
//!
//! ```text
//! J₊ |n−1⟩ = √(n (n + λ − 1/2)) |n⟩
//! J₋ |n⟩   = √(n (n + λ − 1/2)) |n−1⟩
//! J₃ |n⟩   = (n + λ/2 + 1/4) |n⟩
//! ```
//!
//! The top index n_max is a truncation boundary: commutators evaluated on
//! the column n_max see a missing |n_max + 1⟩ and do not close.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GncsError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgebraParams {
    pub lambda: f64,
    pub r: u32,
}

impl AlgebraParams {
    pub fn new(lambda: f64, r: u32) -> Result<Self> {
        let p = Self { lambda, r };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > -0.5) || !self.lambda.is_finite() {
            return Err(GncsError::Domain(format!(
                "lambda must satisfy lambda > -1/2, got {}",
                self.lambda
            )));
        }
        if self.r < 1 {
            return Err(GncsError::Domain(format!(
                "deformation r must satisfy r >= 1, got {}",
                self.r
            )));
        }
        Ok(())
    }

    /// λ + 1/2, the index that recurs throughout the coefficient algebra.
    pub fn kappa(&self) -> f64 {
        self.lambda + 0.5
    }
}

/// √(n (n + λ − 1/2)); zero for n = 0.
pub fn ladder_element(p: &AlgebraParams, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let nf = n as f64;
    (nf * (nf + p.lambda - 0.5)).sqrt()
}

pub fn j3_eigenvalue(p: &AlgebraParams, n: u64) -> f64 {
    n as f64 + p.lambda / 2.0 + 0.25
}

pub fn hamiltonian_eigenvalue(p: &AlgebraParams, n: u64) -> f64 {
    2.0 * n as f64 + p.lambda + 0.5
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Band {
    /// Nonzero entries only at (n, n−1).
    Raising,
    /// Nonzero entries only at (n−1, n).
    Lowering,
    Diagonal,
}

/// Banded matrix of bandwidth ≤ 1 on indices 0 … n_max.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    band: Band,
    // Raising/Lowering: entries[n−1] couples n−1 and n. Diagonal: entries[n].
    entries: Vec<f64>,
    n_max: usize,
}

impl TruncatedOperator {
    pub fn band(&self) -> Band {
        self.band
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dimension(&self) -> usize {
        self.n_max + 1
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Matrix element ⟨row| A |col⟩.
    pub fn get(&self, row: usize, col: usize) -> f64 {
        match self.band {
            Band::Diagonal if row == col => self.entries[row],
            Band::Raising if row == col + 1 => self.entries[col],
            Band::Lowering if col == row + 1 => self.entries[row],
            _ => 0.0,
        }
    }

    pub fn transpose(&self) -> Self {
        let band = match self.band {
            Band::Raising => Band::Lowering,
            Band::Lowering => Band::Raising,
            Band::Diagonal => Band::Diagonal,
        };
        Self {
            band,
            entries: self.entries.clone(),
            n_max: self.n_max,
        }
    }

    pub fn apply_real(&self, v: &[f64]) -> Vec<f64> {
        let dim = self.dimension();
        let mut out = vec![0.0; dim];
        match self.band {
            Band::Diagonal => {
                for n in 0..dim {
                    out[n] = self.entries[n] * v[n];
                }
            }
            Band::Raising => {
                for n in 1..dim {
                    out[n] = self.entries[n - 1] * v[n - 1];
                }
            }
            Band::Lowering => {
                for n in 1..dim {
                    out[n - 1] = self.entries[n - 1] * v[n];
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let dim = self.dimension();
        let zero = Complex64::new(0.0, 0.0);
        let mut out = vec![zero; dim];
        match self.band {
            Band::Diagonal => {
                for n in 0..dim {
                    out[n] = v[n] * self.entries[n];
                }
            }
            Band::Raising => {
                for n in 1..dim {
                    out[n] = v[n - 1] * self.entries[n - 1];
                }
            }
            Band::Lowering => {
                for n in 1..dim {
                    out[n - 1] = v[n] * self.entries[n - 1];
                }
            }
        }
        out
    }

    pub fn basis_column(&self, n: usize) -> Vec<f64> {
        let mut e = vec![0.0; self.dimension()];
        e[n] = 1.0;
        self.apply_real(&e)
    }
}

/// (AB − BA) applied to the basis vector |n⟩.
pub fn commutator_column(a: &TruncatedOperator, b: &TruncatedOperator, n: usize) -> Vec<f64> {
    let mut e = vec![0.0; a.dimension()];
    e[n] = 1.0;
    let ab = a.apply_real(&b.apply_real(&e));
    let ba = b.apply_real(&a.apply_real(&e));
    ab.iter().zip(&ba).map(|(x, y)| x - y).collect()
}

#[derive(Debug, Clone)]
pub struct Generators {
    pub j_plus: TruncatedOperator,
    pub j_minus: TruncatedOperator,
    pub j3: TruncatedOperator,
    pub number: TruncatedOperator,
}

pub fn build_truncated(p: &AlgebraParams, n_max: usize) -> Result<Generators> {
    p.validate()?;
    if n_max < 2 {
        return Err(GncsError::Size(format!("n_max must be >= 2, got {n_max}")));
    }
    let ladder: Vec<f64> = (1..=n_max as u64).map(|n| ladder_element(p, n)).collect();
    let j3: Vec<f64> = (0..=n_max as u64).map(|n| j3_eigenvalue(p, n)).collect();
    let number: Vec<f64> = (0..=n_max).map(|n| n as f64).collect();
    let op = |band, entries| TruncatedOperator {
        band,
        entries,
        n_max,
    };
    Ok(Generators {
        j_plus: op(Band::Raising, ladder.clone()),
        j_minus: op(Band::Lowering, ladder),
        j3: op(Band::Diagonal, j3),
        number: op(Band::Diagonal, number),
    })
}

/// Largest entry of ([J₊,J₋] + 2J₃)|n⟩ and ([J₃,J₊] − J₊)|n⟩ over the
/// untruncated columns n < n_max, each scaled by max(1, J₃ eigenvalue).
pub fn commutator_defect(g: &Generators) -> (f64, f64) {
    let n_max = g.j3.n_max();
    let mut first: f64 = 0.0;
    let mut second: f64 = 0.0;
    for n in 0..n_max {
        let scale = g.j3.get(n, n).abs().max(1.0);
        let c1 = commutator_column(&g.j_plus, &g.j_minus, n);
        let j3col = g.j3.basis_column(n);
        for (x, y) in c1.iter().zip(&j3col) {
            first = first.max((x + 2.0 * y).abs() / scale);
        }
        let c2 = commutator_column(&g.j3, &g.j_plus, n);
        let jpcol = g.j_plus.basis_column(n);
        for (x, y) in c2.iter().zip(&jpcol) {
            second = second.max((x - y).abs() / scale);
        }
    }
    (first, second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(lambda: f64) -> AlgebraParams {
        AlgebraParams::new(lambda, 2).unwrap()
    }

    #[test]
    fn ladder_examples() {
        assert_eq!(ladder_element(&params(0.5), 1), 1.0);
        assert_eq!(ladder_element(&params(0.5), 0), 0.0);
        assert_relative_eq!(ladder_element(&params(1.5), 2), 6f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn j3_examples() {
        assert_eq!(j3_eigenvalue(&params(0.5), 0), 0.5);
        assert_eq!(j3_eigenvalue(&params(0.0), 3), 3.25);
        let p = params(0.37);
        for n in 1..50 {
            assert_relative_eq!(j3_eigenvalue(&p, n) - j3_eigenvalue(&p, n - 1), 1.0, max_relative = 1e-13);
        }
    }

    #[test]
    fn hamiltonian_examples() {
        assert_eq!(hamiltonian_eigenvalue(&params(0.5), 0), 1.0);
        assert_eq!(hamiltonian_eigenvalue(&params(1.5), 2), 6.0);
        let p = params(-0.2);
        for n in 0..40 {
            assert_relative_eq!(hamiltonian_eigenvalue(&p, n), 2.0 * j3_eigenvalue(&p, n), max_relative = 1e-15);
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(AlgebraParams::new(-0.5, 1).is_err());
        assert!(AlgebraParams::new(0.1, 0).is_err());
        assert!(AlgebraParams::new(f64::NAN, 2).is_err());
        assert!(matches!(build_truncated(&params(0.1), 1), Err(GncsError::Size(_))));
    }

    #[test]
    fn band_structure_and_adjointness() {
        let g = build_truncated(&params(0.75), 12).unwrap();
        for i in 0..=12 {
            for j in 0..=12 {
                if g.j_plus.get(i, j) != 0.0 {
                    assert_eq!(i, j + 1);
                }
                if g.j_minus.get(i, j) != 0.0 {
                    assert_eq!(j, i + 1);
                }
                assert_eq!(g.j_plus.get(i, j), g.j_minus.get(j, i));
            }
        }
        assert_eq!(g.j_plus.transpose(), g.j_minus);
    }

    #[test]
    fn number_operator_is_shifted_j3() {
        let p = params(0.3);
        let g = build_truncated(&p, 60).unwrap();
        for n in 0..=60 {
            assert_eq!(g.number.get(n, n), n as f64);
            let shifted = g.j3.get(n, n) - p.lambda / 2.0 - 0.25;
            assert!((shifted - n as f64).abs() <= 1e-14 * (n as f64).max(1.0));
        }
    }

    #[test]
    fn commutators_close_below_truncation() {
        for &lambda in &[-0.25, 0.25, 0.75, 1.5] {
            let g = build_truncated(&params(lambda), 60).unwrap();
            let (a, b) = commutator_defect(&g);
            assert!(a < 1e-13 && b < 1e-13, "λ={lambda}: {a:e} {b:e}");
        }
    }

    #[test]
    fn truncation_row_breaks_the_algebra() {
        let g = build_truncated(&params(0.75), 10).unwrap();
        let c = commutator_column(&g.j_plus, &g.j_minus, 10);
        let j3 = g.j3.basis_column(10);
        assert!((c[10] + 2.0 * j3[10]).abs() > 1.0);
    }
}
