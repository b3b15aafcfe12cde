//! Dense square complex matrices in row-major layout.
//!
//! Everything downstream (observables, states, Bell operators, residual
//! checks) is built on [`ComplexMatrix`]. Dimensions stay small (local
//! dimension up to ~16, joint dimension up to ~256), so the representation is
//! a plain heap vector and the algorithms are the straightforward O(n^2)/O(n^3)
//! loops.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
// Needed for float math in no_std builds; std-linked builds (tests,
// tooling) shadow it with inherent methods.
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Zero matrix of the given dimension.
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex64::ZERO; dim * dim],
        }
    }

    /// Identity matrix of the given dimension.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::ONE);
        }
        m
    }

    /// Builds a matrix from row-major entries, checking shape and finiteness.
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::BadShape {
                dim,
                len: entries.len(),
            });
        }
        let m = Self { dim, entries };
        m.check_finite()?;
        Ok(m)
    }

    /// Builds a matrix by evaluating `f(row, col)`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Convenience constructor from real row-major entries.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::from_entries(
            dim,
            entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.dim + col] = value;
    }

    fn check_finite(&self) -> Result<()> {
        if self
            .entries
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            Ok(())
        } else {
            Err(Error::NonFinite)
        }
    }

    pub(crate) fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            })
        }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Scales by a real factor.
    pub fn scale(&self, factor: f64) -> Self {
        self.scale_complex(Complex64::new(factor, 0.0))
    }

    pub fn scale_complex(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|&z| z * factor).collect(),
        }
    }

    /// Kronecker product; block `(i, j)` of the result equals
    /// `self[i, j] * other`.
    pub fn tensor(&self, other: &Self) -> Self {
        let (da, db) = (self.dim, other.dim);
        let dim = da * db;
        let mut out = Self::zeros(dim);
        for i1 in 0..da {
            for j1 in 0..da {
                let a = self.get(i1, j1);
                if a == Complex64::ZERO {
                    continue;
                }
                for i2 in 0..db {
                    for j2 in 0..db {
                        out.set(i1 * db + i2, j1 * db + j2, a * other.get(i2, j2));
                    }
                }
            }
        }
        out
    }

    /// Largest absolute value over all entries.
    pub fn max_abs_entry(&self) -> f64 {
        self.entries
            .iter()
            .fold(0.0_f64, |acc, z| acc.max(z.norm()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Max-entry deviation from Hermiticity, `max |M - M^dag|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev = 0.0_f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// `tr(self * other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Result<Complex64> {
        self.check_same_dim(other)?;
        let mut acc = Complex64::ZERO;
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += self.get(i, j) * other.get(j, i);
            }
        }
        Ok(acc)
    }

    /// Traces out the first tensor factor of a `d1 * d2` dimensional matrix,
    /// leaving a `d2 x d2` matrix.
    pub fn partial_trace_first(&self, d1: usize, d2: usize) -> Result<Self> {
        self.check_split(d1, d2)?;
        let mut out = Self::zeros(d2);
        for b1 in 0..d2 {
            for b2 in 0..d2 {
                let mut acc = Complex64::ZERO;
                for a in 0..d1 {
                    acc += self.get(a * d2 + b1, a * d2 + b2);
                }
                out.set(b1, b2, acc);
            }
        }
        Ok(out)
    }

    /// Traces out the second tensor factor, leaving a `d1 x d1` matrix.
    pub fn partial_trace_second(&self, d1: usize, d2: usize) -> Result<Self> {
        self.check_split(d1, d2)?;
        let mut out = Self::zeros(d1);
        for a1 in 0..d1 {
            for a2 in 0..d1 {
                let mut acc = Complex64::ZERO;
                for b in 0..d2 {
                    acc += self.get(a1 * d2 + b, a2 * d2 + b);
                }
                out.set(a1, a2, acc);
            }
        }
        Ok(out)
    }

    fn check_split(&self, d1: usize, d2: usize) -> Result<()> {
        if d1 * d2 == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.dim,
                right: d1 * d2,
            })
        }
    }
}

/// `ab - ba`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.check_same_dim(b)?;
    Ok(&(a * b) - &(b * a))
}

/// `ab + ba`.
pub fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.check_same_dim(b)?;
    Ok(&(a * b) + &(b * a))
}

/// State-weighted norm `sqrt(tr[O^dag O rho])` for a density matrix `rho`.
///
/// Vanishes exactly when `O` annihilates the support of `rho`.
pub fn state_weighted_norm(op: &ComplexMatrix, density: &ComplexMatrix) -> Result<f64> {
    op.check_same_dim(density)?;
    let sq = (&op.dagger() * op).trace_product(density)?;
    // tr[O^dag O rho] is real and nonnegative for positive rho; clamp the
    // floating-point residue.
    Ok(sq.re.max(0.0).sqrt())
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Entrywise sum. Panics on dimension mismatch; use the checked
    /// operations when the dimensions come from external input.
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale(-1.0)
    }
}
