//! Hermitian eigendecomposition via cyclic Jacobi rotations, plus the norms
//! and spectral functions built on it.
//!
//! Jacobi is quadratic-per-sweep but unconditionally robust at the matrix
//! sizes used here (joint dimension up to ~256), and it is deterministic,
//! which keeps every derived quantity reproducible bit-for-bit.

use alloc::vec::Vec;

use num_complex::Complex64;
// Needed for float math in no_std builds; std-linked builds (tests,
// tooling) shadow it with inherent methods.
#[allow(unused_imports)]
use num_traits::Float;

use crate::matrix::ComplexMatrix;
use crate::{Error, Result};

const MAX_SWEEPS: usize = 64;

/// Eigenvalues (ascending) and matching eigenvector columns of a Hermitian
/// matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

/// Diagonalizes a Hermitian matrix.
///
/// The input is assumed Hermitian; only its upper triangle drives the
/// rotations. Fails with [`Error::NoConvergence`] if the off-diagonal mass
/// has not collapsed after the sweep cap, which at these dimensions signals
/// non-finite input rather than a hard spectrum.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let n = m.dim();
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(n);

    let scale = a.frobenius_norm().max(1.0);
    let target = scale * 1e-15;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > target {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite eigenvalues"));

    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, |row, col| v.get(row, order[col]));
    Ok(HermitianEigen { values, vectors })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for p in 0..n {
        for q in (p + 1)..n {
            acc += a.get(p, q).norm_sqr();
        }
    }
    acc.sqrt()
}

/// One complex Jacobi rotation zeroing the (p, q) entry of `a`, accumulated
/// into `v`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a.get(p, q);
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag;
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;

    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // Unitary restricted to the (p, q) plane:
    //   U[p][p] = c        U[p][q] = s * phase
    //   U[q][p] = -s/phase U[q][q] = c
    let n = a.dim();

    // Column update A <- A U and V <- V U.
    for i in 0..n {
        let aip = a.get(i, p);
        let aiq = a.get(i, q);
        a.set(i, p, aip * c - aiq * s * phase.conj());
        a.set(i, q, aip * s * phase + aiq * c);

        let vip = v.get(i, p);
        let viq = v.get(i, q);
        v.set(i, p, vip * c - viq * s * phase.conj());
        v.set(i, q, vip * s * phase + viq * c);
    }
    // Row update A <- U^dag A.
    for j in 0..n {
        let apj = a.get(p, j);
        let aqj = a.get(q, j);
        a.set(p, j, apj * c - aqj * s * phase);
        a.set(q, j, apj * s * phase.conj() + aqj * c);
    }

    a.set(p, q, Complex64::ZERO);
    a.set(q, p, Complex64::ZERO);
    let app_new = a.get(p, p);
    let aqq_new = a.get(q, q);
    a.set(p, p, Complex64::new(app_new.re, 0.0));
    a.set(q, q, Complex64::new(aqq_new.re, 0.0));
}

/// Largest singular value, computed as `sqrt(max eig(O^dag O))`.
pub fn operator_norm(m: &ComplexMatrix) -> Result<f64> {
    let gram = &m.dagger() * m;
    let eig = hermitian_eigen(&gram)?;
    Ok(eig.values.last().copied().unwrap_or(0.0).max(0.0).sqrt())
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    let eig = hermitian_eigen(m)?;
    Ok(eig.values.first().copied().unwrap_or(0.0))
}

/// Spectral sign function of a Hermitian matrix: eigenvalues map to +/-1,
/// with ties at zero broken toward +1.
pub fn sign_of_hermitian(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(m)?;
    let n = m.dim();
    let mut out = ComplexMatrix::zeros(n);
    for (k, &lambda) in eig.values.iter().enumerate() {
        let sign = if lambda < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            for j in 0..n {
                let contrib = eig.vectors.get(i, k) * eig.vectors.get(j, k).conj() * sign;
                let v = out.get(i, j) + contrib;
                out.set(i, j, v);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{pauli_x, pauli_y, pauli_z};
    use crate::rng::Stream;

    #[test]
    fn pauli_spectra() {
        for m in [pauli_x(), pauli_y(), pauli_z()] {
            let eig = hermitian_eigen(&m).unwrap();
            assert!((eig.values[0] + 1.0).abs() < 1e-14);
            assert!((eig.values[1] - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn norm_of_pauli_sum_is_sqrt_two() {
        let m = &pauli_x() + &pauli_z();
        assert!((operator_norm(&m).unwrap() - 2.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn norm_scales_homogeneously() {
        assert!((operator_norm(&ComplexMatrix::identity(5)).unwrap() - 1.0).abs() < 1e-12);
        assert!((operator_norm(&pauli_x().scale(2.0)).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn random_hermitian_reconstructs() {
        let mut stream = Stream::new(11, 0);
        for n in [2usize, 3, 5, 8] {
            let m = stream.hermitian(n);
            let eig = hermitian_eigen(&m).unwrap();
            // V diag(w) V^dag == M
            let mut rebuilt = ComplexMatrix::zeros(n);
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        let v = rebuilt.get(i, j)
                            + eig.vectors.get(i, k) * eig.vectors.get(j, k).conj() * eig.values[k];
                        rebuilt.set(i, j, v);
                    }
                }
            }
            assert!((&rebuilt - &m).max_abs_entry() < 1e-10 * m.frobenius_norm().max(1.0));
            // Columns orthonormal.
            let gram = &eig.vectors.dagger() * &eig.vectors;
            assert!((&gram - &ComplexMatrix::identity(n)).max_abs_entry() < 1e-12);
        }
    }

    #[test]
    fn sign_function_squares_to_identity() {
        let mut stream = Stream::new(3, 1);
        let m = stream.hermitian(4);
        let s = sign_of_hermitian(&m).unwrap();
        assert!((&(&s * &s) - &ComplexMatrix::identity(4)).max_abs_entry() < 1e-11);
        assert!(s.is_hermitian(1e-11));
    }
}
