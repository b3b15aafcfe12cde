//! Deterministic random sampling of matrices, observables and states.
//!
//! Each consumer owns a [`Stream`] derived from a `(seed, index)` pair, so
//! restarted or sharded computations reproduce exactly regardless of
//! scheduling.

use alloc::vec::Vec;

use num_complex::Complex64;
// Needed for float math in no_std builds; std-linked builds (tests,
// tooling) shadow it with inherent methods.
#[allow(unused_imports)]
use num_traits::Float;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::eigen::sign_of_hermitian;
use crate::matrix::ComplexMatrix;

/// A seeded, stream-indexed generator.
pub struct Stream {
    rng: ChaCha8Rng,
}

impl Stream {
    /// Stream `index` of the generator family identified by `seed`.
    pub fn new(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        Self { rng }
    }

    /// Uniform sample in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal sample (Box-Muller).
    pub fn gaussian(&mut self) -> f64 {
        let u = loop {
            let u = self.uniform();
            if u > 0.0 {
                break u;
            }
        };
        let v = self.uniform();
        (-2.0 * u.ln()).sqrt() * (2.0 * core::f64::consts::PI * v).cos()
    }

    fn complex_gaussian(&mut self) -> Complex64 {
        Complex64::new(self.gaussian(), self.gaussian())
    }

    /// Random Hermitian matrix with Gaussian entries.
    pub fn hermitian(&mut self, dim: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(self.gaussian(), 0.0));
            for j in (i + 1)..dim {
                let z = self.complex_gaussian().scale(0.5_f64.sqrt());
                m.set(i, j, z);
                m.set(j, i, z.conj());
            }
        }
        m
    }

    /// Random dichotomic observable: the spectral sign of a random Hermitian
    /// matrix, so eigenvalues are exactly +/-1.
    pub fn dichotomic(&mut self, dim: usize) -> ComplexMatrix {
        loop {
            let h = self.hermitian(dim);
            if let Ok(s) = sign_of_hermitian(&h) {
                return s;
            }
        }
    }

    /// Random pure-state density matrix of the given dimension.
    pub fn pure_density(&mut self, dim: usize) -> ComplexMatrix {
        let (amps, norm_sq) = loop {
            let amps: Vec<Complex64> = (0..dim).map(|_| self.complex_gaussian()).collect();
            let norm_sq: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
            if norm_sq > 1e-12 {
                break (amps, norm_sq);
            }
        };
        ComplexMatrix::from_fn(dim, |i, j| amps[i] * amps[j].conj() / norm_sq)
    }

    /// Random full-rank density matrix: a normalized mixture of `dim` random
    /// pure states.
    pub fn density(&mut self, dim: usize) -> ComplexMatrix {
        let mut rho = ComplexMatrix::zeros(dim);
        let mut weights = Vec::with_capacity(dim);
        let mut total = 0.0;
        for _ in 0..dim {
            let w = self.uniform() + 1e-3;
            weights.push(w);
            total += w;
        }
        for w in weights {
            rho = &rho + &self.pure_density(dim).scale(w / total);
        }
        rho
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::min_eigenvalue;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = {
            let mut s = Stream::new(42, 0);
            (0..4).map(|_| s.rng.next_u64()).collect()
        };
        let b: Vec<u64> = {
            let mut s = Stream::new(42, 0);
            (0..4).map(|_| s.rng.next_u64()).collect()
        };
        let c: Vec<u64> = {
            let mut s = Stream::new(42, 1);
            (0..4).map(|_| s.rng.next_u64()).collect()
        };
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn random_density_is_valid() {
        let mut s = Stream::new(9, 0);
        for dim in [2usize, 3, 4] {
            let rho = s.density(dim);
            assert!((rho.trace().re - 1.0).abs() < 1e-12);
            assert!(rho.is_hermitian(1e-12));
            assert!(min_eigenvalue(&rho).unwrap() > -1e-12);
        }
    }

    #[test]
    fn random_dichotomic_squares_to_identity() {
        let mut s = Stream::new(5, 0);
        let o = s.dichotomic(3);
        let sq = &o * &o;
        assert!((&sq - &ComplexMatrix::identity(3)).max_abs_entry() < 1e-11);
    }
}
