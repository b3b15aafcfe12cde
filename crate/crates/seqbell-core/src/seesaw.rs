//! Alternating (see-saw) maximization of the Bell functional over states and
//! observables at a fixed local dimension.
//!
//! One round fixes the six observables and takes the top eigenvector of the
//! Bell operator as the state, then updates each observable to the spectral
//! sign of its effective environment operator. Both half-steps are exact
//! argmax moves, so the value ascends monotonically; random restarts guard
//! against the rare bad basin.

use crate::bell::COEFFS;
use crate::eigen::{hermitian_eigen, sign_of_hermitian};
use crate::matrix::ComplexMatrix;
use crate::rng::Stream;
use crate::{Error, Result};

const MAX_ITERATIONS: usize = 200;
const VALUE_TOL: f64 = 1e-12;

/// Best Bell value found and whether every restart's inner loop converged
/// before the iteration cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeesawOutcome {
    pub value: f64,
    pub converged: bool,
}

/// Runs `restarts` independent see-saw ascents at local dimension `dim`
/// (supported range 2..=8) and returns the best value found.
///
/// With `restarts = 0` no optimization happens: the value of a single random
/// configuration (random dichotomic triples, random pure state) is returned,
/// which is still bounded by the quantum optimum.
///
/// Restart `r` draws from stream `(seed, r)`, so runs are reproducible and
/// restarts could be distributed without changing results.
pub fn seesaw_max(dim: usize, restarts: usize, seed: u64) -> Result<SeesawOutcome> {
    if !(2..=8).contains(&dim) {
        return Err(Error::UnsupportedDimension { dim });
    }
    if restarts == 0 {
        let mut stream = Stream::new(seed, 0);
        let (alice, bob) = random_triples(&mut stream, dim);
        let op = bell_operator_raw(&alice, &bob);
        let rho = stream.pure_density(dim * dim);
        let value = op.trace_product(&rho)?.re;
        return Ok(SeesawOutcome {
            value,
            converged: true,
        });
    }

    let mut best = f64::NEG_INFINITY;
    let mut all_converged = true;
    for r in 0..restarts {
        let mut stream = Stream::new(seed, r as u64);
        let run = single_ascent(&mut stream, dim)?;
        best = best.max(run.value);
        all_converged &= run.converged;
    }
    Ok(SeesawOutcome {
        value: best,
        converged: all_converged,
    })
}

fn random_triples(stream: &mut Stream, dim: usize) -> ([ComplexMatrix; 3], [ComplexMatrix; 3]) {
    let mut draw = || {
        [
            stream.dichotomic(dim),
            stream.dichotomic(dim),
            stream.dichotomic(dim),
        ]
    };
    let alice = draw();
    let bob = draw();
    (alice, bob)
}

fn bell_operator_raw(alice: &[ComplexMatrix; 3], bob: &[ComplexMatrix; 3]) -> ComplexMatrix {
    let dim = alice[0].dim() * bob[0].dim();
    let mut op = ComplexMatrix::zeros(dim);
    for y in 0..3 {
        let mut combo = ComplexMatrix::zeros(alice[0].dim());
        for x in 0..3 {
            combo = &combo + &alice[x].scale(COEFFS[x][y]);
        }
        op = &op + &combo.tensor(&bob[y]);
    }
    op
}

fn top_eigenstate(op: &ComplexMatrix) -> Result<(f64, ComplexMatrix)> {
    let eig = hermitian_eigen(op)?;
    let n = op.dim();
    let top = n - 1;
    let value = eig.values[top];
    let rho = ComplexMatrix::from_fn(n, |i, j| {
        eig.vectors.get(i, top) * eig.vectors.get(j, top).conj()
    });
    Ok((value, rho))
}

fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    (&m.dagger() + m).scale(0.5)
}

fn single_ascent(stream: &mut Stream, dim: usize) -> Result<SeesawOutcome> {
    let (mut alice, mut bob) = random_triples(stream, dim);
    let mut value = f64::NEG_INFINITY;
    let id = ComplexMatrix::identity(dim);

    for _ in 0..MAX_ITERATIONS {
        let op = bell_operator_raw(&alice, &bob);
        let (next_value, rho) = top_eigenstate(&op)?;
        let improved = next_value - value;
        value = next_value;
        if improved.abs() <= VALUE_TOL {
            return Ok(SeesawOutcome {
                value,
                converged: true,
            });
        }

        // Alice update: A_x <- sign of tr_B[(1 x sum_y c_xy B_y) rho].
        for x in 0..3 {
            let mut g = ComplexMatrix::zeros(dim);
            for y in 0..3 {
                g = &g + &bob[y].scale(COEFFS[x][y]);
            }
            let weighted = &id.tensor(&g) * &rho;
            let env = weighted.partial_trace_second(dim, dim)?;
            alice[x] = sign_of_hermitian(&hermitize(&env))?;
        }
        // Bob update against the refreshed Alice observables.
        for y in 0..3 {
            let mut f = ComplexMatrix::zeros(dim);
            for x in 0..3 {
                f = &f + &alice[x].scale(COEFFS[x][y]);
            }
            let weighted = &f.tensor(&id) * &rho;
            let env = weighted.partial_trace_first(dim, dim)?;
            bob[y] = sign_of_hermitian(&hermitize(&env))?;
        }
    }
    Ok(SeesawOutcome {
        value,
        converged: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubits_reach_the_quantum_optimum() {
        let outcome = seesaw_max(2, 20, 7).unwrap();
        assert!(outcome.value >= 6.0 - 1e-6, "value {}", outcome.value);
        assert!(outcome.value <= 6.0 + 1e-6);
    }

    #[test]
    fn qutrits_stay_below_the_dimension_free_bound() {
        let outcome = seesaw_max(3, 10, 7).unwrap();
        assert!(outcome.value <= 6.0 + 1e-6, "value {}", outcome.value);
    }

    #[test]
    fn zero_restarts_returns_a_bounded_random_point() {
        let outcome = seesaw_max(2, 0, 123).unwrap();
        assert!(outcome.value <= 6.0);
        let again = seesaw_max(2, 0, 123).unwrap();
        assert_eq!(outcome, again);
    }

    #[test]
    fn unsupported_dimension_is_rejected() {
        assert!(matches!(
            seesaw_max(1, 5, 0),
            Err(Error::UnsupportedDimension { dim: 1 })
        ));
        assert!(matches!(
            seesaw_max(9, 5, 0),
            Err(Error::UnsupportedDimension { dim: 9 })
        ));
    }

    #[test]
    fn bell_operator_matches_module_level_constructor() {
        use crate::bell::bell_operator;
        use crate::quantum::canonical_realization;
        let (_, alice, bob) = canonical_realization();
        let raw_a = [
            alice.get(0).matrix().clone(),
            alice.get(1).matrix().clone(),
            alice.get(2).matrix().clone(),
        ];
        let raw_b = [
            bob.get(0).matrix().clone(),
            bob.get(1).matrix().clone(),
            bob.get(2).matrix().clone(),
        ];
        let lhs = bell_operator_raw(&raw_a, &raw_b);
        let rhs = bell_operator(&alice, &bob);
        assert!((&lhs - &rhs).max_abs_entry() < 1e-14);
    }
}
