//! The three-setting bipartite Bell functional, its classical and
//! noncontextual bounds, and the sum-of-squares optimality diagnostics.
//!
//! The functional pairs signed combinations of Alice's three observables with
//! Bob's settings:
//!
//! ```text
//! I = (A1 + A2 - A3) x B1 + (A1 - A2 + A3) x B2 + (-A1 + A2 + A3) x B3
//! ```
//!
//! Deterministic strategies reach 5; strategies whose Alice marginals obey
//! the parity constraint `A1 + A2 + A3 = 0` reach 4; quantum states reach 6.

use alloc::vec::Vec;
// Needed for float math in no_std builds; std-linked builds (tests,
// tooling) shadow it with inherent methods.
#[allow(unused_imports)]
use num_traits::Float;

use crate::matrix::ComplexMatrix;
use crate::quantum::{state_norm, trine_script_a, ObservableTriple, QuantumState, UnsharpSetting};
use crate::{Error, Result};

/// Signed coefficient of `A_x (x) B_y` in the functional; symmetric in its
/// indices.
pub(crate) const COEFFS: [[f64; 3]; 3] = [[1.0, 1.0, -1.0], [1.0, -1.0, 1.0], [-1.0, 1.0, 1.0]];

/// Alice-side signed combinations `(A1+A2-A3, A1-A2+A3, -A1+A2+A3)`.
pub(crate) fn alice_combinations(alice: &ObservableTriple) -> [ComplexMatrix; 3] {
    let [a1, a2, a3] = alice.matrices();
    [&(a1 + a2) - a3, &(a1 - a2) + a3, &(&(-a1) + a2) + a3]
}

/// The joint Bell operator.
pub fn bell_operator(alice: &ObservableTriple, bob: &ObservableTriple) -> ComplexMatrix {
    let combos = alice_combinations(alice);
    let [b1, b2, b3] = bob.matrices();
    let mut op = combos[0].tensor(b1);
    op = &op + &combos[1].tensor(b2);
    op = &op + &combos[2].tensor(b3);
    op
}

/// Quantum value `eta * tr(I rho)` of the functional, with the sharpness of
/// Bob's measurement entering linearly through the correlators.
pub fn bell_value(
    rho: &QuantumState,
    alice: &ObservableTriple,
    bob: &ObservableTriple,
    setting: UnsharpSetting,
) -> Result<f64> {
    setting.require_positive()?;
    let (da, db) = rho.dims();
    if alice.dim() != da || bob.dim() != db {
        return Err(Error::DimensionMismatch {
            left: alice.dim() * bob.dim(),
            right: da * db,
        });
    }
    Ok(setting.eta() * rho.expectation(&bell_operator(alice, bob))?)
}

/// A local-deterministic (or, with fractional expectations, an ontic)
/// strategy: Alice responds with expectation `e_x`, Bob deterministically
/// with `b_y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OntStrategy {
    pub alice_expectations: [f64; 3],
    pub bob_outputs: [i8; 3],
}

impl OntStrategy {
    /// Value of the functional under this strategy.
    pub fn value(&self) -> f64 {
        let e = self.alice_expectations;
        let mut total = 0.0;
        for (y, &b) in self.bob_outputs.iter().enumerate() {
            let combo: f64 = COEFFS.iter().zip(e).map(|(row, ex)| row[y] * ex).sum();
            total += combo * f64::from(b);
        }
        total
    }

    /// Whether the strategy obeys the parity constraint `e1 + e2 + e3 = 0`.
    pub fn is_parity_constrained(&self, tol: f64) -> bool {
        self.alice_expectations.iter().sum::<f64>().abs() <= tol
    }
}

const SIGNS: [i8; 2] = [1, -1];

fn deterministic_strategies() -> impl Iterator<Item = OntStrategy> {
    SIGNS.iter().flat_map(move |&a1| {
        SIGNS.iter().flat_map(move |&a2| {
            SIGNS.iter().flat_map(move |&a3| {
                bob_assignments().map(move |b| OntStrategy {
                    alice_expectations: [f64::from(a1), f64::from(a2), f64::from(a3)],
                    bob_outputs: b,
                })
            })
        })
    })
}

fn bob_assignments() -> impl Iterator<Item = [i8; 3]> + Clone {
    SIGNS.iter().flat_map(move |&b1| {
        SIGNS
            .iter()
            .flat_map(move |&b2| SIGNS.iter().map(move |&b3| [b1, b2, b3]))
    })
}

/// Maximum of the functional over all 64 deterministic assignments; equals 5.
pub fn local_bound() -> f64 {
    deterministic_strategies()
        .map(|s| s.value())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Vertices of the polytope `{e in [-1,1]^3 : e1 + e2 + e3 = 0}`: the six
/// permutations of `(1, -1, 0)`, plus the interior center for completeness.
pub fn parity_polytope_vertices() -> Vec<[f64; 3]> {
    let mut vertices = Vec::with_capacity(7);
    let perms = [
        [1.0, -1.0, 0.0],
        [1.0, 0.0, -1.0],
        [-1.0, 1.0, 0.0],
        [-1.0, 0.0, 1.0],
        [0.0, 1.0, -1.0],
        [0.0, -1.0, 1.0],
    ];
    vertices.extend_from_slice(&perms);
    vertices.push([0.0, 0.0, 0.0]);
    vertices
}

/// Maximum of the functional over parity-constrained Alice strategies and
/// deterministic Bob outputs; equals 4.
///
/// The objective is linear in the Alice expectation vector, so the maximum
/// over the constrained polytope is attained at a vertex and vertex
/// enumeration is exact.
pub fn pnc_bound() -> f64 {
    let mut best = f64::NEG_INFINITY;
    for e in parity_polytope_vertices() {
        for b in bob_assignments() {
            let s = OntStrategy {
                alice_expectations: e,
                bob_outputs: b,
            };
            best = best.max(s.value());
        }
    }
    best
}

/// Dense-grid cross-check of [`pnc_bound`]: scans `e1, e2` on the given grid
/// step with `e3 = -e1 - e2` clipped to the cube.
pub fn pnc_bound_grid(step: f64) -> Result<f64> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::BadStep {
            step,
            range: "(0, 1]",
        });
    }
    let n = (2.0 / step).round() as i64;
    let mut best = f64::NEG_INFINITY;
    for i in 0..=n {
        let e1 = -1.0 + step * i as f64;
        for j in 0..=n {
            let e2 = -1.0 + step * j as f64;
            let e3 = -e1 - e2;
            if e3.abs() > 1.0 + 1e-12 {
                continue;
            }
            for b in bob_assignments() {
                let s = OntStrategy {
                    alice_expectations: [e1, e2, e3],
                    bob_outputs: b,
                };
                best = best.max(s.value());
            }
        }
    }
    Ok(best)
}

/// Sum-of-squares certificate data for a state and a pair of triples.
///
/// `gamma_value` is the expectation of the positive operator
/// `gamma = (1/2) sum_y omega_y L_y^dag L_y` with
/// `L_y = script_a_y (x) 1 - 1 (x) B_y`; it vanishes exactly at the quantum
/// optimum and always satisfies `gamma_value = sum_y omega_y - I`.
#[derive(Debug, Clone)]
pub struct SosDecomposition {
    /// State-weighted norms of the three Alice combinations.
    pub omega: [f64; 3],
    /// Normalized Alice combinations `script_a_y` (local dimension).
    pub script_a: [ComplexMatrix; 3],
    /// Residuals `tr(L_y rho)`, zero when Bob's marginals mirror Alice's.
    pub l_residuals: [f64; 3],
    /// Expectation of the certificate operator; nonnegative, zero iff optimal.
    pub gamma_value: f64,
}

impl SosDecomposition {
    pub fn is_optimal(&self, tol: f64) -> bool {
        self.gamma_value.abs() <= tol
    }
}

/// Computes the certificate for arbitrary (not necessarily trine) triples.
///
/// Fails with [`Error::SingularDecomposition`] when one of the Alice
/// combinations annihilates the support of `rho`, which makes the normalized
/// combination undefined.
pub fn sos_diagnose(
    rho: &QuantumState,
    alice: &ObservableTriple,
    bob: &ObservableTriple,
) -> Result<SosDecomposition> {
    let (da, db) = rho.dims();
    if alice.dim() != da || bob.dim() != db {
        return Err(Error::DimensionMismatch {
            left: alice.dim() * bob.dim(),
            right: da * db,
        });
    }
    let combos = alice_combinations(alice);
    let id_a = ComplexMatrix::identity(da);
    let id_b = ComplexMatrix::identity(db);

    let mut omega = [0.0; 3];
    let mut script_a = [
        ComplexMatrix::zeros(da),
        ComplexMatrix::zeros(da),
        ComplexMatrix::zeros(da),
    ];
    for y in 0..3 {
        let w = state_norm(&combos[y].tensor(&id_b), rho)?;
        if w <= 1e-12 {
            return Err(Error::SingularDecomposition { setting: y });
        }
        omega[y] = w;
        script_a[y] = combos[y].scale(1.0 / w);
    }

    let mut l_residuals = [0.0; 3];
    let mut gamma = ComplexMatrix::zeros(da * db);
    for y in 0..3 {
        let l = &script_a[y].tensor(&id_b) - &id_a.tensor(bob.get(y).matrix());
        l_residuals[y] = rho.expectation(&l)?;
        gamma = &gamma + &(&l.dagger() * &l).scale(omega[y] / 2.0);
    }
    let gamma_value = rho.expectation(&gamma)?;

    Ok(SosDecomposition {
        omega,
        script_a,
        l_residuals,
        gamma_value,
    })
}

/// Maximal deviation from the parity-oblivious condition: the averaged
/// difference between Bob's unnormalized conditional states for the two
/// outcomes,
///
/// `max_entry | (1/3) sum_x tr_A[rho (P+_x (x) 1)] - (1/3) sum_x tr_A[rho (P-_x (x) 1)] |`,
///
/// which reduces to the Bob-side image of `(1/3) (A1 + A2 + A3)` and
/// vanishes exactly under the trine constraint.
pub fn parity_oblivious_residual(rho: &QuantumState, alice: &ObservableTriple) -> Result<f64> {
    let (da, db) = rho.dims();
    if alice.dim() != da {
        return Err(Error::DimensionMismatch {
            left: alice.dim(),
            right: da,
        });
    }
    let [a1, a2, a3] = alice.matrices();
    let sum = &(a1 + a2) + a3;
    let id_b = ComplexMatrix::identity(db);
    let weighted = &sum.tensor(&id_b) * rho.matrix();
    let difference = weighted.partial_trace_first(da, db)?.scale(1.0 / 3.0);
    Ok(difference.max_abs_entry())
}

/// Trine-triple specialization of the SOS weights: each combination is
/// `-2 A_y`, so all weights are exactly 2 regardless of the state.
pub fn trine_sos_weights(alice: &ObservableTriple) -> Result<[ComplexMatrix; 3]> {
    alice.require_trine(crate::DEFAULT_TOL)?;
    Ok(trine_script_a(alice))
}
