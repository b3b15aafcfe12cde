//! Quantum objects of the sequential scenario: bipartite states, dichotomic
//! observables and trine triples, unbiased unsharp POVMs with their Kraus
//! pairs, and the state-update channel applied between consecutive observers.

use num_complex::Complex64;
// Needed for float math in no_std builds; std-linked builds (tests,
// tooling) shadow it with inherent methods.
#[allow(unused_imports)]
use num_traits::Float;

use crate::eigen::{hermitian_eigen, min_eigenvalue, operator_norm};
use crate::matrix::{state_weighted_norm, ComplexMatrix};
use crate::{Error, Result, DEFAULT_TOL, DICHOTOMY_TOL, POSITIVITY_FLOOR};

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).expect("static entries")
}

pub fn pauli_y() -> ComplexMatrix {
    let i = Complex64::I;
    ComplexMatrix::from_entries(2, alloc::vec![Complex64::ZERO, -i, i, Complex64::ZERO])
        .expect("static entries")
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, -1.0]).expect("static entries")
}

/// Density operator on a bipartite system with local dimensions `(d_a, d_b)`.
///
/// Construction validates Hermiticity, unit trace and positivity (eigenvalue
/// floor [`POSITIVITY_FLOOR`]). Channel outputs produced internally skip the
/// eigenvalue re-check: the update map is completely positive by
/// construction, and the property tests assert positivity preservation
/// explicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    matrix: ComplexMatrix,
    dims: (usize, usize),
}

impl QuantumState {
    pub fn new(matrix: ComplexMatrix, dims: (usize, usize)) -> Result<Self> {
        let state = Self::checked_cheap(matrix, dims)?;
        let min = min_eigenvalue(&state.matrix)?;
        if min < POSITIVITY_FLOOR {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        Ok(state)
    }

    fn checked_cheap(matrix: ComplexMatrix, dims: (usize, usize)) -> Result<Self> {
        if matrix.dim() != dims.0 * dims.1 {
            return Err(Error::DimensionMismatch {
                left: matrix.dim(),
                right: dims.0 * dims.1,
            });
        }
        let dev = matrix.hermiticity_deviation();
        if dev > DEFAULT_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > DEFAULT_TOL {
            return Err(Error::TraceNotOne { trace });
        }
        Ok(Self { matrix, dims })
    }

    /// Clips negative eigenvalues to zero and renormalizes the trace.
    ///
    /// Never applied implicitly: a channel that produces a non-positive
    /// output is a bug worth surfacing, so repair is an explicit request.
    pub fn repaired(matrix: ComplexMatrix, dims: (usize, usize)) -> Result<Self> {
        let eig = hermitian_eigen(&matrix)?;
        let n = matrix.dim();
        let mut clipped = ComplexMatrix::zeros(n);
        let mut trace = 0.0;
        for (k, &lambda) in eig.values.iter().enumerate() {
            let w = lambda.max(0.0);
            trace += w;
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    let v = clipped.get(i, j)
                        + eig.vectors.get(i, k) * eig.vectors.get(j, k).conj() * w;
                    clipped.set(i, j, v);
                }
            }
        }
        if trace <= 0.0 {
            return Err(Error::NotPositive {
                min_eigenvalue: eig.values.first().copied().unwrap_or(0.0),
            });
        }
        Self::checked_cheap(clipped.scale(1.0 / trace), dims)
    }

    pub(crate) fn from_channel_output(matrix: ComplexMatrix, dims: (usize, usize)) -> Self {
        Self { matrix, dims }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    /// `Re tr(op rho)` for a joint-system operator.
    pub fn expectation(&self, op: &ComplexMatrix) -> Result<f64> {
        Ok(op.trace_product(&self.matrix)?.re)
    }

    /// Expectation of an operator acting on the first subsystem only.
    pub fn alice_expectation(&self, op: &ComplexMatrix) -> Result<f64> {
        Ok(op.trace_product(&self.reduced_alice()?)?.re)
    }

    /// Expectation of an operator acting on the second subsystem only.
    pub fn bob_expectation(&self, op: &ComplexMatrix) -> Result<f64> {
        Ok(op.trace_product(&self.reduced_bob()?)?.re)
    }

    pub fn reduced_alice(&self) -> Result<ComplexMatrix> {
        self.matrix.partial_trace_second(self.dims.0, self.dims.1)
    }

    pub fn reduced_bob(&self) -> Result<ComplexMatrix> {
        self.matrix.partial_trace_first(self.dims.0, self.dims.1)
    }

    /// `tr(rho^2)`; equals 1 exactly for pure states.
    pub fn purity(&self) -> f64 {
        self.matrix
            .trace_product(&self.matrix)
            .expect("same dimension")
            .re
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        (self.purity() - 1.0).abs() <= tol
    }
}

/// State-weighted operator norm `sqrt(tr[O^dag O rho])`.
pub fn state_norm(op: &ComplexMatrix, state: &QuantumState) -> Result<f64> {
    state_weighted_norm(op, state.matrix())
}

/// A Hermitian observable with eigenvalues +/-1.
///
/// Dichotomy is validated through `max |O^2 - 1|` rather than an explicit
/// eigendecomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct DichotomicObservable {
    matrix: ComplexMatrix,
}

impl DichotomicObservable {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let dev = matrix.hermiticity_deviation();
        if dev > DICHOTOMY_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let sq = &matrix * &matrix;
        let dichotomy = (&sq - &ComplexMatrix::identity(matrix.dim())).max_abs_entry();
        if dichotomy > DICHOTOMY_TOL {
            return Err(Error::NotDichotomic {
                deviation: dichotomy,
            });
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

/// Three dichotomic observables for one party, indexed `0..3`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableTriple {
    observables: [DichotomicObservable; 3],
}

impl ObservableTriple {
    pub fn new(observables: [DichotomicObservable; 3]) -> Result<Self> {
        let dim = observables[0].dim();
        for o in &observables[1..] {
            if o.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: o.dim(),
                });
            }
        }
        Ok(Self { observables })
    }

    pub fn from_matrices(matrices: [ComplexMatrix; 3]) -> Result<Self> {
        let [m0, m1, m2] = matrices;
        Self::new([
            DichotomicObservable::new(m0)?,
            DichotomicObservable::new(m1)?,
            DichotomicObservable::new(m2)?,
        ])
    }

    pub fn get(&self, y: usize) -> &DichotomicObservable {
        &self.observables[y]
    }

    pub fn matrices(&self) -> [&ComplexMatrix; 3] {
        [
            self.observables[0].matrix(),
            self.observables[1].matrix(),
            self.observables[2].matrix(),
        ]
    }

    pub fn dim(&self) -> usize {
        self.observables[0].dim()
    }

    /// Spectral norm of `B1 + B2 + B3`; zero for a trine triple.
    pub fn trine_deviation(&self) -> Result<f64> {
        let [b1, b2, b3] = self.matrices();
        operator_norm(&(&(b1 + b2) + b3))
    }

    pub fn is_trine(&self, tol: f64) -> Result<bool> {
        Ok(self.trine_deviation()? <= tol)
    }

    pub fn require_trine(&self, tol: f64) -> Result<()> {
        let dev = self.trine_deviation()?;
        if dev <= tol {
            Ok(())
        } else {
            Err(Error::NotTrine { deviation: dev })
        }
    }
}

/// Sharpness parameter `eta` with its complement `xi = sqrt(1 - eta^2)`.
///
/// `eta = 1` is a projective measurement, `eta = 0` the trivial
/// no-measurement limit. The limit is constructible because the channel laws
/// are defined there; operations that divide by `eta` demand positivity
/// themselves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnsharpSetting {
    eta: f64,
    xi: f64,
}

impl UnsharpSetting {
    pub fn new(eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) || !eta.is_finite() {
            return Err(Error::UnsharpnessOutOfRange {
                eta,
                range: "[0, 1]",
            });
        }
        Ok(Self {
            eta,
            xi: (1.0 - eta * eta).max(0.0).sqrt(),
        })
    }

    pub fn sharp() -> Self {
        Self { eta: 1.0, xi: 0.0 }
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub(crate) fn require_positive(&self) -> Result<()> {
        if self.eta > 0.0 {
            Ok(())
        } else {
            Err(Error::UnsharpnessOutOfRange {
                eta: self.eta,
                range: "(0, 1]",
            })
        }
    }
}

/// Unbiased unsharp POVM effects `(1 +/- eta B) / 2`.
///
/// Both effects are positive semidefinite with minimum eigenvalue
/// `(1 - eta) / 2`, and they sum to the identity exactly by construction.
pub fn make_povm(
    setting: UnsharpSetting,
    observable: &DichotomicObservable,
) -> (ComplexMatrix, ComplexMatrix) {
    let id = ComplexMatrix::identity(observable.dim());
    let smeared = observable.matrix().scale(setting.eta());
    let plus = (&id + &smeared).scale(0.5);
    let minus = (&id - &smeared).scale(0.5);
    (plus, minus)
}

/// Square-root Kraus operators of an unsharp measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausPair {
    plus: ComplexMatrix,
    minus: ComplexMatrix,
}

impl KrausPair {
    /// Validates the completeness relation `K+^dag K+ + K-^dag K- = 1`.
    pub fn new(plus: ComplexMatrix, minus: ComplexMatrix) -> Result<Self> {
        plus.check_same_dim(&minus)?;
        let sum = &(&plus.dagger() * &plus) + &(&minus.dagger() * &minus);
        let dev = (&sum - &ComplexMatrix::identity(plus.dim())).max_abs_entry();
        if dev > DEFAULT_TOL {
            return Err(Error::NotDichotomic { deviation: dev });
        }
        Ok(Self { plus, minus })
    }

    pub fn plus(&self) -> &ComplexMatrix {
        &self.plus
    }

    pub fn minus(&self) -> &ComplexMatrix {
        &self.minus
    }
}

/// Kraus pair of the unsharp measurement of `observable` at sharpness
/// `eta`: `K+- = a 1 +- b B` with
/// `a = (sqrt((1+eta)/2) + sqrt((1-eta)/2)) / 2` and
/// `b = (sqrt((1+eta)/2) - sqrt((1-eta)/2)) / 2`.
///
/// `K+-^dag K+-` reproduces the [`make_povm`] effects.
pub fn kraus_pair(setting: UnsharpSetting, observable: &DichotomicObservable) -> KrausPair {
    let eta = setting.eta();
    let hi = ((1.0 + eta) / 2.0).sqrt();
    let lo = ((1.0 - eta) / 2.0).sqrt();
    let a = (hi + lo) / 2.0;
    let b = (hi - lo) / 2.0;
    let id = ComplexMatrix::identity(observable.dim()).scale(a);
    let smeared = observable.matrix().scale(b);
    KrausPair {
        plus: &id + &smeared,
        minus: &id - &smeared,
    }
}

pub const UNIFORM_WEIGHTS: [f64; 3] = [1.0 / 3.0; 3];

/// Post-measurement state after one unsharp observer on the second
/// subsystem, with settings drawn from `weighted`:
///
/// `rho' = (1+xi)/2 rho + (1-xi)/2 sum_y w_y (1 x B_y) rho (1 x B_y)`.
pub fn unsharp_update_with_settings(
    rho: &QuantumState,
    setting: UnsharpSetting,
    weighted: &[(f64, &DichotomicObservable)],
) -> Result<QuantumState> {
    let (da, db) = rho.dims();
    let weight_sum: f64 = weighted.iter().map(|(w, _)| *w).sum();
    if weighted.iter().any(|(w, _)| *w < 0.0) || (weight_sum - 1.0).abs() > DEFAULT_TOL {
        return Err(Error::BadWeights { sum: weight_sum });
    }
    let xi = setting.xi();
    let mut out = rho.matrix().scale((1.0 + xi) / 2.0);
    let id_a = ComplexMatrix::identity(da);
    for (w, observable) in weighted {
        if observable.dim() != db {
            return Err(Error::DimensionMismatch {
                left: observable.dim(),
                right: db,
            });
        }
        let joint = id_a.tensor(observable.matrix());
        let conjugated = &(&joint * rho.matrix()) * &joint;
        out = &out + &conjugated.scale((1.0 - xi) / 2.0 * w);
    }
    Ok(QuantumState::from_channel_output(out, rho.dims()))
}

/// Sequential state update for a three-setting observer choosing settings
/// with the given weights.
pub fn luders_update_weighted(
    rho: &QuantumState,
    setting: UnsharpSetting,
    triple: &ObservableTriple,
    weights: [f64; 3],
) -> Result<QuantumState> {
    let weighted: alloc::vec::Vec<(f64, &DichotomicObservable)> =
        (0..3).map(|y| (weights[y], triple.get(y))).collect();
    unsharp_update_with_settings(rho, setting, &weighted)
}

/// Sequential state update with uniformly random setting choice:
///
/// `rho' = (1+xi)/2 rho + (1-xi)/6 sum_y (1 x B_y) rho (1 x B_y)`.
pub fn luders_update(
    rho: &QuantumState,
    setting: UnsharpSetting,
    triple: &ObservableTriple,
) -> Result<QuantumState> {
    luders_update_weighted(rho, setting, triple, UNIFORM_WEIGHTS)
}

/// The explicit qubit realization reaching the quantum optimum:
///
/// - `A1 = -B3 = (sx + sqrt(3) sz) / 2`
/// - `A2 = -B2 = (sx - sqrt(3) sz) / 2`
/// - `A3 = -B1 = -sx`
/// - `rho = (1x1 + sx x sx - sy x sy + sz x sz) / 4`, the maximally
///   entangled pure state with these correlations.
pub fn canonical_realization() -> (QuantumState, ObservableTriple, ObservableTriple) {
    let root3 = 3.0_f64.sqrt();
    let a1 = (&pauli_x() + &pauli_z().scale(root3)).scale(0.5);
    let a2 = (&pauli_x() - &pauli_z().scale(root3)).scale(0.5);
    let a3 = -&pauli_x();

    let alice = ObservableTriple::from_matrices([a1.clone(), a2.clone(), a3.clone()])
        .expect("canonical observables are dichotomic");
    let bob = ObservableTriple::from_matrices([-&a3, -&a2, -&a1])
        .expect("canonical observables are dichotomic");

    let id4 = ComplexMatrix::identity(4);
    let xx = pauli_x().tensor(&pauli_x());
    let yy = pauli_y().tensor(&pauli_y());
    let zz = pauli_z().tensor(&pauli_z());
    let rho = (&(&(&id4 + &xx) - &yy) + &zz).scale(0.25);
    let state = QuantumState::new(rho, (2, 2)).expect("canonical state is valid");

    (state, alice, bob)
}

/// Normalized Alice-side combinations for a trine triple.
///
/// Under `A1 + A2 + A3 = 0` the three signed sums collapse to
/// `A1 + A2 - A3 = -2 A3` (cyclically), so the normalizing weights are 2
/// independently of the state and the normalized combinations are plain
/// observables again.
pub(crate) fn trine_script_a(alice: &ObservableTriple) -> [ComplexMatrix; 3] {
    let [a1, a2, a3] = alice.matrices();
    [-a3, -a2, -a1]
}

/// The three commuting joint operators fixed by the optimality conditions,
/// returned as `d^2`-dimensional matrices `C_i x C_i`.
///
/// The third is the operator product of the first two. On the canonical
/// realization they reduce to `sx x sx`, `sz x sz` and `-sy x sy`.
pub fn correlation_operators(
    alice: &ObservableTriple,
    bob: &ObservableTriple,
) -> Result<[ComplexMatrix; 3]> {
    alice.require_trine(DEFAULT_TOL)?;
    bob.require_trine(DEFAULT_TOL)?;

    let [sa1, sa2, sa3] = trine_script_a(alice);
    let [b1, b2, b3] = bob.matrices();

    let c1 = sa1.tensor(b1);
    let c2 = (&(&(&sa2.tensor(b2) + &sa3.tensor(b3)) - &sa3.tensor(b2)) - &sa2.tensor(b3))
        .scale(1.0 / 3.0);

    let sa21 = &sa2 * &sa1;
    let sa31 = &sa3 * &sa1;
    let b21 = b2 * b1;
    let b31 = b3 * b1;
    let c3 = (&(&(&sa21.tensor(&b21) - &sa21.tensor(&b31)) - &sa31.tensor(&b21))
        + &sa31.tensor(&b31))
        .scale(1.0 / 3.0);

    Ok([c1, c2, c3])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::anticommutator;
    use crate::rng::Stream;
    use alloc::vec::Vec;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn povm_sharp_limit_gives_projectors() {
        let z = DichotomicObservable::new(pauli_z()).unwrap();
        let (plus, minus) = make_povm(UnsharpSetting::sharp(), &z);
        assert!(
            (&plus - &ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, 0.0]).unwrap())
                .max_abs_entry()
                .abs()
                < 1e-15
        );
        assert!(
            (&minus - &ComplexMatrix::from_real(2, &[0.0, 0.0, 0.0, 1.0]).unwrap())
                .max_abs_entry()
                .abs()
                < 1e-15
        );
    }

    #[test]
    fn povm_half_sharp_effects() {
        let z = DichotomicObservable::new(pauli_z()).unwrap();
        let (plus, minus) = make_povm(UnsharpSetting::new(0.5).unwrap(), &z);
        assert!(
            (&plus - &ComplexMatrix::from_real(2, &[0.75, 0.0, 0.0, 0.25]).unwrap())
                .max_abs_entry()
                < 1e-15
        );
        assert!(
            (&minus - &ComplexMatrix::from_real(2, &[0.25, 0.0, 0.0, 0.75]).unwrap())
                .max_abs_entry()
                < 1e-15
        );
    }

    #[test]
    fn povm_effects_are_psd_and_complete() {
        let mut stream = Stream::new(21, 0);
        for dim in [2usize, 4, 8] {
            let b = DichotomicObservable::new(stream.dichotomic(dim)).unwrap();
            for k in 1..=10 {
                let s = UnsharpSetting::new(k as f64 / 10.0).unwrap();
                let (plus, minus) = make_povm(s, &b);
                let floor = (1.0 - s.eta()) / 2.0;
                assert!(min_eigenvalue(&plus).unwrap() >= floor - 1e-10);
                assert!(min_eigenvalue(&minus).unwrap() >= floor - 1e-10);
                assert!(
                    (&(&plus + &minus) - &ComplexMatrix::identity(dim)).max_abs_entry() < 1e-10
                );
            }
        }
    }

    #[test]
    fn kraus_pair_reproduces_povm_effects() {
        let x = DichotomicObservable::new(pauli_x()).unwrap();
        let s = UnsharpSetting::new(0.8).unwrap();
        let pair = kraus_pair(s, &x);
        let (plus, minus) = make_povm(s, &x);
        let from_plus = &pair.plus().dagger() * pair.plus();
        let from_minus = &pair.minus().dagger() * pair.minus();
        assert!((&from_plus - &plus).max_abs_entry() < 1e-12);
        assert!((&from_minus - &minus).max_abs_entry() < 1e-12);
    }

    #[test]
    fn kraus_limits() {
        let b = DichotomicObservable::new(pauli_z()).unwrap();
        // Sharp limit: projectors (1 +/- B) / 2.
        let sharp = kraus_pair(UnsharpSetting::sharp(), &b);
        let proj = (&ComplexMatrix::identity(2) + &pauli_z()).scale(0.5);
        assert!((sharp.plus() - &proj).max_abs_entry() < 1e-12);
        // Trivial limit: completeness still holds and the state is untouched.
        let trivial = kraus_pair(UnsharpSetting::new(0.0).unwrap(), &b);
        KrausPair::new(trivial.plus().clone(), trivial.minus().clone()).unwrap();
        let mut stream = Stream::new(4, 0);
        for dim in [2usize, 3] {
            let b = DichotomicObservable::new(stream.dichotomic(dim)).unwrap();
            let pair = kraus_pair(UnsharpSetting::new(stream.uniform()).unwrap(), &b);
            KrausPair::new(pair.plus().clone(), pair.minus().clone()).unwrap();
        }
    }

    #[test]
    fn luders_trivial_limit_is_identity_channel() {
        let (rho, _, bob) = canonical_realization();
        let out = luders_update(&rho, UnsharpSetting::new(0.0).unwrap(), &bob).unwrap();
        assert!((out.matrix() - rho.matrix()).max_abs_entry() < 1e-15);
    }

    #[test]
    fn luders_sharp_limit_matches_projective_form() {
        let (rho, _, bob) = canonical_realization();
        let out = luders_update(&rho, UnsharpSetting::sharp(), &bob).unwrap();
        let id2 = ComplexMatrix::identity(2);
        let mut expected = rho.matrix().scale(0.5);
        for y in 0..3 {
            let joint = id2.tensor(bob.get(y).matrix());
            expected = &expected + &(&(&joint * rho.matrix()) * &joint).scale(1.0 / 6.0);
        }
        assert!((out.matrix() - &expected).max_abs_entry() < 1e-14);
    }

    #[test]
    fn luders_matches_kraus_sum_oracle() {
        // Independent route: average K rho K over outcomes and settings.
        let mut stream = Stream::new(77, 0);
        let (rho, _, bob) = canonical_realization();
        for _ in 0..5 {
            let s = UnsharpSetting::new(stream.uniform().max(1e-3)).unwrap();
            let closed = luders_update(&rho, s, &bob).unwrap();
            let id2 = ComplexMatrix::identity(2);
            let mut kraus_sum = ComplexMatrix::zeros(4);
            for y in 0..3 {
                let pair = kraus_pair(s, bob.get(y));
                for k in [pair.plus(), pair.minus()] {
                    let joint = id2.tensor(k);
                    kraus_sum = &kraus_sum + &(&(&joint * rho.matrix()) * &joint).scale(1.0 / 3.0);
                }
            }
            assert!((closed.matrix() - &kraus_sum).max_abs_entry() < 1e-12);
        }
    }

    #[test]
    fn luders_preserves_trace_and_positivity_on_random_states() {
        let mut stream = Stream::new(100, 0);
        for dim in [2usize, 3] {
            let triple = loop {
                let result = ObservableTriple::from_matrices([
                    stream.dichotomic(dim),
                    stream.dichotomic(dim),
                    stream.dichotomic(dim),
                ]);
                if let Ok(t) = result {
                    break t;
                }
            };
            for _ in 0..10 {
                let rho = QuantumState::new(stream.density(dim * dim), (dim, dim)).unwrap();
                let s = UnsharpSetting::new(stream.uniform()).unwrap();
                let out = luders_update(&rho, s, &triple).unwrap();
                assert_close(out.matrix().trace().re, 1.0, 1e-12);
                assert!(min_eigenvalue(out.matrix()).unwrap() >= -1e-10);
            }
        }
    }

    #[test]
    fn canonical_realization_satisfies_optimality_conditions() {
        let (rho, alice, bob) = canonical_realization();
        assert!(rho.is_pure(1e-12));
        let half = ComplexMatrix::identity(2).scale(0.5);
        assert!((&rho.reduced_alice().unwrap() - &half).max_abs_entry() < 1e-12);
        assert!((&rho.reduced_bob().unwrap() - &half).max_abs_entry() < 1e-12);

        assert!(alice.trine_deviation().unwrap() < 1e-12);
        assert!(bob.trine_deviation().unwrap() < 1e-12);

        for (x, xp) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let ac = anticommutator(alice.get(x).matrix(), alice.get(xp).matrix()).unwrap();
            assert_close(rho.alice_expectation(&ac).unwrap(), -1.0, 1e-12);
        }
    }

    #[test]
    fn canonical_trine_conjugation_identity() {
        // sum_{y'} B_{y'} B_y B_{y'} = 0 as an operator identity.
        let (_, _, bob) = canonical_realization();
        for y in 0..3 {
            let mut sum = ComplexMatrix::zeros(2);
            for yp in 0..3 {
                let byp = bob.get(yp).matrix();
                sum = &sum + &(&(byp * bob.get(y).matrix()) * byp);
            }
            assert!(operator_norm(&sum).unwrap() < 1e-12);
        }
    }

    #[test]
    fn correlation_operators_match_pauli_forms() {
        let (rho, alice, bob) = canonical_realization();
        let [c1, c2, c3] = correlation_operators(&alice, &bob).unwrap();
        assert!((&c1 - &pauli_x().tensor(&pauli_x())).max_abs_entry() < 1e-12);
        assert!((&c2 - &pauli_z().tensor(&pauli_z())).max_abs_entry() < 1e-12);
        assert!((&c3 - &pauli_y().tensor(&pauli_y()).scale(-1.0)).max_abs_entry() < 1e-12);

        // Product structure, pairwise commutation, unit trace conditions.
        assert!((&c3 - &(&c2 * &c1)).max_abs_entry() < 1e-12);
        let ops = [&c1, &c2, &c3];
        for i in 0..3 {
            for j in (i + 1)..3 {
                let comm = &(ops[i] * ops[j]) - &(ops[j] * ops[i]);
                assert!(operator_norm(&comm).unwrap() < 1e-12);
            }
            assert_close(rho.expectation(ops[i]).unwrap(), 1.0, 1e-12);
        }
    }

    #[test]
    fn correlation_operators_reject_non_trine_input() {
        let (_, alice, _) = canonical_realization();
        let skew = ObservableTriple::from_matrices([pauli_x(), pauli_y(), pauli_z()]).unwrap();
        assert!(matches!(
            correlation_operators(&alice, &skew),
            Err(Error::NotTrine { .. })
        ));
    }

    #[test]
    fn state_validation_rejects_bad_inputs() {
        let too_big = ComplexMatrix::identity(4).scale(0.5);
        assert!(matches!(
            QuantumState::new(too_big, (2, 2)),
            Err(Error::TraceNotOne { .. })
        ));
        let negative = ComplexMatrix::from_real(2, &[1.5, 0.0, 0.0, -0.5]).unwrap();
        assert!(matches!(
            QuantumState::new(negative.clone(), (1, 2)),
            Err(Error::NotPositive { .. })
        ));
        let repaired = QuantumState::repaired(negative, (1, 2)).unwrap();
        assert_close(repaired.matrix().trace().re, 1.0, 1e-12);
        assert!(min_eigenvalue(repaired.matrix()).unwrap() >= -1e-15);
    }

    #[test]
    fn unsharpness_range_is_enforced() {
        assert!(UnsharpSetting::new(0.0).is_ok());
        assert!(UnsharpSetting::new(1.0).is_ok());
        assert!(matches!(
            UnsharpSetting::new(-0.1),
            Err(Error::UnsharpnessOutOfRange { .. })
        ));
        assert!(matches!(
            UnsharpSetting::new(1.1),
            Err(Error::UnsharpnessOutOfRange { .. })
        ));
    }

    #[test]
    fn biased_weights_must_normalize() {
        let (rho, _, bob) = canonical_realization();
        let s = UnsharpSetting::new(0.5).unwrap();
        assert!(matches!(
            luders_update_weighted(&rho, s, &bob, [0.5, 0.5, 0.5]),
            Err(Error::BadWeights { .. })
        ));
        let biased = luders_update_weighted(&rho, s, &bob, [0.5, 0.25, 0.25]).unwrap();
        assert_close(biased.matrix().trace().re, 1.0, 1e-12);
    }

    #[test]
    fn dichotomic_validation() {
        assert!(DichotomicObservable::new(pauli_y()).is_ok());
        let not_unitary = ComplexMatrix::from_real(2, &[0.5, 0.0, 0.0, -0.5]).unwrap();
        assert!(matches!(
            DichotomicObservable::new(not_unitary),
            Err(Error::NotDichotomic { .. })
        ));
        let not_hermitian = ComplexMatrix::from_entries(
            2,
            Vec::from([Complex64::ZERO, Complex64::I, Complex64::I, Complex64::ZERO]),
        )
        .unwrap();
        assert!(matches!(
            DichotomicObservable::new(not_hermitian),
            Err(Error::NotHermitian { .. })
        ));
    }
}
