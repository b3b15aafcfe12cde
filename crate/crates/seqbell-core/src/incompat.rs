//! Norm-based degrees of measurement incompatibility for pairs, triples and
//! trine triples of dichotomic observables, the sequential lower bounds
//! certified by observed Bell values, and the two-setting CHSH baseline.
//!
//! All norms are spectral: that choice reproduces every quoted ceiling
//! (`2 sqrt(2) - 2` for pairs, `4 (sqrt(3) - 1)` for triples, `2` for trine
//! triples).

use crate::certify::{eta3_floor, BellTuple, VIOLATION_THRESHOLD};
// Needed for float math in no_std builds; std-linked builds (tests,
// tooling) shadow it with inherent methods.
use crate::eigen::operator_norm;
use crate::matrix::ComplexMatrix;
use crate::quantum::{
    canonical_realization, pauli_x, pauli_z, unsharp_update_with_settings, DichotomicObservable,
    UnsharpSetting,
};
use crate::{Error, Result, DEFAULT_TOL};
#[allow(unused_imports)]
use num_traits::Float;

/// Which flavor of degree a report quantifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IncompatKind {
    Pair,
    Triple,
    Trine,
}

/// A computed degree of incompatibility.
///
/// `incompatible` is the verdict `degree > 0` (up to [`DEFAULT_TOL`]);
/// `lower_bound_from_bell` can be attached when a device-independent bound
/// from observed Bell data accompanies the direct computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncompatibilityReport {
    pub degree: f64,
    pub kind: IncompatKind,
    pub lower_bound_from_bell: Option<f64>,
    pub incompatible: bool,
}

impl IncompatibilityReport {
    fn new(degree: f64, kind: IncompatKind) -> Self {
        Self {
            degree,
            kind,
            lower_bound_from_bell: None,
            incompatible: degree > DEFAULT_TOL,
        }
    }

    pub fn with_bell_bound(mut self, bound: f64) -> Self {
        self.lower_bound_from_bell = Some(bound);
        self
    }
}

/// Degree of incompatibility of two observables:
/// `||B1 + B2|| + ||B1 - B2|| - 2`, at most `2 sqrt(2) - 2` for dichotomic
/// inputs.
///
/// Raw matrices are accepted so degenerate probes remain expressible; the
/// dichotomy of genuine observables is enforced where they are built.
pub fn degree_pair(b1: &ComplexMatrix, b2: &ComplexMatrix) -> Result<IncompatibilityReport> {
    b1.check_same_dim(b2)?;
    let degree = operator_norm(&(b1 + b2))? + operator_norm(&(b1 - b2))? - 2.0;
    Ok(IncompatibilityReport::new(degree, IncompatKind::Pair))
}

/// Degree of incompatibility of three observables: the four signed-sum norms
/// minus 4, at most `4 (sqrt(3) - 1)`, saturated by pairwise anticommuting
/// observables.
///
/// The measure assigns positive degree to some commuting collinear triples
/// (three equal observables give 2); that edge is reported as-is.
pub fn degree_triple(
    b1: &ComplexMatrix,
    b2: &ComplexMatrix,
    b3: &ComplexMatrix,
) -> Result<IncompatibilityReport> {
    b1.check_same_dim(b2)?;
    b1.check_same_dim(b3)?;
    let degree = operator_norm(&(&(b1 + b2) + b3))?
        + operator_norm(&(&(b1 - b2) + b3))?
        + operator_norm(&(&(b1 + b2) - b3))?
        + operator_norm(&(&(&(-b1) + b2) + b3))?
        - 4.0;
    Ok(IncompatibilityReport::new(degree, IncompatKind::Triple))
}

/// Degree of incompatibility specialized to trine triples
/// (`B1 + B2 + B3 = 0`, enforced): the three mixed-sign norms minus 4, at
/// most 2, saturated when pairwise anticommutators equal -1.
///
/// With the trine constraint each mixed sum collapses to `-2 B_y`, which is
/// how the ceiling 2 arises for unit-norm observables.
pub fn degree_trine(
    b1: &ComplexMatrix,
    b2: &ComplexMatrix,
    b3: &ComplexMatrix,
) -> Result<IncompatibilityReport> {
    b1.check_same_dim(b2)?;
    b1.check_same_dim(b3)?;
    let sum_norm = operator_norm(&(&(b1 + b2) + b3))?;
    if sum_norm > DEFAULT_TOL {
        return Err(Error::NotTrine {
            deviation: sum_norm,
        });
    }
    let degree = operator_norm(&(&(b1 - b2) + b3))?
        + operator_norm(&(&(b1 + b2) - b3))?
        + operator_norm(&(&(&(-b1) + b2) + b3))?
        - 4.0;
    Ok(IncompatibilityReport::new(degree, IncompatKind::Trine))
}

/// Smeared anticommuting qubit triples are jointly measurable exactly up to
/// `eta = 1 / sqrt(3)`.
pub fn anticommuting_triple_compatible(eta: f64) -> bool {
    eta <= 1.0 / 3.0_f64.sqrt()
}

/// Smeared trine qubit triples are jointly measurable exactly up to
/// `eta = 2/3`.
pub fn trine_triple_compatible(eta: f64) -> bool {
    eta <= 2.0 / 3.0
}

/// Device-independent lower bound on one observer's trine degree, with the
/// violation verdict that accompanies it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SequentialTrineBound {
    pub lower_bound: f64,
    /// True iff the corresponding Bell value exceeds the noncontextual
    /// bound, which is exactly when the lower bound is positive.
    pub violating: bool,
}

/// Lower bounds on the three sequential observers' trine degrees from an
/// observed tuple and assumed sharpness values:
///
/// ```text
/// D_T(B^1) >= I^1 / eta_1 - 4
/// D_T(B^2) >= 2 I^2 / (eta_2 (1 + xi_1)) - 4
/// D_T(B^3) >= 4 I^3 / (eta_3 (1 + xi_1)(1 + xi_2)) - 4
/// ```
pub fn sequential_trine_bounds(
    tuple: &BellTuple,
    etas: (f64, f64, f64),
) -> Result<[SequentialTrineBound; 3]> {
    let s1 = UnsharpSetting::new(etas.0)?;
    let s2 = UnsharpSetting::new(etas.1)?;
    let s3 = UnsharpSetting::new(etas.2)?;
    for s in [s1, s2, s3] {
        s.require_positive()?;
    }
    let bounds = [
        tuple.i1 / s1.eta() - 4.0,
        2.0 * tuple.i2 / (s2.eta() * (1.0 + s1.xi())) - 4.0,
        4.0 * tuple.i3 / (s3.eta() * (1.0 + s1.xi()) * (1.0 + s2.xi())) - 4.0,
    ];
    let values = [tuple.i1, tuple.i2, tuple.i3];
    Ok(core::array::from_fn(|k| SequentialTrineBound {
        lower_bound: bounds[k],
        violating: values[k] > VIOLATION_THRESHOLD,
    }))
}

/// The sharpness locus on which all three observers certify the same degree
/// of incompatibility.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EqualIncompatibilityPoint {
    pub eta1: f64,
    pub eta2: f64,
    /// The common Bell value `I^1 = I^2 = I^3` on the locus.
    pub common_bell_value: f64,
}

/// Evaluates the equal-incompatibility locus at a given third sharpness:
///
/// ```text
/// eta1 = 4 eta3 (4 + eta3^2) / (16 + 12 eta3^2 + eta3^4)
/// eta2 = 4 eta3 / (4 + eta3^2)
/// I^k  = 24 eta3 (4 + eta3^2) / (16 + 12 eta3^2 + eta3^4)
/// ```
///
/// `eta3` must not drop below the admissible floor
/// `(3 + sqrt(5) - sqrt(6 sqrt(5) - 2)) / 2`.
pub fn equal_incompatibility_point(eta3: f64) -> Result<EqualIncompatibilityPoint> {
    let floor = eta3_floor();
    if !(eta3 >= floor && eta3 <= 1.0) {
        return Err(Error::Eta3BelowFloor { eta3, floor });
    }
    let sq = eta3 * eta3;
    let denominator = 16.0 + 12.0 * sq + sq * sq;
    Ok(EqualIncompatibilityPoint {
        eta1: 4.0 * eta3 * (4.0 + sq) / denominator,
        eta2: 4.0 * eta3 / (4.0 + sq),
        common_bell_value: 24.0 * eta3 * (4.0 + sq) / denominator,
    })
}

/// Two-setting (CHSH) baseline for two sequential observers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshBaseline {
    /// First and second observers' CHSH values, simulated on the canonical
    /// two-qubit realization.
    pub c1: f64,
    pub c2: f64,
    /// The matching closed forms `2 sqrt(2) eta_1` and
    /// `sqrt(2) eta_2 (1 + xi_1)`.
    pub c1_closed_form: f64,
    pub c2_closed_form: f64,
    /// Pair-degree lower bounds `c1 / eta_1 - 2` and
    /// `2 c2 / (1 + xi_1) - 2`.
    pub bob1_bound: f64,
    pub bob2_bound: f64,
    /// Sharpness window for double violation:
    /// `(1 / sqrt(2), sqrt(2 (sqrt(2) - 1)))`.
    pub eta1_window: (f64, f64),
}

/// Simulates the sequential CHSH experiment with the canonical realization
/// (maximally entangled state, Alice `(sx +/- sz)/sqrt(2)`, Bob `sx`, `sz`)
/// and reports values, closed forms and certified pair-degree bounds.
pub fn chsh_baseline(etas: (f64, f64)) -> Result<ChshBaseline> {
    let s1 = UnsharpSetting::new(etas.0)?;
    let s2 = UnsharpSetting::new(etas.1)?;
    s1.require_positive()?;
    s2.require_positive()?;

    let (rho, _, _) = canonical_realization();
    let inv_root2 = 0.5_f64.sqrt();
    let a1 = (&pauli_x() + &pauli_z()).scale(inv_root2);
    let a2 = (&pauli_x() - &pauli_z()).scale(inv_root2);
    let b1 = pauli_x();
    let b2 = pauli_z();

    let op = &a1.tensor(&(&b1 + &b2)) + &a2.tensor(&(&b1 - &b2));
    let c1 = s1.eta() * rho.expectation(&op)?;

    let ob1 = DichotomicObservable::new(b1)?;
    let ob2 = DichotomicObservable::new(b2)?;
    let rho2 = unsharp_update_with_settings(&rho, s1, &[(0.5, &ob1), (0.5, &ob2)])?;
    let c2 = s2.eta() * rho2.expectation(&op)?;

    let root2 = 2.0_f64.sqrt();
    Ok(ChshBaseline {
        c1,
        c2,
        c1_closed_form: 2.0 * root2 * s1.eta(),
        c2_closed_form: root2 * s2.eta() * (1.0 + s1.xi()),
        bob1_bound: c1 / s1.eta() - 2.0,
        bob2_bound: 2.0 * c2 / (1.0 + s1.xi()) - 2.0,
        eta1_window: (inv_root2, (2.0 * (root2 - 1.0)).sqrt()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::predicted_values;
    use crate::quantum::pauli_y;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn pair_degree_examples() {
        let max = degree_pair(&pauli_x(), &pauli_z()).unwrap();
        assert_close(max.degree, 2.0 * 2.0_f64.sqrt() - 2.0, 1e-12);
        assert!(max.incompatible);

        let none = degree_pair(&pauli_z(), &pauli_z()).unwrap();
        assert_close(none.degree, 0.0, 1e-12);
        assert!(!none.incompatible);

        // Oblique pair at 45 degrees: sqrt(2 + sqrt(2)) + sqrt(2 - sqrt(2)) - 2.
        let halfway = (&pauli_x() + &pauli_z()).scale(0.5_f64.sqrt());
        let oblique = degree_pair(&pauli_x(), &halfway).unwrap();
        let root2 = 2.0_f64.sqrt();
        let expected = (2.0 + root2).sqrt() + (2.0 - root2).sqrt() - 2.0;
        assert_close(oblique.degree, expected, 1e-12);
        assert_close(oblique.degree, 0.6131, 1e-4);
    }

    #[test]
    fn triple_degree_examples() {
        let max = degree_triple(&pauli_x(), &pauli_y(), &pauli_z()).unwrap();
        assert_close(max.degree, 4.0 * (3.0_f64.sqrt() - 1.0), 1e-12);

        // Collinear triple: the measure still assigns 3 + 1 + 1 + 1 - 4 = 2.
        let collinear = degree_triple(&pauli_z(), &pauli_z(), &pauli_z()).unwrap();
        assert_close(collinear.degree, 2.0, 1e-12);

        // Commuting sign patterns: norms add up exactly.
        let flipped = pauli_z().scale(-1.0);
        let mixed = degree_triple(&pauli_z(), &flipped, &pauli_z()).unwrap();
        assert_close(mixed.degree, 1.0 + 3.0 + 1.0 + 1.0 - 4.0, 1e-12);
    }

    #[test]
    fn trine_degree_saturates_at_two() {
        let (_, _, bob) = canonical_realization();
        let [b1, b2, b3] = bob.matrices();
        let report = degree_trine(b1, b2, b3).unwrap();
        assert_close(report.degree, 2.0, 1e-12);
        assert!(report.incompatible);

        // Each mixed-sign sum equals -2 B_y under the trine constraint.
        let m = &(&(b1 - b2) + b3) + &b2.scale(2.0);
        assert!(m.max_abs_entry() < 1e-12);
    }

    #[test]
    fn trine_degree_is_unitary_invariant() {
        let (_, _, bob) = canonical_realization();
        let theta = 0.7_f64;
        let u = ComplexMatrix::from_real(2, &[theta.cos(), -theta.sin(), theta.sin(), theta.cos()])
            .unwrap();
        let rotate = |m: &ComplexMatrix| &(&u * m) * &u.dagger();
        let [b1, b2, b3] = bob.matrices();
        let report = degree_trine(&rotate(b1), &rotate(b2), &rotate(b3)).unwrap();
        assert_close(report.degree, 2.0, 1e-12);
    }

    #[test]
    fn degenerate_zero_triple_is_maximally_compatible() {
        let zero = ComplexMatrix::zeros(2);
        let report = degree_trine(&zero, &zero, &zero).unwrap();
        assert_close(report.degree, -4.0, 1e-15);
        assert!(!report.incompatible);
    }

    #[test]
    fn non_trine_input_is_rejected() {
        assert!(matches!(
            degree_trine(&pauli_x(), &pauli_y(), &pauli_z()),
            Err(Error::NotTrine { .. })
        ));
    }

    #[test]
    fn joint_measurability_thresholds() {
        let threshold = 1.0 / 3.0_f64.sqrt();
        assert!(anticommuting_triple_compatible(threshold));
        assert!(!anticommuting_triple_compatible(threshold + 1e-9));
        assert!(trine_triple_compatible(2.0 / 3.0));
        assert!(!trine_triple_compatible(2.0 / 3.0 + 1e-9));
    }

    #[test]
    fn sequential_bounds_reach_the_ceiling_on_the_black_point() {
        let v = 120.0 / 29.0;
        let tuple = BellTuple::new(v, v, v);
        let bounds = sequential_trine_bounds(&tuple, (20.0 / 29.0, 0.8, 1.0)).unwrap();
        for b in bounds {
            assert_close(b.lower_bound, 2.0, 1e-12);
            assert!(b.violating);
        }
    }

    #[test]
    fn threshold_tuple_is_not_flagged_violating() {
        let tuple = BellTuple::new(4.0, 4.0, 4.0);
        let bounds = sequential_trine_bounds(&tuple, (2.0 / 3.0, 0.8, 1.0)).unwrap();
        assert_close(bounds[0].lower_bound, 2.0, 1e-12);
        assert!(!bounds[0].violating);
    }

    #[test]
    fn optimal_tuple_saturates_the_first_bound() {
        let tuple = BellTuple::new(6.0, 0.0, 0.0);
        let bounds = sequential_trine_bounds(&tuple, (1.0, 1.0, 1.0)).unwrap();
        assert_close(bounds[0].lower_bound, 2.0, 1e-12);
    }

    #[test]
    fn bounds_never_exceed_the_actual_trine_degree() {
        // Soundness: for ideal chains the certified lower bound must stay
        // below the degree of the triple actually measured (which is 2).
        for etas in [
            (0.70, 0.80, 0.95),
            (0.72, 0.78, 0.97),
            (20.0 / 29.0, 0.8, 1.0),
        ] {
            let values = predicted_values(&[etas.0, etas.1, etas.2]).unwrap();
            let tuple = BellTuple::new(values[0], values[1], values[2]);
            let bounds = sequential_trine_bounds(&tuple, etas).unwrap();
            for b in bounds {
                assert!(b.lower_bound <= 2.0 + 1e-9);
            }
        }
    }

    #[test]
    fn fixed_tuple_bounds_trade_off_in_eta1() {
        let v = 120.0 / 29.0;
        let tuple = BellTuple::new(v, v, v);
        let mut last = None;
        for i in 1..10 {
            let eta1 = 2.0 / 3.0 + (5.0_f64.sqrt() / 3.0 - 2.0 / 3.0) * i as f64 / 10.0;
            let bounds = sequential_trine_bounds(&tuple, (eta1, 0.8, 1.0)).unwrap();
            if let Some((b1, b2)) = last {
                assert!(bounds[0].lower_bound < b1);
                assert!(bounds[1].lower_bound > b2);
            }
            last = Some((bounds[0].lower_bound, bounds[1].lower_bound));
        }
    }

    #[test]
    fn equal_incompatibility_endpoint() {
        let point = equal_incompatibility_point(1.0).unwrap();
        assert_close(point.eta1, 20.0 / 29.0, 1e-15);
        assert_close(point.eta2, 0.8, 1e-15);
        assert_close(point.common_bell_value, 120.0 / 29.0, 1e-13);
        assert_close(point.common_bell_value, 4.1379, 1e-4);
    }

    #[test]
    fn locus_produces_equal_predicted_values() {
        for i in 0..10 {
            let eta3 = eta3_floor() + (1.0 - eta3_floor()) * (i as f64 + 0.5) / 10.0;
            let point = equal_incompatibility_point(eta3).unwrap();
            let values = predicted_values(&[point.eta1, point.eta2, eta3]).unwrap();
            assert_close(values[0], values[1], 1e-12);
            assert_close(values[1], values[2], 1e-12);
            assert_close(values[0], point.common_bell_value, 1e-12);
        }
    }

    #[test]
    fn below_floor_eta3_is_rejected() {
        assert!(matches!(
            equal_incompatibility_point(0.9),
            Err(Error::Eta3BelowFloor { .. })
        ));
    }

    #[test]
    fn chsh_baseline_matches_closed_forms() {
        let sharp = chsh_baseline((1.0, 1.0)).unwrap();
        assert_close(sharp.c1, 2.0 * 2.0_f64.sqrt(), 1e-12);
        assert_close(sharp.bob1_bound, 2.0 * 2.0_f64.sqrt() - 2.0, 1e-12);

        let example = chsh_baseline((0.8, 1.0)).unwrap();
        assert_close(example.c2, 2.0_f64.sqrt() * 1.6, 1e-12);
        assert_close(example.c2, 2.2627, 1e-4);
        assert_close(example.bob2_bound, 0.8284, 1e-4);
        assert_close(example.c1, example.c1_closed_form, 1e-12);
        assert_close(example.c2, example.c2_closed_form, 1e-12);

        let (lo, hi) = example.eta1_window;
        assert_close(lo, core::f64::consts::FRAC_1_SQRT_2, 1e-12);
        assert_close(hi, 0.9102, 1e-4);
    }
}
