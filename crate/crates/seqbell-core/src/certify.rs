//! Self-testing from observed Bell tuples: inverting the closed forms into
//! sharpness parameters, admissible ranges under partial violations, and the
//! trade-off surface relating the three sequential values.

use alloc::vec::Vec;
// Needed for float math in no_std builds; std-linked builds (tests,
// tooling) shadow it with inherent methods.
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// A violation (or its absence) is always measured against the
/// noncontextual bound.
pub const VIOLATION_THRESHOLD: f64 = 4.0;

/// The quantum optimum of the functional.
pub const QUANTUM_OPTIMUM: f64 = 6.0;

/// An observed triple of sequential Bell values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellTuple {
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
}

impl BellTuple {
    pub fn new(i1: f64, i2: f64, i3: f64) -> Self {
        Self { i1, i2, i3 }
    }

    /// Which of the three values exceed the noncontextual bound.
    pub fn violations(&self) -> ViolationFlags {
        ViolationFlags {
            i1: self.i1 > VIOLATION_THRESHOLD,
            i2: self.i2 > VIOLATION_THRESHOLD,
            i3: self.i3 > VIOLATION_THRESHOLD,
        }
    }

    /// No value may exceed the quantum optimum 6; anything above is not a
    /// Bell value of this functional.
    pub fn feasible(&self, tol: f64) -> bool {
        [self.i1, self.i2, self.i3]
            .iter()
            .all(|v| *v <= QUANTUM_OPTIMUM + tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ViolationFlags {
    pub i1: bool,
    pub i2: bool,
    pub i3: bool,
}

impl ViolationFlags {
    pub fn all(&self) -> bool {
        self.i1 && self.i2 && self.i3
    }
}

/// Interval endpoint carrying its exact closed form alongside the decimal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Endpoint {
    pub value: f64,
    pub closed_form: &'static str,
    /// Whether the endpoint itself is excluded.
    pub open: bool,
}

impl Endpoint {
    const fn open(value: f64, closed_form: &'static str) -> Self {
        Self {
            value,
            closed_form,
            open: true,
        }
    }

    const fn closed(value: f64, closed_form: &'static str) -> Self {
        Self {
            value,
            closed_form,
            open: false,
        }
    }
}

/// An admissible interval for a sharpness parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: Endpoint,
    pub hi: Endpoint,
}

/// Half-tolerance applied at endpoints when testing numeric containment;
/// the analytic intervals are open, so exact endpoints must not slip in
/// through rounding.
pub const ENDPOINT_TOL: f64 = 5e-10;

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo.open {
            x > self.lo.value + ENDPOINT_TOL
        } else {
            x >= self.lo.value - ENDPOINT_TOL
        };
        let below = if self.hi.open {
            x < self.hi.value - ENDPOINT_TOL
        } else {
            x <= self.hi.value + ENDPOINT_TOL
        };
        above && below
    }
}

fn xi(eta: f64) -> f64 {
    (1.0 - eta * eta).max(0.0).sqrt()
}

/// Lower bound on the second observer's sharpness given the first,
/// `4 / (3 (1 + xi_1))`; the second value can only violate above it.
pub fn eta2_lower_bound(eta1: f64) -> f64 {
    4.0 / (3.0 * (1.0 + xi(eta1)))
}

/// Upper bound on the second observer's sharpness compatible with a third
/// violation, `4 sqrt(3 xi_1 - 1) / (3 (1 + xi_1))`.
///
/// Only defined while `xi_1 > 1/3`, i.e. `eta_1 < 2 sqrt(2) / 3`.
pub fn eta2_upper_bound(eta1: f64) -> Result<f64> {
    let x = xi(eta1);
    if 3.0 * x <= 1.0 {
        return Err(Error::UnsharpnessOutOfRange {
            eta: eta1,
            range: "(0, 2*sqrt(2)/3)",
        });
    }
    Ok(4.0 * (3.0 * x - 1.0).sqrt() / (3.0 * (1.0 + x)))
}

/// The sharpness window for the second observer as a function of the first,
/// `(eta2_lower_bound, eta2_upper_bound)`.
///
/// At `eta1 = sqrt(5)/3` the upper bound closes onto `4/5`; at
/// `eta1 = 2/3` it evaluates to `~0.849`, wider than the universally quoted
/// `4/5`. Both views are exposed: this function keeps the `eta1` dependence,
/// [`certify_ranges`] quotes the `eta1`-free interval.
pub fn eta2_window_given_eta1(eta1: f64) -> Result<(f64, f64)> {
    Ok((eta2_lower_bound(eta1), eta2_upper_bound(eta1)?))
}

/// Lower bound on the third observer's sharpness given the first two,
/// `8 / (3 (1 + xi_1)(1 + xi_2))`.
pub fn eta3_lower_bound(eta1: f64, eta2: f64) -> f64 {
    8.0 / (3.0 * (1.0 + xi(eta1)) * (1.0 + xi(eta2)))
}

/// Floor of the third sharpness when all three observers violate:
/// `(3 + sqrt(5) - sqrt(6 sqrt(5) - 2)) / 2 ~= 0.92863`.
pub fn eta3_floor() -> f64 {
    let root5 = 5.0_f64.sqrt();
    (3.0 + root5 - (6.0 * root5 - 2.0).sqrt()) / 2.0
}

/// Nested admissible intervals given which sequential values violate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeReport {
    pub eta1: Interval,
    /// Present once the second value violates.
    pub eta2: Option<Interval>,
    /// Present once all three values violate.
    pub eta3: Option<Interval>,
}

/// Admissible sharpness ranges implied by the cumulative violation pattern.
///
/// - first value only: `eta1 in (2/3, 1]`;
/// - first and second: `eta1 in (2/3, 2 sqrt(2)/3)`,
///   `eta2 in (3 - sqrt(5), 1]`;
/// - all three: `eta1 in (2/3, sqrt(5)/3)`, `eta2 in (3 - sqrt(5), 4/5)`,
///   `eta3 in [eta3_floor, 1]`.
///
/// Requires the first flag: without a first violation nothing downstream is
/// certified.
pub fn certify_ranges(flags: ViolationFlags) -> Result<RangeReport> {
    if !flags.i1 {
        return Err(Error::NoFirstViolation);
    }
    let two_thirds = Endpoint::open(2.0 / 3.0, "2/3");
    let one = Endpoint::closed(1.0, "1");

    if !flags.i2 {
        return Ok(RangeReport {
            eta1: Interval {
                lo: two_thirds,
                hi: one,
            },
            eta2: None,
            eta3: None,
        });
    }

    let eta2_lo = Endpoint::open(3.0 - 5.0_f64.sqrt(), "3-sqrt(5)");
    if !flags.i3 {
        return Ok(RangeReport {
            eta1: Interval {
                lo: two_thirds,
                hi: Endpoint::open(2.0 * 2.0_f64.sqrt() / 3.0, "2*sqrt(2)/3"),
            },
            eta2: Some(Interval {
                lo: eta2_lo,
                hi: one,
            }),
            eta3: None,
        });
    }

    Ok(RangeReport {
        eta1: Interval {
            lo: two_thirds,
            hi: Endpoint::open(5.0_f64.sqrt() / 3.0, "sqrt(5)/3"),
        },
        eta2: Some(Interval {
            lo: eta2_lo,
            hi: Endpoint::open(4.0 / 5.0, "4/5"),
        }),
        eta3: Some(Interval {
            lo: Endpoint::closed(eta3_floor(), "(3+sqrt(5)-sqrt(6*sqrt(5)-2))/2"),
            hi: one,
        }),
    })
}

/// Result of inverting an observed tuple through the closed forms.
#[derive(Debug, Clone)]
pub struct CertificationResult {
    /// `i1 / 6`.
    pub eta1: f64,
    /// `i2 / (3 (1 + xi_1))`.
    pub eta2: f64,
    /// `2 i3 / (3 (1 + xi_1)(1 + xi_2))`; the smallest third sharpness able
    /// to produce `i3`, and the exact value when the tuple sits on the
    /// closed-form manifold.
    pub eta3_min: f64,
    /// Admissible interval for `eta1` given the observed violations.
    pub eta1_interval: Option<Interval>,
    /// Admissible interval for `eta2` given the observed violations,
    /// evaluated at the recovered `eta1`. This window is sharper than the
    /// universally quoted `(3 - sqrt(5), 4/5)` reported by
    /// [`certify_ranges`]; the quoted interval pins its upper endpoint at
    /// the worst admissible `eta1` and can exclude a boundary estimate the
    /// `eta1`-dependent window legitimately contains.
    pub eta2_interval: Option<Interval>,
    /// All three values violate and every recovered parameter lies in (0, 1].
    pub valid: bool,
    /// The tuple is reproducible by some sharpness assignment; false when a
    /// recovered parameter exceeds 1. Inconsistent tuples are flagged, never
    /// clamped.
    pub consistent: bool,
    /// Max-norm distance between the observed tuple and the closed-form
    /// tuple of the clamped parameters; zero exactly on the manifold.
    pub manifold_distance: f64,
}

/// Inverts an observed tuple into sharpness parameters.
///
/// `i1` outside `(0, 6]` is an error (no sharpness can produce it);
/// inconsistencies in `i2`, `i3` (recovered parameter above 1) are reported
/// through `consistent` and `manifold_distance` instead.
pub fn invert_tuple(tuple: &BellTuple) -> Result<CertificationResult> {
    if !(tuple.i1 > 0.0 && tuple.i1 <= QUANTUM_OPTIMUM + 1e-12) || !tuple.i1.is_finite() {
        return Err(Error::InfeasibleTuple { value: tuple.i1 });
    }
    let eta1 = (tuple.i1 / 6.0).min(1.0);
    let eta2 = tuple.i2 / (3.0 * (1.0 + xi(eta1)));
    let eta3_min = 2.0 * tuple.i3 / (3.0 * (1.0 + xi(eta1)) * (1.0 + xi(eta2.clamp(0.0, 1.0))));

    let consistent = (0.0..=1.0 + 1e-12).contains(&eta2) && (0.0..=1.0 + 1e-12).contains(&eta3_min);

    // Distance to the closed-form manifold: reconstruct from clamped
    // parameters and compare.
    let clamped = [
        eta1,
        eta2.clamp(f64::MIN_POSITIVE, 1.0),
        eta3_min.clamp(f64::MIN_POSITIVE, 1.0),
    ];
    let reconstructed = [
        6.0 * clamped[0],
        3.0 * clamped[1] * (1.0 + xi(clamped[0])),
        1.5 * clamped[2] * (1.0 + xi(clamped[0])) * (1.0 + xi(clamped[1])),
    ];
    let observed = [tuple.i1, tuple.i2, tuple.i3];
    let manifold_distance = observed
        .iter()
        .zip(&reconstructed)
        .map(|(o, r)| (o - r).abs())
        .fold(0.0, f64::max);

    let flags = tuple.violations();
    let (eta1_interval, eta2_interval) = if flags.i1 {
        let report = certify_ranges(flags)?;
        let eta2_interval = if flags.i2 {
            let lo = Endpoint::open(eta2_lower_bound(eta1), "4/(3(1+xi1))");
            let hi = match eta2_upper_bound(eta1) {
                Ok(h) if flags.i3 => Endpoint::open(h, "4*sqrt(3*xi1-1)/(3(1+xi1))"),
                _ => Endpoint::closed(1.0, "1"),
            };
            Some(Interval { lo, hi })
        } else {
            None
        };
        (Some(report.eta1), eta2_interval)
    } else {
        (None, None)
    };

    let in_unit = |x: f64| x > 0.0 && x <= 1.0 + 1e-12;
    let valid = flags.all() && in_unit(eta1) && in_unit(eta2) && in_unit(eta3_min);

    Ok(CertificationResult {
        eta1,
        eta2,
        eta3_min,
        eta1_interval,
        eta2_interval,
        valid,
        consistent,
        manifold_distance,
    })
}

/// Exact third value on the trade-off surface (third observer sharp),
/// expressed through the first two observed values, and its paraboloid
/// approximation `6 - (3/2) [(i1/6)^2 + (i2/6)^2]`.
pub fn surface_point(i1: f64, i2: f64) -> (f64, f64) {
    let first = 1.0 + (1.0 - (i1 / 6.0) * (i1 / 6.0)).max(0.0).sqrt();
    let ratio = i2 / (3.0 * first);
    let second = 1.0 + (1.0 - ratio * ratio).max(0.0).sqrt();
    let exact = 1.5 * first * second;
    let paraboloid = 6.0 - 1.5 * ((i1 / 6.0) * (i1 / 6.0) + (i2 / 6.0) * (i2 / 6.0));
    (exact, paraboloid)
}

/// Upper edge of the violation region in `i1`: `2 sqrt(5)`.
pub fn i1_upper_edge() -> f64 {
    2.0 * 5.0_f64.sqrt()
}

/// Upper edge of the violation region in `i2` at a given `i1`:
/// `4 sqrt(sqrt(36 - i1^2) / 2 - 1)`.
pub fn i2_upper_edge(i1: f64) -> f64 {
    4.0 * ((36.0 - i1 * i1).max(0.0).sqrt() / 2.0 - 1.0)
        .max(0.0)
        .sqrt()
}

/// One row of the trade-off surface table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceRow {
    pub i1: f64,
    pub i2: f64,
    pub i3_exact: f64,
    pub i3_paraboloid: f64,
}

/// Tabulates the surface on a square grid of the violation region
/// `4 < i1 < 2 sqrt(5)`, `4 < i2 < i2_upper_edge(i1)`.
///
/// The approximation error is reported per row, never asserted small.
pub fn surface_sweep(step: f64) -> Result<Vec<SurfaceRow>> {
    if !(step > 0.0 && step <= 0.5) {
        return Err(Error::BadStep {
            step,
            range: "(0, 0.5]",
        });
    }
    let mut rows = Vec::new();
    let mut i1 = 4.0 + step;
    while i1 < i1_upper_edge() {
        let hi2 = i2_upper_edge(i1);
        let mut i2 = 4.0 + step;
        while i2 < hi2 {
            let (i3_exact, i3_paraboloid) = surface_point(i1, i2);
            rows.push(SurfaceRow {
                i1,
                i2,
                i3_exact,
                i3_paraboloid,
            });
            i2 += step;
        }
        i1 += step;
    }
    if rows.is_empty() {
        return Err(Error::EmptyRegion { step });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::predicted_values;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn black_point_inverts_exactly() {
        let v = 120.0 / 29.0;
        let result = invert_tuple(&BellTuple::new(v, v, v)).unwrap();
        assert_close(result.eta1, 20.0 / 29.0, 1e-12);
        assert_close(result.eta2, 0.8, 1e-12);
        assert!(result.valid && result.consistent);
        assert!(result.manifold_distance < 1e-12);
        assert!(result.eta1_interval.unwrap().contains(result.eta1));
        assert!(result.eta2_interval.unwrap().contains(result.eta2));
    }

    #[test]
    fn sharp_first_observer_caps_the_second_value() {
        // At eta1 = 1 the second value cannot exceed 3; anything larger is
        // flagged inconsistent without clamping.
        let result = invert_tuple(&BellTuple::new(6.0, 3.5, 1.0)).unwrap();
        assert_close(result.eta1, 1.0, 1e-15);
        assert!(result.eta2 > 1.0);
        assert!(!result.consistent);
        assert!(result.manifold_distance > 0.4);
    }

    #[test]
    fn round_trip_through_the_closed_forms() {
        for &etas in &[
            [0.7, 0.8, 0.95],
            [0.69, 0.79, 0.93],
            [20.0 / 29.0, 0.8, 1.0],
        ] {
            let values = predicted_values(&etas).unwrap();
            let tuple = BellTuple::new(values[0], values[1], values[2]);
            let result = invert_tuple(&tuple).unwrap();
            assert_close(result.eta1, etas[0], 1e-12);
            assert_close(result.eta2, etas[1], 1e-12);
            assert!(result.eta3_min <= etas[2] + 1e-12);
            assert!(result.manifold_distance < 1e-12);
        }
    }

    #[test]
    fn round_trip_over_the_feasibility_grid() {
        // Every sharpness triple inside the nested violation windows must
        // invert back exactly, with the recovered eta3 never above the true
        // one.
        let n = 6;
        for i in 0..n {
            let eta1 = 2.0 / 3.0 + (5.0_f64.sqrt() / 3.0 - 2.0 / 3.0) * (i as f64 + 0.5) / n as f64;
            let (lo2, hi2) = eta2_window_given_eta1(eta1).unwrap();
            for j in 0..n {
                let eta2 = lo2 + (hi2 - lo2) * (j as f64 + 0.5) / n as f64;
                let lo3 = eta3_lower_bound(eta1, eta2);
                if lo3 >= 1.0 {
                    continue;
                }
                for k in 0..n {
                    let eta3 = lo3 + (1.0 - lo3) * (k as f64 + 0.5) / n as f64;
                    let values = predicted_values(&[eta1, eta2, eta3]).unwrap();
                    let result =
                        invert_tuple(&BellTuple::new(values[0], values[1], values[2])).unwrap();
                    assert_close(result.eta1, eta1, 1e-12);
                    assert_close(result.eta2, eta2, 1e-12);
                    assert!(result.eta3_min <= eta3 + 1e-12);
                    assert!(result.valid, "{eta1} {eta2} {eta3}");
                }
            }
        }
    }

    #[test]
    fn infeasible_first_value_is_an_error() {
        assert!(matches!(
            invert_tuple(&BellTuple::new(6.5, 4.0, 4.0)),
            Err(Error::InfeasibleTuple { .. })
        ));
        assert!(matches!(
            invert_tuple(&BellTuple::new(-1.0, 4.0, 4.0)),
            Err(Error::InfeasibleTuple { .. })
        ));
    }

    #[test]
    fn range_endpoints_are_the_quoted_closed_forms() {
        let single = certify_ranges(ViolationFlags {
            i1: true,
            i2: false,
            i3: false,
        })
        .unwrap();
        assert_close(single.eta1.lo.value, 2.0 / 3.0, 1e-15);
        assert_close(single.eta1.hi.value, 1.0, 1e-15);
        assert!(single.eta2.is_none());

        let double = certify_ranges(ViolationFlags {
            i1: true,
            i2: true,
            i3: false,
        })
        .unwrap();
        assert_close(double.eta1.hi.value, 2.0 * 2.0_f64.sqrt() / 3.0, 1e-15);
        assert_close(double.eta2.unwrap().lo.value, 3.0 - 5.0_f64.sqrt(), 1e-15);

        let triple = certify_ranges(ViolationFlags {
            i1: true,
            i2: true,
            i3: true,
        })
        .unwrap();
        assert_close(triple.eta1.hi.value, 5.0_f64.sqrt() / 3.0, 1e-15);
        assert_close(triple.eta2.unwrap().hi.value, 0.8, 1e-15);
        let floor = triple.eta3.unwrap().lo;
        assert_close(floor.value, eta3_floor(), 1e-15);
        assert_close(floor.value, 0.928625, 1e-6);
        assert_eq!(floor.closed_form, "(3+sqrt(5)-sqrt(6*sqrt(5)-2))/2");
    }

    #[test]
    fn missing_first_violation_is_rejected() {
        assert!(certify_ranges(ViolationFlags {
            i1: false,
            i2: true,
            i3: true,
        })
        .is_err());
    }

    #[test]
    fn eta2_window_endpoints() {
        // At the widest admissible eta1 the window's upper edge is ~0.849;
        // it tightens to exactly 4/5 at eta1 = sqrt(5)/3.
        let (lo, hi) = eta2_window_given_eta1(2.0 / 3.0).unwrap();
        assert_close(lo, 3.0 - 5.0_f64.sqrt(), 1e-12);
        assert_close(hi, 0.84933, 1e-4);
        let (_, hi) = eta2_window_given_eta1(5.0_f64.sqrt() / 3.0).unwrap();
        assert_close(hi, 0.8, 1e-12);
        assert!(eta2_upper_bound(0.99).is_err());
    }

    #[test]
    fn interval_containment_respects_open_endpoints() {
        let iv = Interval {
            lo: Endpoint::open(2.0 / 3.0, "2/3"),
            hi: Endpoint::closed(1.0, "1"),
        };
        assert!(!iv.contains(2.0 / 3.0));
        assert!(iv.contains(0.7));
        assert!(iv.contains(1.0));
        assert!(!iv.contains(1.0 + 1e-6));
    }

    #[test]
    fn surface_black_point_and_paraboloid_examples() {
        let v = 120.0 / 29.0;
        let (exact, _) = surface_point(v, v);
        assert_close(exact, v, 1e-12);

        let (_, paraboloid) = surface_point(4.0, 4.0);
        assert_close(paraboloid, 14.0 / 3.0, 1e-12);
    }

    #[test]
    fn violation_region_edges() {
        assert_close(i1_upper_edge(), 4.47213595499958, 1e-12);
        let at_four = i2_upper_edge(4.0);
        assert_close(at_four, 4.0 * (5.0_f64.sqrt() - 1.0).sqrt(), 1e-12);
        assert_close(at_four, 4.4472, 1e-4);
    }

    #[test]
    fn surface_sweep_is_monotone_and_bounded() {
        let rows = surface_sweep(0.05).unwrap();
        assert!(!rows.is_empty());
        for w in rows.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            if (a.i1 - b.i1).abs() < 1e-12 && b.i2 > a.i2 {
                assert!(b.i3_exact < a.i3_exact);
            }
        }
        // Monotone in i1 at fixed i2 as well.
        let probe = |i1: f64| surface_point(i1, 4.05).0;
        assert!(probe(4.2) < probe(4.1));
    }

    #[test]
    fn too_coarse_sweep_reports_empty_region() {
        assert!(matches!(surface_sweep(0.5), Err(Error::EmptyRegion { .. })));
        assert!(matches!(surface_sweep(0.6), Err(Error::BadStep { .. })));
    }
}
