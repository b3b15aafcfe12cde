//! Acceptance gate: recomputes every reference value of the toolkit and
//! prints one pass/fail line per check. Run with `--nocapture` to see the
//! table on success.

use seqbell_core::reproduce::{reference_checks, Relation};

#[test]
fn acceptance() {
    let rows = reference_checks(None, 7).expect("reference checks computable");
    let mut failures = 0;
    for row in &rows {
        let verdict = if row.pass { "PASS" } else { "FAIL" };
        let relation = match row.relation {
            Relation::ApproxEq => "~=",
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
            Relation::StrictlyBelow => "< ",
            Relation::Exact => "==",
        };
        println!(
            "{verdict} {id:<26} measured {measured:>22.16e} {relation} expected {expected:>22.16e} (tol {tol:.1e}) - {desc}",
            id = row.id,
            measured = row.measured,
            expected = row.expected,
            tol = row.tolerance,
            desc = row.description,
        );
        if !row.pass {
            failures += 1;
        }
    }
    assert_eq!(failures, 0, "{failures} acceptance check(s) failed");
}
