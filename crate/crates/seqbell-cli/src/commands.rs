//! Subcommand implementations. Each returns the rendered document so the
//! binary stays a thin dispatcher and tests can call straight in.

use std::fs;
use std::path::Path;
use std::thread;

use serde::Serialize;

use seqbell_core::bell::{local_bound, pnc_bound};
use seqbell_core::certify::{invert_tuple, surface_sweep, BellTuple};
use seqbell_core::chain::{predicted_values, run_chain, verify_theorem_conditions, ChainConfig};
use seqbell_core::incompat::{
    anticommuting_triple_compatible, chsh_baseline, degree_pair, degree_trine, degree_triple,
    equal_incompatibility_point, sequential_trine_bounds, trine_triple_compatible,
};
use seqbell_core::quantum::{canonical_realization, pauli_x, pauli_y, pauli_z};
use seqbell_core::reproduce::{reference_checks, CheckOutcome, Relation};
use seqbell_core::seesaw::seesaw_max;

use crate::formats::{CertificationJson, ChainResultJson, ScenarioJson, TheoremReportJson};
use crate::output::{csv_document, float17, json_document};

/// Distinguishes bad invocations (exit 2) from failed runs (exit 1).
#[derive(Debug)]
pub enum CommandError {
    Usage(String),
    Failure(String),
}

impl std::fmt::Display for CommandError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CommandError::Usage(msg) | CommandError::Failure(msg) => write!(f, "{msg}"),
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> CommandError {
    CommandError::Usage(e.to_string())
}

fn failure<E: std::fmt::Display>(e: E) -> CommandError {
    CommandError::Failure(e.to_string())
}

#[derive(Serialize)]
struct SeesawJson {
    dim: usize,
    value: f64,
    converged: bool,
}

#[derive(Serialize)]
struct BoundsJson {
    local: f64,
    pnc: f64,
    quantum: Vec<SeesawJson>,
    restarts: usize,
    seed: u64,
}

/// `bounds`: the three bounds, with the quantum one probed by see-saw per
/// local dimension.
pub fn bounds(seed: u64) -> Result<String, CommandError> {
    const RESTARTS: usize = 50;
    let quantum = [2usize, 3]
        .iter()
        .map(|&dim| {
            let outcome = seesaw_max(dim, RESTARTS, seed).map_err(failure)?;
            Ok(SeesawJson {
                dim,
                value: outcome.value,
                converged: outcome.converged,
            })
        })
        .collect::<Result<Vec<_>, CommandError>>()?;
    Ok(json_document(&BoundsJson {
        local: local_bound(),
        pnc: pnc_bound(),
        quantum,
        restarts: RESTARTS,
        seed,
    }))
}

fn load_scenario(path: &Path) -> Result<ChainConfig, CommandError> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let scenario: ScenarioJson =
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    scenario
        .to_config()
        .map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// `chain`: simulate the scenario and report values, post-measurement
/// states and effective observables, with closed forms alongside when the
/// chain is canonical-depth.
pub fn chain(config_path: &Path) -> Result<String, CommandError> {
    let cfg = load_scenario(config_path)?;
    let result = run_chain(&cfg).map_err(failure)?;
    let etas: Vec<f64> = cfg.steps.iter().map(|s| s.setting.eta()).collect();
    let predicted = predicted_values(&etas).ok();
    Ok(json_document(&ChainResultJson::new(&result, predicted)))
}

/// `sweep`: canonical-chain values over the sharpness grid, one row per
/// `(eta1, eta2, eta3)` with a sharp fourth observer appended.
pub fn sweep(step: f64, threads: usize) -> Result<String, CommandError> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(usage(format!("step {step} outside (0, 1]")));
    }
    let n = (1.0 / step).round() as usize;
    let grid: Vec<f64> = (1..=n).map(|i| (i as f64 * step).min(1.0)).collect();

    let slice_rows = |eta1: f64| -> Result<Vec<Vec<f64>>, String> {
        let mut rows = Vec::new();
        for &eta2 in &grid {
            for &eta3 in &grid {
                let cfg =
                    ChainConfig::canonical(&[eta1, eta2, eta3, 1.0]).map_err(|e| e.to_string())?;
                let values = run_chain(&cfg).map_err(|e| e.to_string())?.bell_values;
                rows.push(vec![
                    eta1, eta2, eta3, values[0], values[1], values[2], values[3],
                ]);
            }
        }
        Ok(rows)
    };

    let mut slices: Vec<Result<Vec<Vec<f64>>, String>> = Vec::new();
    if threads <= 1 {
        for &eta1 in &grid {
            slices.push(slice_rows(eta1));
        }
    } else {
        // One slice per eta1 value, distributed over a bounded worker pool;
        // output order stays the grid order regardless of scheduling.
        let chunk = grid.len().div_ceil(threads);
        let mut collected: Vec<Option<Result<Vec<Vec<f64>>, String>>> = Vec::new();
        collected.resize_with(grid.len(), || None);
        thread::scope(|scope| {
            for (chunk_index, chunk_slots) in collected.chunks_mut(chunk).enumerate() {
                let grid = &grid;
                let slice_rows = &slice_rows;
                scope.spawn(move || {
                    for (offset, slot) in chunk_slots.iter_mut().enumerate() {
                        let index = chunk_index * chunk + offset;
                        *slot = Some(slice_rows(grid[index]));
                    }
                });
            }
        });
        slices = collected
            .into_iter()
            .map(|slot| slot.expect("every slot filled"))
            .collect();
    }

    let mut rows = Vec::new();
    for slice in slices {
        rows.extend(slice.map_err(CommandError::Failure)?);
    }
    Ok(csv_document(
        &["eta1", "eta2", "eta3", "I1", "I2", "I3", "I4"],
        &rows,
    ))
}

/// `certify`: invert an observed tuple.
pub fn certify(i1: f64, i2: f64, i3: f64) -> Result<String, CommandError> {
    let result = invert_tuple(&BellTuple::new(i1, i2, i3)).map_err(usage)?;
    Ok(json_document(&CertificationJson::from(&result)))
}

/// `surface`: the trade-off surface table.
pub fn surface(step: f64) -> Result<String, CommandError> {
    let rows = surface_sweep(step).map_err(usage)?;
    let data: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| vec![r.i1, r.i2, r.i3_exact, r.i3_paraboloid])
        .collect();
    Ok(csv_document(
        &["i1", "i2", "i3_exact", "i3_paraboloid"],
        &data,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum IncompatMode {
    Pair,
    Triple,
    Trine,
    Sequential,
    Chsh,
}

#[derive(Serialize)]
struct DegreeJson {
    mode: &'static str,
    observables: &'static str,
    degree: f64,
    incompatible: bool,
    ceiling: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    smear_compatibility_threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    smeared_compatible_at_eta: Option<bool>,
}

/// Arguments of the `incompat` subcommand beyond the mode.
pub struct IncompatArgs {
    pub eta1: Option<f64>,
    pub eta2: Option<f64>,
    pub eta3: f64,
    pub step: f64,
    pub tuple: Option<(f64, f64, f64)>,
}

/// `incompat`: reference degrees for the named mode, the sequential-bounds
/// CSV, or the CHSH baseline.
pub fn incompat(mode: IncompatMode, args: &IncompatArgs) -> Result<String, CommandError> {
    match mode {
        IncompatMode::Pair => {
            let report = degree_pair(&pauli_x(), &pauli_z()).map_err(failure)?;
            Ok(json_document(&DegreeJson {
                mode: "pair",
                observables: "(sx, sz)",
                degree: report.degree,
                incompatible: report.incompatible,
                ceiling: 2.0 * 2.0_f64.sqrt() - 2.0,
                smear_compatibility_threshold: None,
                smeared_compatible_at_eta: None,
            }))
        }
        IncompatMode::Triple => {
            let report = degree_triple(&pauli_x(), &pauli_y(), &pauli_z()).map_err(failure)?;
            Ok(json_document(&DegreeJson {
                mode: "triple",
                observables: "(sx, sy, sz)",
                degree: report.degree,
                incompatible: report.incompatible,
                ceiling: 4.0 * (3.0_f64.sqrt() - 1.0),
                smear_compatibility_threshold: Some(1.0 / 3.0_f64.sqrt()),
                smeared_compatible_at_eta: args.eta1.map(anticommuting_triple_compatible),
            }))
        }
        IncompatMode::Trine => {
            let (_, _, bob) = canonical_realization();
            let [b1, b2, b3] = bob.matrices();
            let report = degree_trine(b1, b2, b3).map_err(failure)?;
            Ok(json_document(&DegreeJson {
                mode: "trine",
                observables: "canonical trine triple",
                degree: report.degree,
                incompatible: report.incompatible,
                ceiling: 2.0,
                smear_compatibility_threshold: Some(2.0 / 3.0),
                smeared_compatible_at_eta: args.eta1.map(trine_triple_compatible),
            }))
        }
        IncompatMode::Sequential => sequential_csv(args),
        IncompatMode::Chsh => {
            let etas = (args.eta1.unwrap_or(0.8), args.eta2.unwrap_or(1.0));
            let baseline = chsh_baseline(etas).map_err(usage)?;
            #[derive(Serialize)]
            struct ChshJson {
                eta1: f64,
                eta2: f64,
                c1: f64,
                c2: f64,
                c1_closed_form: f64,
                c2_closed_form: f64,
                bob1_bound: f64,
                bob2_bound: f64,
                eta1_window: [f64; 2],
            }
            Ok(json_document(&ChshJson {
                eta1: etas.0,
                eta2: etas.1,
                c1: baseline.c1,
                c2: baseline.c2,
                c1_closed_form: baseline.c1_closed_form,
                c2_closed_form: baseline.c2_closed_form,
                bob1_bound: baseline.bob1_bound,
                bob2_bound: baseline.bob2_bound,
                eta1_window: [baseline.eta1_window.0, baseline.eta1_window.1],
            }))
        }
    }
}

/// Sequential mode: certified lower bounds on the three observers' trine
/// degrees over an `(eta1, eta2)` grid at fixed `eta3`, for a fixed
/// observed tuple (default: the equal-incompatibility tuple at `eta3`).
fn sequential_csv(args: &IncompatArgs) -> Result<String, CommandError> {
    if !(args.step > 0.0 && args.step <= 0.5) {
        return Err(usage(format!("step {} outside (0, 0.5]", args.step)));
    }
    let tuple = match args.tuple {
        Some((i1, i2, i3)) => BellTuple::new(i1, i2, i3),
        None => {
            let point = equal_incompatibility_point(args.eta3).map_err(usage)?;
            BellTuple::new(
                point.common_bell_value,
                point.common_bell_value,
                point.common_bell_value,
            )
        }
    };

    let eta1_window = (2.0 / 3.0, 5.0_f64.sqrt() / 3.0);
    let eta2_window = (3.0 - 5.0_f64.sqrt(), 0.8);
    let mut rows = Vec::new();
    let mut eta1 = eta1_window.0 + args.step;
    while eta1 < eta1_window.1 {
        let mut eta2 = eta2_window.0 + args.step;
        while eta2 < eta2_window.1 {
            let bounds = sequential_trine_bounds(&tuple, (eta1, eta2, args.eta3)).map_err(usage)?;
            rows.push(vec![
                eta1,
                eta2,
                bounds[0].lower_bound,
                bounds[1].lower_bound,
                bounds[2].lower_bound,
            ]);
            eta2 += args.step;
        }
        eta1 += args.step;
    }
    if rows.is_empty() {
        return Err(usage(format!(
            "step {} leaves no grid points inside the admissible windows",
            args.step
        )));
    }
    Ok(csv_document(
        &["eta1", "eta2", "bob1_bound", "bob2_bound", "bob3_bound"],
        &rows,
    ))
}

/// `verify`: operator-condition residuals for a scenario (or the canonical
/// chain at the given sharpness values).
pub fn verify(config: Option<&Path>, etas: [f64; 3]) -> Result<String, CommandError> {
    let cfg = match config {
        Some(path) => load_scenario(path)?,
        None => ChainConfig::canonical(&etas).map_err(usage)?,
    };
    let report = verify_theorem_conditions(&cfg).map_err(failure)?;
    Ok(json_document(&TheoremReportJson::from(&report)))
}

#[derive(Serialize)]
struct CheckJson {
    id: &'static str,
    description: &'static str,
    measured: f64,
    expected: f64,
    tolerance: f64,
    relation: &'static str,
    pass: bool,
}

fn relation_symbol(relation: Relation) -> &'static str {
    match relation {
        Relation::ApproxEq => "~=",
        Relation::AtMost => "<=",
        Relation::AtLeast => ">=",
        Relation::StrictlyBelow => "<",
        Relation::Exact => "==",
    }
}

/// Rendered outcome of the `reproduce` subcommand.
pub struct ReproduceOutcome {
    pub table: String,
    pub json: String,
    pub all_pass: bool,
}

/// `reproduce`: recompute every reference value and render the verdict
/// table (and JSON rows for `--out`).
pub fn reproduce(tolerance: Option<f64>, seed: u64) -> Result<ReproduceOutcome, CommandError> {
    if let Some(tol) = tolerance {
        if !tol.is_finite() || tol <= 0.0 {
            return Err(usage(format!("tolerance {tol} must be positive")));
        }
    }
    let rows = reference_checks(tolerance, seed).map_err(failure)?;
    let mut table = String::new();
    table.push_str(&format!(
        "{:<4} {:<26} {:>24} {:<2} {:>24} {:>9}  description\n",
        "", "check", "measured", "", "expected", "tol"
    ));
    for row in &rows {
        table.push_str(&format!(
            "{:<4} {:<26} {:>24} {:<2} {:>24} {:>9.1e}  {}\n",
            if row.pass { "PASS" } else { "FAIL" },
            row.id,
            float17(row.measured),
            relation_symbol(row.relation),
            float17(row.expected),
            row.tolerance,
            row.description,
        ));
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    table.push_str(&format!(
        "{} checks: {} passed, {} failed\n",
        rows.len(),
        rows.len() - failed,
        failed
    ));

    let json_rows: Vec<CheckJson> = rows.iter().map(check_json).collect();
    Ok(ReproduceOutcome {
        table,
        json: json_document(&json_rows),
        all_pass: failed == 0,
    })
}

fn check_json(row: &CheckOutcome) -> CheckJson {
    CheckJson {
        id: row.id,
        description: row.description,
        measured: row.measured,
        expected: row.expected,
        tolerance: row.tolerance,
        relation: relation_symbol(row.relation),
        pass: row.pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_reports_five_four_six() {
        let text = bounds(7).unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["local"], 5.0);
        assert_eq!(value["pnc"], 4.0);
        let d2 = value["quantum"][0]["value"].as_f64().unwrap();
        assert!((d2 - 6.0).abs() < 1e-6);
    }

    #[test]
    fn sweep_is_deterministic_across_thread_counts() {
        let single = sweep(0.25, 1).unwrap();
        let multi = sweep(0.25, 3).unwrap();
        assert_eq!(single, multi);
        assert!(single.starts_with("eta1,eta2,eta3,I1,I2,I3,I4\n"));
        assert_eq!(single.lines().count(), 1 + 4 * 4 * 4);
    }

    #[test]
    fn certify_black_point() {
        let v = 120.0 / 29.0;
        let text = certify(v, v, v).unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!((value["eta1"].as_f64().unwrap() - 20.0 / 29.0).abs() < 1e-12);
        assert!(value["valid"].as_bool().unwrap());
    }

    #[test]
    fn sequential_incompat_contains_the_black_point_bounds() {
        let args = IncompatArgs {
            eta1: None,
            eta2: None,
            eta3: 1.0,
            step: 0.01,
            tuple: None,
        };
        let csv = incompat(IncompatMode::Sequential, &args).unwrap();
        assert!(csv.starts_with("eta1,eta2,bob1_bound,bob2_bound,bob3_bound\n"));
        assert!(csv.lines().count() > 10);
    }

    #[test]
    fn reproduce_passes_at_default_tolerances() {
        let outcome = reproduce(None, 7).unwrap();
        assert!(outcome.all_pass, "{}", outcome.table);
        assert!(outcome.table.contains("optimal-value"));
    }
}
