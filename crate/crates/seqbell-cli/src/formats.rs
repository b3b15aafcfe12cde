//! JSON schemas for scenarios and results.
//!
//! Complex matrices serialize as row-major arrays of `[re, im]` pairs with
//! an explicit `dim` field. Scenario fields accept either an explicit value
//! or the keyword `"canonical"` for the optimal qubit realization.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use seqbell_core::certify::{CertificationResult, Endpoint, Interval};
use seqbell_core::chain::{ChainConfig, ChainResult, ChainStep, TheoremReport};
use seqbell_core::matrix::ComplexMatrix;
use seqbell_core::quantum::{
    canonical_realization, ObservableTriple, QuantumState, UnsharpSetting,
};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    /// Row-major `[re, im]` pairs, `dim * dim` of them.
    pub entries: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            dim: m.dim(),
            entries: m.entries().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix, String> {
        ComplexMatrix::from_entries(
            self.dim,
            self.entries
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect(),
        )
        .map_err(|e| e.to_string())
    }
}

/// Either the keyword `"canonical"` or an explicit matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixSpec {
    Keyword(String),
    Explicit(MatrixJson),
}

/// Either the keyword `"canonical"` or three explicit matrices.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TripleSpec {
    Keyword(String),
    Explicit(Vec<MatrixJson>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BobJson {
    pub triple: TripleSpec,
    pub eta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<[f64; 3]>,
}

/// A full sequential scenario.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioJson {
    pub dims: [usize; 2],
    pub state: MatrixSpec,
    pub alice: TripleSpec,
    pub bobs: Vec<BobJson>,
}

fn require_canonical_keyword(keyword: &str, field: &str) -> Result<(), String> {
    if keyword == "canonical" {
        Ok(())
    } else {
        Err(format!(
            "{field}: unknown keyword {keyword:?}, expected \"canonical\" or an explicit value"
        ))
    }
}

fn triple_from_spec(
    spec: &TripleSpec,
    canonical: &ObservableTriple,
    field: &str,
) -> Result<ObservableTriple, String> {
    match spec {
        TripleSpec::Keyword(k) => {
            require_canonical_keyword(k, field)?;
            Ok(canonical.clone())
        }
        TripleSpec::Explicit(ms) => {
            if ms.len() != 3 {
                return Err(format!(
                    "{field}: expected exactly 3 matrices, got {}",
                    ms.len()
                ));
            }
            let m0 = ms[0].to_matrix()?;
            let m1 = ms[1].to_matrix()?;
            let m2 = ms[2].to_matrix()?;
            ObservableTriple::from_matrices([m0, m1, m2]).map_err(|e| format!("{field}: {e}"))
        }
    }
}

impl ScenarioJson {
    /// The canonical scenario at the given sharpness values.
    pub fn canonical(etas: &[f64]) -> Self {
        Self {
            dims: [2, 2],
            state: MatrixSpec::Keyword("canonical".into()),
            alice: TripleSpec::Keyword("canonical".into()),
            bobs: etas
                .iter()
                .map(|&eta| BobJson {
                    triple: TripleSpec::Keyword("canonical".into()),
                    eta,
                    weights: None,
                })
                .collect(),
        }
    }

    pub fn to_config(&self) -> Result<ChainConfig, String> {
        let (canonical_state, canonical_alice, canonical_bob) = canonical_realization();
        let dims = (self.dims[0], self.dims[1]);

        let initial_state = match &self.state {
            MatrixSpec::Keyword(k) => {
                require_canonical_keyword(k, "state")?;
                if dims != (2, 2) {
                    return Err("state: the canonical state requires dims [2, 2]".into());
                }
                canonical_state
            }
            MatrixSpec::Explicit(m) => {
                QuantumState::new(m.to_matrix()?, dims).map_err(|e| format!("state: {e}"))?
            }
        };
        let alice = triple_from_spec(&self.alice, &canonical_alice, "alice")?;
        let steps = self
            .bobs
            .iter()
            .enumerate()
            .map(|(i, bob)| {
                let field = format!("bobs[{i}]");
                let triple = triple_from_spec(&bob.triple, &canonical_bob, &field)?;
                let setting = UnsharpSetting::new(bob.eta).map_err(|e| format!("{field}: {e}"))?;
                Ok(ChainStep {
                    triple,
                    setting,
                    weights: bob.weights,
                })
            })
            .collect::<Result<Vec<_>, String>>()?;

        Ok(ChainConfig {
            initial_state,
            alice,
            steps,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EffectiveObservableJson {
    pub operator: MatrixJson,
    pub weight: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainResultJson {
    pub bell_values: Vec<f64>,
    /// Closed-form values for the same sharpness sequence; absent beyond
    /// the analyzed depth of four observers.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted_values: Option<Vec<f64>>,
    pub states: Vec<MatrixJson>,
    pub effective_observables: Vec<Vec<EffectiveObservableJson>>,
    pub exceeds_analyzed_depth: bool,
}

impl ChainResultJson {
    pub fn new(result: &ChainResult, predicted: Option<Vec<f64>>) -> Self {
        Self {
            bell_values: result.bell_values.clone(),
            predicted_values: predicted,
            states: result
                .states
                .iter()
                .map(|s| MatrixJson::from_matrix(s.matrix()))
                .collect(),
            effective_observables: result
                .effective_observables
                .iter()
                .map(|effs| {
                    effs.iter()
                        .map(|e| EffectiveObservableJson {
                            operator: MatrixJson::from_matrix(&e.operator),
                            weight: e.weight,
                        })
                        .collect()
                })
                .collect(),
            exceeds_analyzed_depth: result.exceeds_analyzed_depth,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EndpointJson {
    pub value: f64,
    pub closed_form: String,
    pub open: bool,
}

impl From<Endpoint> for EndpointJson {
    fn from(e: Endpoint) -> Self {
        Self {
            value: e.value,
            closed_form: e.closed_form.to_string(),
            open: e.open,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntervalJson {
    pub lo: EndpointJson,
    pub hi: EndpointJson,
}

impl From<Interval> for IntervalJson {
    fn from(iv: Interval) -> Self {
        Self {
            lo: iv.lo.into(),
            hi: iv.hi.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificationJson {
    pub eta1: f64,
    pub eta2: f64,
    pub eta3_min: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta1_interval: Option<IntervalJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta2_interval: Option<IntervalJson>,
    pub valid: bool,
    pub consistent: bool,
    pub manifold_distance: f64,
}

impl From<&CertificationResult> for CertificationJson {
    fn from(r: &CertificationResult) -> Self {
        Self {
            eta1: r.eta1,
            eta2: r.eta2,
            eta3_min: r.eta3_min,
            eta1_interval: r.eta1_interval.map(Into::into),
            eta2_interval: r.eta2_interval.map(Into::into),
            valid: r.valid,
            consistent: r.consistent,
            manifold_distance: r.manifold_distance,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ObserverResidualsJson {
    pub observer: usize,
    pub trine_sum: f64,
    pub anticommutator: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conjugated_sum: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nested_sum: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub effective_scaling: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form_scale: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TheoremReportJson {
    pub max_residual: f64,
    pub observers: Vec<ObserverResidualsJson>,
}

impl From<&TheoremReport> for TheoremReportJson {
    fn from(report: &TheoremReport) -> Self {
        Self {
            max_residual: report.max_residual(),
            observers: report
                .observers
                .iter()
                .map(|o| ObserverResidualsJson {
                    observer: o.observer,
                    trine_sum: o.trine_sum,
                    anticommutator: o.anticommutator,
                    conjugated_sum: o.conjugated_sum,
                    nested_sum: o.nested_sum,
                    effective_scaling: o.effective_scaling,
                    closed_form_scale: o.closed_form_scale,
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trips_through_json() {
        let (state, _, _) = canonical_realization();
        let json = MatrixJson::from_matrix(state.matrix());
        let text = serde_json::to_string(&json).unwrap();
        let back: MatrixJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_matrix().unwrap(), *state.matrix());
    }

    #[test]
    fn canonical_scenario_parses() {
        let text = r#"{
            "dims": [2, 2],
            "state": "canonical",
            "alice": "canonical",
            "bobs": [
                {"triple": "canonical", "eta": 0.8},
                {"triple": "canonical", "eta": 1.0, "weights": [0.5, 0.25, 0.25]}
            ]
        }"#;
        let scenario: ScenarioJson = serde_json::from_str(text).unwrap();
        let cfg = scenario.to_config().unwrap();
        assert_eq!(cfg.steps.len(), 2);
        assert_eq!(cfg.steps[1].weights, Some([0.5, 0.25, 0.25]));
    }

    #[test]
    fn unknown_keyword_is_rejected() {
        let scenario = ScenarioJson {
            dims: [2, 2],
            state: MatrixSpec::Keyword("bell".into()),
            alice: TripleSpec::Keyword("canonical".into()),
            bobs: vec![],
        };
        assert!(scenario.to_config().is_err());
    }

    #[test]
    fn explicit_scenario_matches_canonical() {
        let (state, alice, bob) = canonical_realization();
        let scenario = ScenarioJson {
            dims: [2, 2],
            state: MatrixSpec::Explicit(MatrixJson::from_matrix(state.matrix())),
            alice: TripleSpec::Explicit(
                alice
                    .matrices()
                    .iter()
                    .map(|m| MatrixJson::from_matrix(m))
                    .collect(),
            ),
            bobs: vec![BobJson {
                triple: TripleSpec::Explicit(
                    bob.matrices()
                        .iter()
                        .map(|m| MatrixJson::from_matrix(m))
                        .collect(),
                ),
                eta: 1.0,
                weights: None,
            }],
        };
        let cfg = scenario.to_config().unwrap();
        let values = seqbell_core::chain::run_chain(&cfg).unwrap().bell_values;
        assert!((values[0] - 6.0).abs() < 1e-12);
    }
}
