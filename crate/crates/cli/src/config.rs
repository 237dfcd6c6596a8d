//! Experiment description files: JSON schema, validation, and conversion
//! into core types.
//!
//! A minimal experiment:
//!
//! ```json
//! {
//!   "initial_state": { "alpha": [1.0, 0.0], "beta": [0.0, 0.0] },
//!   "settings": [ { "bloch": [0.0, 0.0, 1.0], "eta": 0.2 } ],
//!   "sampling": { "shots": 1000, "seed": 42, "shards": 1 },
//!   "outputs": { "subsets": [[1]], "emit_distribution": true }
//! }
//! ```
//!
//! Each setting carries exactly one of `eta` or `chi`; subsets use 1-based
//! measurement indices. `selection` is optional and defaults to `none`.

use serde::Deserialize;

use unsharp_core::{BlochVector, MeasurementSetting, PolState, SelectionSpec, C64, N_MAX};

use crate::error::CliError;

const BLOCH_TOL: f64 = 1e-6;

/// Validated experiment description.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub initial_state: PolState,
    pub settings: Vec<MeasurementSetting>,
    pub selection: SelectionSpec,
    pub sampling: Sampling,
    pub outputs: Outputs,
}

#[derive(Debug, Clone, Copy)]
pub struct Sampling {
    pub shots: u64,
    pub seed: u64,
    pub shards: u64,
}

#[derive(Debug, Clone)]
pub struct Outputs {
    /// 0-based index subsets (converted from the 1-based file form).
    pub subsets: Vec<Vec<usize>>,
    pub emit_distribution: bool,
}

impl ExperimentConfig {
    pub fn levels(&self) -> usize {
        self.settings.len()
    }

    pub fn etas(&self) -> Vec<f64> {
        self.settings.iter().map(|s| s.eta()).collect()
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    initial_state: RawState,
    settings: Vec<RawSetting>,
    #[serde(default)]
    selection: Option<RawSelection>,
    #[serde(default)]
    sampling: Option<RawSampling>,
    #[serde(default)]
    outputs: Option<RawOutputs>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    alpha: [f64; 2],
    beta: [f64; 2],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSetting {
    bloch: [f64; 3],
    #[serde(default)]
    eta: Option<f64>,
    #[serde(default)]
    chi: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSelection {
    mode: String,
    #[serde(default)]
    final_state: Option<RawState>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSampling {
    #[serde(default)]
    shots: i64,
    #[serde(default)]
    seed: u64,
    #[serde(default = "default_shards")]
    shards: i64,
}

fn default_shards() -> i64 {
    1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutputs {
    #[serde(default)]
    subsets: Vec<Vec<i64>>,
    #[serde(default = "default_true")]
    emit_distribution: bool,
}

fn default_true() -> bool {
    true
}

/// Parse and validate an experiment file.
pub fn parse_experiment(text: &str) -> Result<ExperimentConfig, CliError> {
    let raw: RawConfig = serde_json::from_str(text)
        .map_err(|e| CliError::Schema(format!("invalid experiment file: {e}")))?;

    let initial_state = convert_state(&raw.initial_state, "initial_state")?;

    if raw.settings.is_empty() {
        return Err(CliError::Schema("settings: at least one measurement is required".into()));
    }
    if raw.settings.len() > N_MAX {
        return Err(CliError::Range(format!(
            "settings: {} levels exceed the maximum of {N_MAX}",
            raw.settings.len()
        )));
    }
    let settings = raw
        .settings
        .iter()
        .enumerate()
        .map(|(i, s)| convert_setting(s, i))
        .collect::<Result<Vec<_>, _>>()?;

    let selection = convert_selection(raw.selection.as_ref())?;

    let sampling = match raw.sampling {
        None => Sampling { shots: 0, seed: 0, shards: 1 },
        Some(s) => {
            if s.shots < 0 {
                return Err(CliError::Range(format!("sampling.shots: {} is negative", s.shots)));
            }
            if s.shards < 1 {
                return Err(CliError::Range(format!(
                    "sampling.shards: {} must be at least 1",
                    s.shards
                )));
            }
            Sampling {
                shots: s.shots as u64,
                seed: s.seed,
                shards: s.shards as u64,
            }
        }
    };

    let outputs = match raw.outputs {
        None => Outputs {
            subsets: Vec::new(),
            emit_distribution: true,
        },
        Some(o) => Outputs {
            subsets: convert_subsets(&o.subsets, settings.len())?,
            emit_distribution: o.emit_distribution,
        },
    };

    Ok(ExperimentConfig {
        initial_state,
        settings,
        selection,
        sampling,
        outputs,
    })
}

fn convert_state(raw: &RawState, field: &str) -> Result<PolState, CliError> {
    let alpha = C64::new(raw.alpha[0], raw.alpha[1]);
    let beta = C64::new(raw.beta[0], raw.beta[1]);
    if !alpha.re.is_finite() || !alpha.im.is_finite() || !beta.re.is_finite() || !beta.im.is_finite()
    {
        return Err(CliError::Range(format!("{field}: amplitudes must be finite")));
    }
    PolState::new(alpha, beta)
        .map_err(|e| CliError::Range(format!("{field}: {e}")))
}

fn convert_setting(raw: &RawSetting, index: usize) -> Result<MeasurementSetting, CliError> {
    let field = format!("settings[{index}]");
    let [x, y, z] = raw.bloch;
    let norm = (x * x + y * y + z * z).sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > BLOCH_TOL {
        return Err(CliError::Range(format!(
            "{field}.bloch: norm {norm} deviates from 1 beyond {BLOCH_TOL}"
        )));
    }
    let n = BlochVector::from_components(x, y, z)
        .map_err(|e| CliError::Range(format!("{field}.bloch: {e}")))?;
    match (raw.eta, raw.chi) {
        (Some(_), Some(_)) => Err(CliError::Schema(format!(
            "{field}: eta and chi are mutually exclusive"
        ))),
        (None, None) => Err(CliError::Schema(format!(
            "{field}: one of eta or chi is required"
        ))),
        (Some(eta), None) => MeasurementSetting::new(n, eta)
            .map_err(|e| CliError::Range(format!("{field}.eta: {e}"))),
        (None, Some(chi)) => MeasurementSetting::from_chi(n, chi)
            .map_err(|e| CliError::Range(format!("{field}.chi: {e}"))),
    }
}

fn convert_selection(raw: Option<&RawSelection>) -> Result<SelectionSpec, CliError> {
    let Some(raw) = raw else {
        return Ok(SelectionSpec::None);
    };
    match raw.mode.as_str() {
        "none" => {
            if raw.final_state.is_some() {
                return Err(CliError::Schema(
                    "selection.final_state: not allowed when mode is \"none\"".into(),
                ));
            }
            Ok(SelectionSpec::None)
        }
        "postselect" => {
            let state = raw.final_state.as_ref().ok_or_else(|| {
                CliError::Schema("selection.final_state: required for mode \"postselect\"".into())
            })?;
            Ok(SelectionSpec::Postselect(convert_state(
                state,
                "selection.final_state",
            )?))
        }
        "reselect" => {
            if raw.final_state.is_some() {
                return Err(CliError::Schema(
                    "selection.final_state: reselection fixes the final state to the initial one"
                        .into(),
                ));
            }
            Ok(SelectionSpec::Reselect)
        }
        other => Err(CliError::Schema(format!(
            "selection.mode: unknown mode \"{other}\""
        ))),
    }
}

fn convert_subsets(raw: &[Vec<i64>], levels: usize) -> Result<Vec<Vec<usize>>, CliError> {
    raw.iter()
        .enumerate()
        .map(|(i, subset)| {
            if subset.is_empty() {
                return Err(CliError::Schema(format!(
                    "outputs.subsets[{i}]: subset must not be empty"
                )));
            }
            subset
                .iter()
                .map(|&k| {
                    if k < 1 || k as usize > levels {
                        Err(CliError::Range(format!(
                            "outputs.subsets[{i}]: index {k} outside 1..={levels}"
                        )))
                    } else {
                        Ok(k as usize - 1)
                    }
                })
                .collect()
        })
        .collect()
}
