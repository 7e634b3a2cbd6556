//! Scenario registry, decoherence sweep, state-spec files and report rendering.

mod render;
mod scenarios;
mod spec_file;
mod sweep;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::MatrixError;
use crate::measurement::MeasurementError;
use crate::measures::InformationReport;
use crate::states::StateError;

pub use render::{format_real, render_report, round_significant, Format, Report};
pub use scenarios::{run_scenario, SCENARIOS};
pub use spec_file::{parse_state_spec, render_state_spec, StateSpec, SPEC_NORM_TOLERANCE};
pub use sweep::{decoherence_sweep, SweepStatistics};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("bad parameter `{key}`: {reason}")]
    BadParameter { key: String, reason: String },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("validation failed: {invariant} (offending magnitude {magnitude:e})")]
    Validation { invariant: String, magnitude: f64 },
    #[error(transparent)]
    Measurement(#[from] MeasurementError),
}

impl HarnessError {
    pub(crate) fn bad(key: &str, reason: impl Into<String>) -> Self {
        Self::BadParameter { key: key.to_string(), reason: reason.into() }
    }

    /// Process exit code for the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Parse { .. } | Self::Validation { .. } => 2,
            Self::UnknownScenario(_) | Self::BadParameter { .. } => 3,
            Self::Measurement(_) => 1,
        }
    }
}

impl From<StateError> for HarnessError {
    fn from(err: StateError) -> Self {
        let (invariant, magnitude) = match &err {
            StateError::NotNormalized { norm_sqr } => ("unit norm".to_string(), (norm_sqr - 1.0).abs()),
            StateError::NegativeProbability { value, .. } => ("nonnegative probabilities".to_string(), value.abs()),
            StateError::EmptyPhaseList => ("nonempty phase list".to_string(), 0.0),
            StateError::OutOfRange { what, value, .. } => (format!("{what} in range"), *value),
            StateError::Empty => ("nonempty state".to_string(), 0.0),
            StateError::NonFinite { what } => (format!("finite {what}"), f64::NAN),
            StateError::Matrix(m) => return m.clone().into(),
        };
        Self::Validation { invariant, magnitude }
    }
}

impl From<MatrixError> for HarnessError {
    fn from(err: MatrixError) -> Self {
        let (invariant, magnitude) = match err {
            MatrixError::NotHermitian { deviation, .. } => ("Hermitian", deviation),
            MatrixError::TraceNotOne { deviation } => ("unit trace", deviation),
            MatrixError::NegativeDiagonal { value, .. } => ("nonnegative diagonal", value),
            MatrixError::NegativeEigenvalue { value } => ("positive semidefinite", value),
            MatrixError::NotSquare { rows, cols } => ("square", rows.abs_diff(cols) as f64),
            MatrixError::EntryCount { expected, found } => ("entry count", expected.abs_diff(found) as f64),
            MatrixError::DimensionMismatch { expected, found } => {
                ("matching dimensions", expected.abs_diff(found) as f64)
            }
            MatrixError::NonFinite { .. } => ("finite entries", f64::NAN),
            MatrixError::NotUnitary { deviation } => ("unitary", deviation),
            MatrixError::ZeroVector => ("nonzero vector", 0.0),
        };
        Self::Validation { invariant: invariant.to_string(), magnitude }
    }
}

/// An information report with a label saying which state it describes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledReport {
    pub label: String,
    #[serde(flatten)]
    pub report: InformationReport,
}

/// A closed-form value next to its matrix-computed counterpart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedValue {
    pub closed_form: f64,
    pub computed: f64,
    pub tolerance: f64,
}

impl DerivedValue {
    pub fn agrees(&self) -> bool {
        (self.closed_form - self.computed).abs() <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub scenario_name: String,
    pub parameters: BTreeMap<String, f64>,
    /// Set only for scenarios that sample.
    pub seed: Option<u64>,
    pub reports: Vec<LabeledReport>,
    pub derived_values: BTreeMap<String, DerivedValue>,
    pub notes: Vec<String>,
}

impl ScenarioResult {
    pub(crate) fn new(name: &str) -> Self {
        Self {
            scenario_name: name.to_string(),
            parameters: BTreeMap::new(),
            seed: None,
            reports: Vec::new(),
            derived_values: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub(crate) fn report(&mut self, label: &str, report: InformationReport) {
        self.reports.push(LabeledReport { label: label.to_string(), report });
    }

    pub(crate) fn derive(&mut self, name: &str, closed_form: f64, computed: f64, tolerance: f64) {
        self.derived_values.insert(name.to_string(), DerivedValue { closed_form, computed, tolerance });
    }

    pub(crate) fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn report_for(&self, label: &str) -> Option<&InformationReport> {
        self.reports.iter().find(|r| r.label == label).map(|r| &r.report)
    }

    /// Names of derived values whose closed form misses its tolerance.
    pub fn disagreements(&self) -> Vec<&str> {
        self.derived_values.iter().filter(|(_, v)| !v.agrees()).map(|(k, _)| k.as_str()).collect()
    }
}

/// Report for a state read from a spec file.
pub fn state_info(spec: &StateSpec) -> ScenarioResult {
    let rho = spec.density();
    let report = InformationReport::of(&rho);
    let mut r = ScenarioResult::new("info");
    r.derive("k_q_equals_i_q_minus_i_tilde", report.i_q - report.i_tilde, report.k_q, 1e-12);
    r.report("state", report);
    r.note(format!("kind {}, dimension {}", spec.kind(), rho.dim()));
    r
}
