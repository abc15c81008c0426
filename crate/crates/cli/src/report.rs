//! Machine-readable report types. Every report carries
//! `schema_version: 1` and round-trips through serde exactly.

use std::path::Path;

use anyhow::{Context, Result};
use poincare_core::{ConditionsReport, PoincareReport, RankProfile};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckRankReport {
    pub schema_version: u32,
    pub command: String,
    pub config_name: String,
    /// Sphere directions used; this is sampled verification, not proof.
    pub samples: usize,
    pub seed: u64,
    pub rank_profile: RankProfile,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckComplexReport {
    pub schema_version: u32,
    pub command: String,
    pub config_name: String,
    pub samples: usize,
    pub seed: u64,
    pub conditions: ConditionsReport,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompletionElement {
    /// `n` coefficient matrices for `Q`, rows of length `dim_v`.
    pub matrices: Vec<Vec<Vec<f64>>>,
    /// Whether `(P, Q)` passes the full structure check.
    pub structure_verdict: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FindComplexReport {
    pub schema_version: u32,
    pub command: String,
    pub config_name: String,
    pub dim_w: usize,
    pub samples: usize,
    pub seed: u64,
    pub basis_dimension: usize,
    pub basis: Vec<CompletionElement>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoincareCommandReport {
    pub schema_version: u32,
    pub command: String,
    pub config_name: String,
    pub reports: Vec<PoincareReport>,
    /// Max ratio under the literal vector-sum reading of the gradient
    /// norm, one entry per exponent; present only when requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub literal_sum_constants: Option<Vec<f64>>,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RieszCheckReport {
    pub schema_version: u32,
    pub command: String,
    pub config_name: String,
    pub ensemble_size: usize,
    pub seed: u64,
    pub fault_injected: bool,
    pub max_identity_residual: f64,
    pub max_commutation_residual: f64,
    pub threshold: f64,
    pub verified: bool,
}

/// Writes a pretty-printed JSON report; the exact bytes are a pure
/// function of the report value.
pub fn write_report<T: Serialize>(path: &Path, report: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report).context("serializing report")?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing report {}", path.display()))
}
