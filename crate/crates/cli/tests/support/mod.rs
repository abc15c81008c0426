//! Shared helpers for the binary-level test suites.
// each test binary includes this file and uses a different subset
#![allow(dead_code)]

use std::path::PathBuf;

/// The bundled config directory at the workspace root.
pub fn workspace_configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

/// A fast gradient config: small grid, small ensemble.
pub fn small_gradient_config(ensemble: usize) -> serde_json::Value {
    serde_json::json!({
        "name": "gradient-small",
        "n": 2,
        "dim_u": 1,
        "dim_v": 2,
        "matrices": [[[1.0], [0.0]], [[0.0], [1.0]]],
        "dim_w": 1,
        "q_matrices": [[[0.0, 1.0]], [[-1.0, 0.0]]],
        "grid": {"N": 9, "bandwidth": 2},
        "ensemble": {"size": ensemble, "seed": 0},
        "p": [2.0]
    })
}

/// Parses a report as its typed struct and re-serializes it the same
/// way the binary does; byte equality then proves the round trip.
pub fn reserialize_report(command: &str, text: &str) -> String {
    fn pretty<T: serde::Serialize>(value: &T) -> String {
        let mut s = serde_json::to_string_pretty(value).unwrap();
        s.push('\n');
        s
    }
    match command {
        "check-rank" => {
            pretty(&serde_json::from_str::<report_types::CheckRankReport>(text).unwrap())
        }
        "check-complex" => {
            pretty(&serde_json::from_str::<report_types::CheckComplexReport>(text).unwrap())
        }
        "find-complex" => {
            pretty(&serde_json::from_str::<report_types::FindComplexReport>(text).unwrap())
        }
        "poincare" => {
            pretty(&serde_json::from_str::<report_types::PoincareCommandReport>(text).unwrap())
        }
        "riesz-check" => {
            pretty(&serde_json::from_str::<report_types::RieszCheckReport>(text).unwrap())
        }
        other => panic!("unknown command {other}"),
    }
}

/// Mirror of the binary's report shapes; `deny_unknown_fields` keeps the
/// mirror honest if the binary grows fields these tests don't know.
pub mod report_types {
    use poincare_core::{ConditionsReport, PoincareReport, RankProfile};
    use serde::{Deserialize, Serialize};

    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct CheckRankReport {
        pub schema_version: u32,
        pub command: String,
        pub config_name: String,
        pub samples: usize,
        pub seed: u64,
        pub rank_profile: RankProfile,
        pub verified: bool,
    }

    #[derive(Serialize, Deserialize)]
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

    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct CompletionElement {
        pub matrices: Vec<Vec<Vec<f64>>>,
        pub structure_verdict: bool,
    }

    #[derive(Serialize, Deserialize)]
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

    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct PoincareCommandReport {
        pub schema_version: u32,
        pub command: String,
        pub config_name: String,
        pub reports: Vec<PoincareReport>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pub literal_sum_constants: Option<Vec<f64>>,
        pub verified: bool,
    }

    #[derive(Serialize, Deserialize)]
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
}
