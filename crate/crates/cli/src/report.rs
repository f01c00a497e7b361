use std::collections::BTreeMap;
use std::path::Path;

use clusteragg::graph::Bitstring;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const REPORT_FORMAT_VERSION: u32 = 1;
pub const REPORT_FILE: &str = "report.json";

/// Everything a run produced. File names are relative to the report's own
/// directory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub version: u32,
    pub tool_version: String,
    pub canonical: bool,
    /// The resolved configuration the run used.
    pub config: serde_json::Value,
    pub seed: u64,
    pub shots: u64,
    pub dataset: DatasetSummary,
    pub clusterings: Vec<ClusteringSummary>,
    pub clusters: Vec<ClusterSummary>,
    pub graph: GraphSummary,
    /// Exact weighted optimum, when the graph is small enough to enumerate.
    pub exact: Option<ExactSummary>,
    /// Cluster count treated as correct by `compare`.
    pub reference_clusters: Option<usize>,
    pub backends: Vec<BackendReport>,
    /// Heaviest valid result over all backends; `None` if no backend found
    /// an independent set.
    pub selected: Option<Selection>,
    pub artifacts: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub name: String,
    pub n_points: usize,
    pub file: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusteringSummary {
    pub algorithm: String,
    pub params: BTreeMap<String, String>,
    pub n_clusters: usize,
    pub n_noise: usize,
    pub silhouette_mean: f64,
    pub labels_file: String,
    pub json_file: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterSummary {
    pub label: usize,
    pub source: usize,
    pub size: usize,
    pub silhouette_sum: f64,
    pub silhouette_avg: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub weights: Vec<f64>,
    pub edge_list_file: String,
    pub json_file: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactSummary {
    pub bitstring: Bitstring,
    pub weight: f64,
    pub n_clusters: usize,
    pub unique: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopEntry {
    pub bitstring: Bitstring,
    pub probability: f64,
    pub independent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BestSummary {
    pub bitstring: Bitstring,
    pub valid: bool,
    pub weight: f64,
    pub n_clusters: usize,
    pub uncovered: usize,
    pub conflicted: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BackendReport {
    pub name: String,
    pub kind: String,
    pub use_weights: bool,
    pub shots: u64,
    pub timing_us: u64,
    pub n_distinct: usize,
    pub modal: Bitstring,
    pub top: Vec<TopEntry>,
    /// Probability of each number of selected clusters, over all samples.
    pub histogram: BTreeMap<usize, f64>,
    /// Probability mass of independent samples.
    pub p_valid: f64,
    /// Probability mass of independent samples with the reference count.
    pub p_correct: Option<f64>,
    pub best: BestSummary,
    pub samples_file: String,
    pub qubo_file: Option<String>,
    pub register_file: Option<String>,
    pub sequence_file: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub backend: String,
    pub bitstring: Bitstring,
    pub weight: f64,
    pub n_clusters: usize,
    /// Selected global cluster labels.
    pub clusters: Vec<usize>,
    pub labels_file: String,
}

impl RunReport {
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read report {}: {e}", path.display())))?;
        let r: RunReport = serde_json::from_str(&text)
            .map_err(|e| CliError::Validation(format!("{} is not a run report: {e}", path.display())))?;
        if r.version != REPORT_FORMAT_VERSION {
            return Err(CliError::Validation(format!(
                "{}: unsupported report version {}",
                path.display(),
                r.version
            )));
        }
        Ok(r)
    }

    pub fn backend(&self, name: &str) -> Option<&BackendReport> {
        self.backends.iter().find(|b| b.name == name)
    }
}
