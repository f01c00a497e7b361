//! Run configuration: one TOML file, optionally patched with `key=value`
//! overrides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_shots")]
    pub shots: u64,
    pub output_dir: PathBuf,
    /// Zero all timings so identical configs give byte-identical reports.
    #[serde(default)]
    pub canonical: bool,
    /// Cluster count counted as correct in comparisons; defaults to the
    /// size of the exact weighted optimum.
    #[serde(default)]
    pub expected_clusters: Option<usize>,
    pub dataset: DatasetConfig,
    #[serde(default)]
    pub clustering: Vec<ClusteringConfig>,
    #[serde(default)]
    pub backend: Vec<BackendConfig>,
    #[serde(default)]
    pub tune: Option<TuneConfig>,
}

fn default_shots() -> u64 {
    1000
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DatasetConfig {
    Blobs {
        n_points: usize,
        /// Explicit centers; when absent, an equilateral triangle with
        /// side `spacing`.
        #[serde(default)]
        centers: Option<Vec<[f64; 2]>>,
        #[serde(default = "default_spacing")]
        spacing: f64,
        #[serde(default = "default_stddev")]
        stddev: f64,
        #[serde(default)]
        seed: u64,
    },
    Csv {
        path: PathBuf,
    },
    AggregationLike {
        #[serde(default = "default_aggregation_seed")]
        seed: u64,
    },
}

fn default_spacing() -> f64 {
    10.0
}

fn default_stddev() -> f64 {
    1.0
}

fn default_aggregation_seed() -> u64 {
    clusteragg::data::AGGREGATION_LIKE_SEED
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClusteringConfig {
    Kmeans {
        k: usize,
        #[serde(default)]
        seed: u64,
        #[serde(default = "default_max_iter")]
        max_iter: usize,
        #[serde(default = "default_tol")]
        tol: f64,
    },
    Dbscan {
        eps: f64,
        #[serde(default = "default_min_samples")]
        min_samples: usize,
    },
    Spectral {
        k: usize,
        #[serde(default = "default_gamma")]
        gamma: f64,
    },
}

fn default_max_iter() -> usize {
    300
}

fn default_tol() -> f64 {
    1e-6
}

fn default_min_samples() -> usize {
    clusteragg::clustering::DEFAULT_MIN_SAMPLES
}

fn default_gamma() -> f64 {
    clusteragg::clustering::DEFAULT_GAMMA
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PenaltyConfig {
    Auto(String),
    Explicit(f64),
}

impl Default for PenaltyConfig {
    fn default() -> Self {
        PenaltyConfig::Auto("auto".into())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BackendConfig {
    Brute {
        #[serde(default)]
        name: Option<String>,
        #[serde(default = "yes")]
        use_weights: bool,
    },
    Sa {
        #[serde(default)]
        name: Option<String>,
        #[serde(default = "yes")]
        use_weights: bool,
        #[serde(default)]
        penalty: PenaltyConfig,
        #[serde(default = "default_sweeps")]
        sweeps: usize,
        #[serde(default = "default_beta_start")]
        beta_start: f64,
        #[serde(default = "default_beta_end")]
        beta_end: f64,
        /// Defaults to the top-level `shots`.
        #[serde(default)]
        reads: Option<usize>,
        /// Defaults to the top-level `seed`.
        #[serde(default)]
        seed: Option<u64>,
    },
    Rydberg {
        #[serde(default)]
        name: Option<String>,
        #[serde(default = "default_omega")]
        omega: f64,
        #[serde(default = "default_delta0")]
        delta0: f64,
        #[serde(default = "default_t_ns")]
        t_ns: f64,
        #[serde(default = "default_c6")]
        c6: f64,
        #[serde(default)]
        blockade_radius_um: Option<f64>,
        #[serde(default = "default_min_spacing")]
        min_spacing_um: f64,
        #[serde(default = "default_dt")]
        dt_ns: f64,
        #[serde(default)]
        embed_seed: u64,
        #[serde(default = "default_restarts")]
        max_restarts: usize,
        #[serde(default)]
        seed: Option<u64>,
    },
}

fn yes() -> bool {
    true
}

fn default_sweeps() -> usize {
    2000
}

fn default_beta_start() -> f64 {
    0.1
}

fn default_beta_end() -> f64 {
    10.0
}

fn default_omega() -> f64 {
    0.9552
}

fn default_delta0() -> f64 {
    -3.0
}

fn default_t_ns() -> f64 {
    3873.0
}

fn default_c6() -> f64 {
    clusteragg::rydberg::DEFAULT_C6
}

fn default_min_spacing() -> f64 {
    clusteragg::rydberg::DEFAULT_MIN_SPACING_UM
}

fn default_dt() -> f64 {
    clusteragg::rydberg::DEFAULT_DT_NS
}

fn default_restarts() -> usize {
    50
}

impl BackendConfig {
    pub fn kind(&self) -> &'static str {
        match self {
            BackendConfig::Brute { .. } => "brute",
            BackendConfig::Sa { .. } => "sa",
            BackendConfig::Rydberg { .. } => "rydberg",
        }
    }

    fn explicit_name(&self) -> Option<&str> {
        match self {
            BackendConfig::Brute { name, .. }
            | BackendConfig::Sa { name, .. }
            | BackendConfig::Rydberg { name, .. } => name.as_deref(),
        }
    }

    pub fn use_weights(&self) -> bool {
        match self {
            BackendConfig::Brute { use_weights, .. } | BackendConfig::Sa { use_weights, .. } => *use_weights,
            BackendConfig::Rydberg { .. } => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TuneConfig {
    #[serde(default = "default_budget")]
    pub budget: usize,
    #[serde(default = "default_tune_shots")]
    pub shots: u64,
    #[serde(default)]
    pub omega: Option<[f64; 2]>,
    #[serde(default)]
    pub delta0: Option<[f64; 2]>,
    #[serde(default)]
    pub t_ns: Option<[f64; 2]>,
}

fn default_budget() -> usize {
    10
}

fn default_tune_shots() -> u64 {
    200
}

impl TuneConfig {
    pub fn bounds(&self) -> clusteragg::tuner::ParamBounds {
        let d = clusteragg::tuner::ParamBounds::default();
        let pair = |v: Option<[f64; 2]>, fallback: (f64, f64)| v.map_or(fallback, |[a, b]| (a, b));
        clusteragg::tuner::ParamBounds {
            omega: pair(self.omega, d.omega),
            delta0: pair(self.delta0, d.delta0),
            t_ns: pair(self.t_ns, d.t_ns),
        }
    }
}

impl RunConfig {
    /// Reads `path`, applies `overrides` (`dotted.key=value`, array
    /// elements by index) and validates. Relative paths inside the file
    /// resolve against its directory.
    pub fn load(path: &Path, overrides: &[String]) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base, overrides)
    }

    pub fn parse(text: &str, base: &Path, overrides: &[String]) -> Result<Self, CliError> {
        let mut value: toml::Value =
            toml::from_str(text).map_err(|e| CliError::Validation(format!("invalid config: {e}")))?;
        for o in overrides {
            apply_override(&mut value, o)?;
        }
        let mut cfg: RunConfig = value
            .try_into()
            .map_err(|e: toml::de::Error| CliError::Validation(format!("invalid config: {e}")))?;
        cfg.resolve_paths(base);
        cfg.validate()?;
        Ok(cfg)
    }

    fn resolve_paths(&mut self, base: &Path) {
        if self.output_dir.is_relative() {
            self.output_dir = base.join(&self.output_dir);
        }
        if let DatasetConfig::Csv { path } = &mut self.dataset {
            if path.is_relative() {
                *path = base.join(&*path);
            }
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Validation(m));
        if self.clustering.is_empty() {
            return bad("at least one [[clustering]] entry is required".into());
        }
        if self.backend.is_empty() {
            return bad("at least one [[backend]] entry is required".into());
        }
        if self.shots == 0 {
            return bad("shots must be at least 1".into());
        }
        if let DatasetConfig::Csv { path } = &self.dataset {
            if !path.is_file() {
                return bad(format!("dataset file {} does not exist", path.display()));
            }
        }
        let names = self.backend_names();
        let mut seen = std::collections::BTreeSet::new();
        for n in &names {
            if !seen.insert(n) {
                return bad(format!("duplicate backend name {n:?}"));
            }
        }
        for b in &self.backend {
            if let BackendConfig::Sa { penalty: PenaltyConfig::Auto(s), .. } = b {
                if s != "auto" {
                    return bad(format!("penalty must be \"auto\" or a number, got {s:?}"));
                }
            }
        }
        Ok(())
    }

    /// Explicit names, else the kind plus `_unweighted` when weights are off,
    /// numbered on collision.
    pub fn backend_names(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for b in &self.backend {
            let name = match b.explicit_name() {
                Some(n) => n.to_string(),
                None => {
                    let base = if b.use_weights() || b.kind() == "rydberg" {
                        b.kind().to_string()
                    } else {
                        format!("{}_unweighted", b.kind())
                    };
                    let mut candidate = base.clone();
                    let mut k = 2;
                    while out.contains(&candidate) {
                        candidate = format!("{base}_{k}");
                        k += 1;
                    }
                    candidate
                }
            };
            out.push(name);
        }
        out
    }
}

fn apply_override(root: &mut toml::Value, spec: &str) -> Result<(), CliError> {
    let (key, raw) = spec
        .split_once('=')
        .ok_or_else(|| CliError::Validation(format!("override {spec:?} is not key=value")))?;
    let value = parse_value(raw.trim());
    let parts: Vec<&str> = key.trim().split('.').collect();
    let mut cur = root;
    for (i, part) in parts.iter().enumerate() {
        let last = i + 1 == parts.len();
        cur = match cur {
            toml::Value::Table(t) => {
                if last {
                    t.insert(part.to_string(), value);
                    return Ok(());
                }
                t.entry(part.to_string())
                    .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            }
            toml::Value::Array(a) => {
                let idx: usize = part
                    .parse()
                    .map_err(|_| CliError::Validation(format!("override {key:?}: {part:?} is not an index")))?;
                let len = a.len();
                let slot = a
                    .get_mut(idx)
                    .ok_or_else(|| CliError::Validation(format!("override {key:?}: index {idx} out of {len}")))?;
                if last {
                    *slot = value;
                    return Ok(());
                }
                slot
            }
            _ => return Err(CliError::Validation(format!("override {key:?}: {part:?} is not a table"))),
        };
    }
    Ok(())
}

/// TOML literal when it parses as one, else a bare string.
fn parse_value(raw: &str) -> toml::Value {
    let doc = format!("v = {raw}");
    match toml::from_str::<toml::Table>(&doc) {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| toml::Value::String(raw.into())),
        Err(_) => toml::Value::String(raw.into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
output_dir = "out"
[dataset]
kind = "blobs"
n_points = 30
[[clustering]]
algorithm = "kmeans"
k = 2
[[backend]]
kind = "brute"
"#;

    #[test]
    fn minimal_parses_with_defaults() {
        let c = RunConfig::parse(MINIMAL, Path::new("/base"), &[]).unwrap();
        assert_eq!(c.shots, 1000);
        assert_eq!(c.output_dir, PathBuf::from("/base/out"));
        assert_eq!(c.backend_names(), vec!["brute"]);
    }

    #[test]
    fn overrides_patch_nested_keys() {
        let c = RunConfig::parse(
            MINIMAL,
            Path::new("."),
            &["shots=7".into(), "clustering.0.k=3".into(), "output_dir=/tmp/x".into()],
        )
        .unwrap();
        assert_eq!(c.shots, 7);
        assert_eq!(c.output_dir, PathBuf::from("/tmp/x"));
        assert!(matches!(c.clustering[0], ClusteringConfig::Kmeans { k: 3, .. }));
        assert!(RunConfig::parse(MINIMAL, Path::new("."), &["clustering.5.k=3".into()]).is_err());
        assert!(RunConfig::parse(MINIMAL, Path::new("."), &["nonsense".into()]).is_err());
    }

    #[test]
    fn validation_errors() {
        let no_backend = MINIMAL.replace("[[backend]]\nkind = \"brute\"\n", "");
        assert!(matches!(
            RunConfig::parse(&no_backend, Path::new("."), &[]),
            Err(CliError::Validation(_))
        ));
        let unknown = format!("{MINIMAL}bogus = 1\n");
        assert!(RunConfig::parse(&unknown, Path::new("."), &[]).is_err());
        let missing = MINIMAL.replace("kind = \"blobs\"\nn_points = 30", "kind = \"csv\"\npath = \"nope.csv\"");
        assert!(RunConfig::parse(&missing, Path::new("."), &[]).is_err());
    }

    #[test]
    fn names_disambiguate() {
        let two = format!("{MINIMAL}[[backend]]\nkind = \"sa\"\nuse_weights = false\n[[backend]]\nkind = \"sa\"\n");
        let c = RunConfig::parse(&two, Path::new("."), &[]).unwrap();
        assert_eq!(c.backend_names(), vec!["brute", "sa_unweighted", "sa"]);
    }
}
