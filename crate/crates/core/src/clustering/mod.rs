//! Base clusterers, silhouette weights and cross-clustering relabeling.

mod dbscan;
mod kmeans;
mod silhouette;
mod spectral;
mod unify;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub use dbscan::{dbscan, DEFAULT_MIN_SAMPLES};
pub use kmeans::{kmeans, kmeans_fit, lloyd, KMeansFit};
pub use silhouette::{silhouette, ClusterScore, Silhouette};
pub use spectral::{
    laplacian_spectrum, normalized_laplacian, spectral_clustering, DEFAULT_GAMMA, MAX_SPECTRAL_POINTS,
};
pub use unify::{unify_labels, Cluster, ClusterSet};

/// A partition of a dataset's points. `None` marks DBSCAN noise.
///
/// Cluster ids are canonical: contiguous from 0 and numbered by the first
/// point index at which each cluster occurs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    labels: Vec<Option<usize>>,
    n_clusters: usize,
    pub algorithm: String,
    pub params: BTreeMap<String, String>,
}

impl Clustering {
    /// Canonicalizes arbitrary raw ids into first-occurrence order.
    pub fn from_raw(
        raw: &[Option<usize>],
        algorithm: impl Into<String>,
        params: BTreeMap<String, String>,
    ) -> Self {
        let mut map: BTreeMap<usize, usize> = BTreeMap::new();
        let labels = raw
            .iter()
            .map(|l| {
                l.map(|id| {
                    let next = map.len();
                    *map.entry(id).or_insert(next)
                })
            })
            .collect();
        Self {
            labels,
            n_clusters: map.len(),
            algorithm: algorithm.into(),
            params,
        }
    }

    pub fn labels(&self) -> &[Option<usize>] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_clusters(&self) -> usize {
        self.n_clusters
    }

    pub fn n_noise(&self) -> usize {
        self.labels.iter().filter(|l| l.is_none()).count()
    }

    /// Member point indices per cluster id, each sorted ascending.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_clusters];
        for (i, l) in self.labels.iter().enumerate() {
            if let Some(c) = l {
                out[*c].push(i);
            }
        }
        out
    }

    /// `true` if both clusterings induce the same partition, up to relabeling.
    pub fn same_partition(&self, other: &Clustering) -> bool {
        // canonical labels make this an equality check
        self.labels == other.labels
    }

    /// `point_index,label` rows; noise is written as `-1`.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("point_index,label\n");
        for (i, l) in self.labels.iter().enumerate() {
            let _ = writeln!(out, "{i},{}", l.map_or(-1, |c| c as i64));
        }
        out
    }

    /// JSON document with labels (noise = -1), params and, when given, the
    /// silhouette table.
    pub fn to_json(&self, silhouette: Option<&Silhouette>) -> serde_json::Value {
        let labels: Vec<i64> = self
            .labels
            .iter()
            .map(|l| l.map_or(-1, |c| c as i64))
            .collect();
        let table = silhouette.map(|s| {
            s.clusters
                .iter()
                .enumerate()
                .map(|(c, sc)| {
                    serde_json::json!({
                        "cluster": c,
                        "size": sc.size,
                        "silhouette_sum": sc.sum,
                        "silhouette_avg": sc.avg,
                    })
                })
                .collect::<Vec<_>>()
        });
        serde_json::json!({
            "algorithm": self.algorithm,
            "params": self.params,
            "n_clusters": self.n_clusters,
            "labels": labels,
            "silhouette": table,
        })
    }
}

pub(crate) fn params<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}
