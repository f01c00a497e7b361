use serde::{Deserialize, Serialize};

use super::{Clustering, Silhouette};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    /// Global label, unique across all source clusterings.
    pub label: usize,
    /// Sorted point indices.
    pub members: Vec<usize>,
    pub silhouette_sum: f64,
    pub silhouette_avg: f64,
    /// Index of the source clustering.
    pub source: usize,
}

/// Every cluster of every input clustering, under one label space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterSet {
    pub n_points: usize,
    pub clusters: Vec<Cluster>,
}

impl ClusterSet {
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.clusters.iter().map(|c| c.silhouette_sum).collect()
    }

    /// Global label range `[start, end)` held by source clustering `source`.
    pub fn source_range(&self, source: usize) -> std::ops::Range<usize> {
        let start = self.clusters.iter().position(|c| c.source == source);
        match start {
            Some(s) => {
                let len = self.clusters[s..].iter().take_while(|c| c.source == source).count();
                s..s + len
            }
            None => 0..0,
        }
    }
}

/// Assigns global labels clustering by clustering, cluster by cluster.
/// Noise points belong to no cluster.
pub fn unify_labels(clusterings: &[Clustering], silhouettes: &[Silhouette]) -> Result<ClusterSet> {
    if clusterings.len() != silhouettes.len() {
        return Err(Error::LengthMismatch {
            expected: clusterings.len(),
            actual: silhouettes.len(),
        });
    }
    let n_points = clusterings.first().map_or(0, Clustering::len);
    let mut clusters = Vec::new();
    for (source, (c, s)) in clusterings.iter().zip(silhouettes).enumerate() {
        if c.len() != n_points {
            return Err(Error::LengthMismatch {
                expected: n_points,
                actual: c.len(),
            });
        }
        if s.clusters.len() != c.n_clusters() {
            return Err(Error::LengthMismatch {
                expected: c.n_clusters(),
                actual: s.clusters.len(),
            });
        }
        for (members, score) in c.members().into_iter().zip(&s.clusters) {
            clusters.push(Cluster {
                label: clusters.len(),
                members,
                silhouette_sum: score.sum,
                silhouette_avg: score.avg,
                source,
            });
        }
    }
    Ok(ClusterSet { n_points, clusters })
}
