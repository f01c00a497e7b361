use serde::{Deserialize, Serialize};

use super::Clustering;
use crate::data::Dataset;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterScore {
    pub size: usize,
    pub sum: f64,
    pub avg: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Silhouette {
    /// Per-point score; `None` for noise points.
    pub points: Vec<Option<f64>>,
    /// Indexed by cluster id.
    pub clusters: Vec<ClusterScore>,
}

impl Silhouette {
    /// Mean over all non-noise points.
    pub fn mean(&self) -> f64 {
        let (s, n) = self
            .points
            .iter()
            .flatten()
            .fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
        if n == 0 {
            0.0
        } else {
            s / n as f64
        }
    }
}

/// Euclidean silhouette. Noise points are left out of every mean; members
/// of singleton clusters score 0.
pub fn silhouette(data: &Dataset, clustering: &Clustering) -> Result<Silhouette> {
    if clustering.len() != data.len() {
        return Err(Error::LengthMismatch {
            expected: data.len(),
            actual: clustering.len(),
        });
    }
    let k = clustering.n_clusters();
    if k < 2 {
        return Err(Error::TooFewClusters(k));
    }
    let pts = data.points();
    let labels = clustering.labels();
    let members = clustering.members();

    let mut scores: Vec<Option<f64>> = vec![None; pts.len()];
    // sequential accumulation keeps results bit-identical run to run
    let mut dist_sum = vec![0.0; k];
    for (i, label) in labels.iter().enumerate() {
        let Some(own) = *label else { continue };
        if members[own].len() == 1 {
            scores[i] = Some(0.0);
            continue;
        }
        dist_sum.iter_mut().for_each(|v| *v = 0.0);
        for (j, lj) in labels.iter().enumerate() {
            if let Some(c) = lj {
                if j != i {
                    dist_sum[*c] += pts[i].dist(&pts[j]);
                }
            }
        }
        let a = dist_sum[own] / (members[own].len() - 1) as f64;
        let b = (0..k)
            .filter(|&c| c != own)
            .map(|c| dist_sum[c] / members[c].len() as f64)
            .fold(f64::INFINITY, f64::min);
        let denom = a.max(b);
        scores[i] = Some(if denom > 0.0 { (b - a) / denom } else { 0.0 });
    }

    let clusters = members
        .iter()
        .map(|m| {
            let sum: f64 = m.iter().map(|&i| scores[i].unwrap_or(0.0)).sum();
            ClusterScore {
                size: m.len(),
                sum,
                avg: sum / m.len() as f64,
            }
        })
        .collect();
    Ok(Silhouette {
        points: scores,
        clusters,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Point2D;
    use std::collections::BTreeMap;

    fn two_pairs(sep: f64) -> (Dataset, Clustering) {
        let d = Dataset::new(
            "t",
            vec![
                Point2D::new(0.0, 0.0),
                Point2D::new(0.1, 0.0),
                Point2D::new(sep, 0.0),
                Point2D::new(sep + 0.1, 0.0),
            ],
        )
        .unwrap();
        let c = Clustering::from_raw(&[Some(0), Some(0), Some(1), Some(1)], "t", BTreeMap::new());
        (d, c)
    }

    #[test]
    fn perfect_separation_limit() {
        let mut prev = -1.0;
        for sep in [1.0, 10.0, 100.0, 1e4] {
            let (d, c) = two_pairs(sep);
            let s = silhouette(&d, &c).unwrap();
            let min = s.points.iter().flatten().copied().fold(f64::INFINITY, f64::min);
            assert!(min > prev);
            prev = min;
        }
        assert!(prev > 1.0 - 1e-4);
    }

    #[test]
    fn single_cluster_is_rejected() {
        let (d, _) = two_pairs(5.0);
        let c = Clustering::from_raw(&[Some(0); 4], "t", BTreeMap::new());
        assert!(matches!(silhouette(&d, &c), Err(Error::TooFewClusters(1))));
    }

    #[test]
    fn singletons_and_noise() {
        let d = Dataset::new(
            "t",
            vec![
                Point2D::new(0.0, 0.0),
                Point2D::new(0.2, 0.0),
                Point2D::new(5.0, 0.0),
                Point2D::new(99.0, 0.0),
            ],
        )
        .unwrap();
        let c = Clustering::from_raw(&[Some(0), Some(0), Some(1), None], "t", BTreeMap::new());
        let s = silhouette(&d, &c).unwrap();
        assert_eq!(s.points[2], Some(0.0));
        assert_eq!(s.points[3], None);
        assert_eq!(s.clusters[1].size, 1);
        assert_eq!(s.clusters[0].size, 2);
    }
}
