//! Overlap graph, QUBO and decoding of solver output.

mod bitstring;
mod decode;
mod qubo;
mod samples;

pub use bitstring::Bitstring;
pub use decode::{decode, Decoded};
pub use qubo::{build_qubo, Penalty, QuboMatrix};
pub use samples::{cluster_count_histogram, select_best, top_k, Best, SampleSet};

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::clustering::ClusterSet;
use crate::error::{Error, Result};

/// One vertex per cluster; an edge joins two clusters that share a point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    weights: Vec<f64>,
    labels: Vec<usize>,
    members: Vec<Vec<usize>>,
}

pub fn build_overlap_graph(set: &ClusterSet) -> Result<OverlapGraph> {
    if set.is_empty() {
        return Err(Error::invalid("cluster set is empty"));
    }
    // point -> clusters containing it; pairs sharing a point are edges
    let mut owners: Vec<Vec<usize>> = vec![Vec::new(); set.n_points];
    for (v, c) in set.clusters.iter().enumerate() {
        for &p in &c.members {
            owners
                .get_mut(p)
                .ok_or_else(|| Error::invalid(format!("member {p} out of range")))?
                .push(v);
        }
    }
    let mut edges = BTreeSet::new();
    for own in &owners {
        for (a, &i) in own.iter().enumerate() {
            for &j in &own[a + 1..] {
                if i != j {
                    edges.insert((i.min(j), i.max(j)));
                }
            }
        }
    }
    Ok(OverlapGraph {
        n: set.len(),
        edges,
        weights: set.weights(),
        labels: set.clusters.iter().map(|c| c.label).collect(),
        members: set.clusters.iter().map(|c| c.members.clone()).collect(),
    })
}

impl OverlapGraph {
    /// Graph without member sets, for fixtures and synthetic instances.
    pub fn from_edges(n: usize, edges: &[(usize, usize)], weights: Vec<f64>) -> Result<Self> {
        if weights.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: weights.len(),
            });
        }
        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            if a == b || a >= n || b >= n {
                return Err(Error::invalid(format!("bad edge ({a}, {b}) for n = {n}")));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Self {
            n,
            edges: set,
            weights,
            labels: (0..n).collect(),
            members: vec![Vec::new(); n],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i.min(j), i.max(j)))
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn members(&self) -> &[Vec<usize>] {
        &self.members
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Upper-triangular 0/1 matrix with unit diagonal, row-major.
    pub fn adjacency_matrix(&self) -> Vec<Vec<u8>> {
        let mut a = vec![vec![0u8; self.n]; self.n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 1;
        }
        for &(i, j) in &self.edges {
            a[i][j] = 1;
        }
        a
    }

    pub fn unit_weights(&self) -> Vec<f64> {
        vec![1.0; self.n]
    }

    fn check_len(&self, x: &Bitstring) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: x.len(),
            });
        }
        Ok(())
    }

    pub fn is_independent(&self, x: &Bitstring) -> Result<bool> {
        self.check_len(x)?;
        Ok(self.edges.iter().all(|&(i, j)| !(x.get(i) && x.get(j))))
    }

    pub fn weight_of(&self, x: &Bitstring) -> Result<f64> {
        self.check_len(x)?;
        Ok(x.ones().map(|i| self.weights[i]).sum())
    }

    /// `i j` per line.
    pub fn edge_list(&self) -> String {
        self.edges.iter().map(|(i, j)| format!("{i} {j}\n")).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "edges": self.edges.iter().map(|&(i, j)| [i, j]).collect::<Vec<_>>(),
            "weights": self.weights,
            "labels": self.labels,
            "sizes": self.members.iter().map(Vec::len).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::Cluster;

    fn set(members: &[&[usize]], n_points: usize) -> ClusterSet {
        ClusterSet {
            n_points,
            clusters: members
                .iter()
                .enumerate()
                .map(|(i, m)| Cluster {
                    label: i,
                    members: m.to_vec(),
                    silhouette_sum: i as f64,
                    silhouette_avg: 0.0,
                    source: 0,
                })
                .collect(),
        }
    }

    #[test]
    fn edges_follow_intersections() {
        let g = build_overlap_graph(&set(&[&[0, 1], &[2, 3], &[1, 2], &[4]], 5)).unwrap();
        assert_eq!(g.edges().iter().copied().collect::<Vec<_>>(), vec![(0, 2), (1, 2)]);
        assert_eq!(g.weights(), &[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(g.degree(2), 2);
    }

    #[test]
    fn edgeless_adjacency_is_identity() {
        let g = OverlapGraph::from_edges(3, &[], vec![1.0; 3]).unwrap();
        assert_eq!(g.adjacency_matrix(), vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn empty_set_rejected() {
        assert!(build_overlap_graph(&set(&[], 3)).is_err());
    }

    #[test]
    fn independence_and_weight() {
        let g = OverlapGraph::from_edges(3, &[(0, 1)], vec![1.0, 2.0, 4.0]).unwrap();
        assert!(!g.is_independent(&"110".parse().unwrap()).unwrap());
        assert!(g.is_independent(&"101".parse().unwrap()).unwrap());
        assert_eq!(g.weight_of(&"011".parse().unwrap()).unwrap(), 6.0);
        assert!(g.weight_of(&"01".parse().unwrap()).is_err());
        assert_eq!(g.edge_list(), "0 1\n");
    }
}
