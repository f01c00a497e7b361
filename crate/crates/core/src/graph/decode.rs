use serde::{Deserialize, Serialize};

use super::Bitstring;
use crate::clustering::ClusterSet;
use crate::error::{Error, Result};

/// Candidate clustering read off a bitstring.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decoded {
    /// Global labels of the selected clusters, ascending.
    pub selected: Vec<usize>,
    /// Global label per point; the lowest one when several selected
    /// clusters contain it.
    pub labels: Vec<Option<usize>>,
    pub uncovered: usize,
    /// Points claimed by more than one selected cluster.
    pub conflicted: Vec<usize>,
}

pub fn decode(x: &Bitstring, set: &ClusterSet) -> Result<Decoded> {
    if x.len() != set.len() {
        return Err(Error::LengthMismatch {
            expected: set.len(),
            actual: x.len(),
        });
    }
    let mut labels: Vec<Option<usize>> = vec![None; set.n_points];
    let mut conflicted = Vec::new();
    let selected: Vec<usize> = x.ones().collect();
    for &v in &selected {
        let c = &set.clusters[v];
        for &p in &c.members {
            match labels[p] {
                None => labels[p] = Some(c.label),
                Some(_) => conflicted.push(p),
            }
        }
    }
    conflicted.sort_unstable();
    conflicted.dedup();
    let uncovered = labels.iter().filter(|l| l.is_none()).count();
    Ok(Decoded {
        selected: selected.iter().map(|&v| set.clusters[v].label).collect(),
        labels,
        uncovered,
        conflicted,
    })
}
