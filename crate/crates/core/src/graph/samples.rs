use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Bitstring, OverlapGraph};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub counts: BTreeMap<Bitstring, u64>,
    pub shots: u64,
    pub backend: String,
    pub timing_us: u64,
}

impl SampleSet {
    pub fn new(backend: impl Into<String>) -> Self {
        Self {
            counts: BTreeMap::new(),
            shots: 0,
            backend: backend.into(),
            timing_us: 0,
        }
    }

    pub fn from_counts(backend: impl Into<String>, counts: BTreeMap<Bitstring, u64>) -> Self {
        let shots = counts.values().sum();
        Self {
            counts,
            shots,
            backend: backend.into(),
            timing_us: 0,
        }
    }

    pub fn add(&mut self, x: Bitstring, count: u64) {
        if count > 0 {
            *self.counts.entry(x).or_insert(0) += count;
            self.shots += count;
        }
    }

    /// Counts and timings add; the backend name is kept from `self`.
    pub fn merge(&mut self, other: &SampleSet) {
        for (x, &c) in &other.counts {
            self.add(x.clone(), c);
        }
        self.timing_us += other.timing_us;
    }

    pub fn is_empty(&self) -> bool {
        self.shots == 0
    }

    pub fn probability(&self, x: &Bitstring) -> f64 {
        if self.shots == 0 {
            return 0.0;
        }
        self.counts.get(x).copied().unwrap_or(0) as f64 / self.shots as f64
    }

    /// `{bitstring: count}`.
    pub fn counts_json(&self) -> serde_json::Value {
        serde_json::Value::Object(
            self.counts
                .iter()
                .map(|(k, v)| (k.to_string(), serde_json::Value::from(*v)))
                .collect(),
        )
    }

    pub fn parse_counts_json(backend: &str, v: &serde_json::Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("sample counts must be a JSON object".into()))?;
        let mut s = SampleSet::new(backend);
        for (k, c) in obj {
            let c = c
                .as_u64()
                .ok_or_else(|| Error::Parse(format!("count for {k} is not a non-negative integer")))?;
            s.add(k.parse()?, c);
        }
        Ok(s)
    }
}

/// Probability of each number of selected clusters.
pub fn cluster_count_histogram(samples: &SampleSet) -> Result<BTreeMap<usize, f64>> {
    if samples.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    for (x, &c) in &samples.counts {
        *counts.entry(x.count_ones()).or_insert(0) += c;
    }
    let total = samples.shots as f64;
    Ok(counts.into_iter().map(|(k, c)| (k, c as f64 / total)).collect())
}

/// Most frequent bitstrings; equal counts are ordered lexicographically.
pub fn top_k(samples: &SampleSet, k: usize) -> Result<Vec<(Bitstring, f64)>> {
    if samples.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    let mut v: Vec<(&Bitstring, u64)> = samples.counts.iter().map(|(x, &c)| (x, c)).collect();
    v.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let total = samples.shots as f64;
    Ok(v.into_iter()
        .take(k)
        .map(|(x, c)| (x.clone(), c as f64 / total))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Best {
    pub bitstring: Bitstring,
    /// False when no sample was an independent set; `bitstring` is then the
    /// most frequent sample.
    pub valid: bool,
    pub weight: f64,
}

pub fn select_best(samples: &SampleSet, graph: &OverlapGraph) -> Result<Best> {
    let mut best: Option<(f64, &Bitstring)> = None;
    // BTreeMap order makes the first maximum the lexicographically smallest
    for x in samples.counts.keys() {
        if graph.is_independent(x)? {
            let w = graph.weight_of(x)?;
            if best.map_or(true, |(bw, _)| w > bw) {
                best = Some((w, x));
            }
        }
    }
    match best {
        Some((weight, x)) => Ok(Best {
            bitstring: x.clone(),
            valid: true,
            weight,
        }),
        None => {
            let (x, _) = top_k(samples, 1)?.remove(0);
            let weight = graph.weight_of(&x)?;
            Ok(Best {
                bitstring: x,
                valid: false,
                weight,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(s: &str) -> Bitstring {
        s.parse().unwrap()
    }

    #[test]
    fn histogram_trivial() {
        let mut s = SampleSet::new("t");
        s.add(b("101001"), 40);
        s.add(b("000000"), 60);
        let h = cluster_count_histogram(&s).unwrap();
        assert_eq!(h, BTreeMap::from([(0, 0.6), (3, 0.4)]));
    }

    #[test]
    fn top_k_tie_break() {
        let mut s = SampleSet::new("t");
        s.add(b("11"), 2);
        s.add(b("01"), 2);
        s.add(b("10"), 5);
        let t = top_k(&s, 3).unwrap();
        let order: Vec<String> = t.iter().map(|(x, _)| x.to_string()).collect();
        assert_eq!(order, vec!["10", "01", "11"]);
    }

    #[test]
    fn empty_errors() {
        let s = SampleSet::new("t");
        assert!(matches!(cluster_count_histogram(&s), Err(Error::EmptySampleSet)));
        assert!(matches!(top_k(&s, 1), Err(Error::EmptySampleSet)));
    }

    #[test]
    fn merge_and_json_roundtrip() {
        let mut a = SampleSet::new("x");
        a.add(b("01"), 3);
        let mut c = SampleSet::new("y");
        c.add(b("01"), 1);
        c.add(b("10"), 2);
        a.merge(&c);
        assert_eq!(a.shots, 6);
        let back = SampleSet::parse_counts_json("x", &a.counts_json()).unwrap();
        assert_eq!(back.counts, a.counts);
    }

    #[test]
    fn best_falls_back_to_most_frequent() {
        let g = OverlapGraph::from_edges(2, &[(0, 1)], vec![1.0, 1.0]).unwrap();
        let mut s = SampleSet::new("t");
        s.add(b("11"), 5);
        let best = select_best(&s, &g).unwrap();
        assert!(!best.valid);
        assert_eq!(best.bitstring, b("11"));
        s.add(b("00"), 1);
        let best = select_best(&s, &g).unwrap();
        assert!(best.valid);
        assert_eq!(best.bitstring, b("00"));
        s.add(b("10"), 1);
        s.add(b("01"), 1);
        assert_eq!(select_best(&s, &g).unwrap().bitstring, b("01"));
    }
}
