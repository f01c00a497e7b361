use serde::{Deserialize, Serialize};

use super::{Bitstring, OverlapGraph};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Penalty {
    /// `2 * max |w| + 1`.
    Auto,
    Explicit(f64),
}

/// Upper-triangular QUBO; the diagonal holds the linear terms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuboMatrix {
    n: usize,
    q: Vec<f64>,
    penalty: f64,
}

pub fn build_qubo(graph: &OverlapGraph, use_weights: bool, penalty: Penalty) -> Result<QuboMatrix> {
    let w = if use_weights {
        graph.weights().to_vec()
    } else {
        graph.unit_weights()
    };
    if let Some(i) = w.iter().position(|v| !v.is_finite()) {
        return Err(Error::invalid(format!("weight {i} is not finite")));
    }
    let p = match penalty {
        Penalty::Auto => 2.0 * w.iter().fold(0.0f64, |m, v| m.max(v.abs())) + 1.0,
        Penalty::Explicit(p) if p > 0.0 && p.is_finite() => p,
        Penalty::Explicit(p) => return Err(Error::invalid(format!("penalty must be positive, got {p}"))),
    };
    let n = graph.n();
    let mut q = QuboMatrix {
        n,
        q: vec![0.0; n * n],
        penalty: p,
    };
    for (i, wi) in w.iter().enumerate() {
        q.q[i * n + i] = -wi;
    }
    for &(i, j) in graph.edges() {
        q.q[i * n + j] = p;
    }
    Ok(q)
}

impl QuboMatrix {
    /// Raw upper-triangular matrix; entries below the diagonal are ignored.
    pub fn from_dense(n: usize, q: Vec<f64>) -> Result<Self> {
        if q.len() != n * n {
            return Err(Error::LengthMismatch {
                expected: n * n,
                actual: q.len(),
            });
        }
        let mut q = q;
        for i in 0..n {
            for j in 0..i {
                q[i * n + j] = 0.0;
            }
        }
        Ok(Self { n, q, penalty: 0.0 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn penalty(&self) -> f64 {
        self.penalty
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i > j {
            0.0
        } else {
            self.q[i * self.n + j]
        }
    }

    /// Symmetric coupling between `i` and `j` as seen by a single flip.
    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        self.get(i.min(j), i.max(j))
    }

    /// `x^T Q x`.
    pub fn energy(&self, x: &Bitstring) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: x.len(),
            });
        }
        Ok(self.energy_bits(x.bits()))
    }

    pub(crate) fn energy_bits(&self, x: &[bool]) -> f64 {
        let ones: Vec<usize> = (0..self.n).filter(|&i| x[i]).collect();
        let mut e = 0.0;
        for (a, &i) in ones.iter().enumerate() {
            for &j in &ones[a..] {
                e += self.q[i * self.n + j];
            }
        }
        e
    }

    /// `i j value` per nonzero entry.
    pub fn to_coo(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            for j in i..self.n {
                let v = self.q[i * self.n + j];
                if v != 0.0 {
                    out.push_str(&format!("{i} {j} {v:?}\n"));
                }
            }
        }
        out
    }
}
