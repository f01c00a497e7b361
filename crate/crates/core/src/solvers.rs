//! Classical MWIS backends: exhaustive search and simulated annealing.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Bitstring, OverlapGraph, QuboMatrix, SampleSet};
use crate::rng;

/// Largest graph [`brute_force_mwis`] will enumerate.
pub const MAX_BRUTE_FORCE: usize = 25;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MwisSolution {
    /// Lexicographically smallest optimum.
    pub best: Bitstring,
    pub weight: f64,
    pub unique: bool,
    /// Every optimum, ascending.
    pub optima: Vec<Bitstring>,
}

/// Exact maximum-weight independent set. With `use_weights` off every
/// vertex weighs 1. Weights within `1e-9` relative of the best count as
/// tied.
pub fn brute_force_mwis(graph: &OverlapGraph, use_weights: bool) -> Result<MwisSolution> {
    let n = graph.n();
    if n > MAX_BRUTE_FORCE {
        return Err(Error::TooLarge {
            what: "brute-force MWIS",
            size: n,
            limit: MAX_BRUTE_FORCE,
        });
    }
    let w = if use_weights {
        graph.weights().to_vec()
    } else {
        graph.unit_weights()
    };
    let mut nbr = vec![0u32; n];
    for &(i, j) in graph.edges() {
        nbr[i] |= 1 << j;
        nbr[j] |= 1 << i;
    }

    let mut scored: Vec<(u32, f64)> = Vec::new();
    let mut best = f64::NEG_INFINITY;
    for mask in 0u32..(1u32 << n) {
        let mut ok = true;
        let mut m = mask;
        let mut weight = 0.0;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            if nbr[i] & mask != 0 {
                ok = false;
                break;
            }
            weight += w[i];
            m &= m - 1;
        }
        if !ok {
            continue;
        }
        if weight >= best - tie_tol(best) {
            best = best.max(weight);
            scored.push((mask, weight));
            scored.retain(|&(_, v)| v >= best - tie_tol(best));
        }
    }
    let mut optima: Vec<Bitstring> = scored
        .iter()
        .map(|&(m, _)| Bitstring::from_mask(m as u64, n))
        .collect();
    optima.sort();
    let best_x = optima[0].clone();
    Ok(MwisSolution {
        weight: graph_weight(&w, &best_x),
        unique: optima.len() == 1,
        best: best_x,
        optima,
    })
}

fn tie_tol(v: f64) -> f64 {
    if v.is_finite() {
        1e-9 * v.abs().max(1.0)
    } else {
        0.0
    }
}

fn graph_weight(w: &[f64], x: &Bitstring) -> f64 {
    x.ones().map(|i| w[i]).sum()
}

/// `x^T Q x` with the upper-triangular convention.
pub fn qubo_energy(q: &QuboMatrix, x: &Bitstring) -> Result<f64> {
    q.energy(x)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InitialState {
    Random,
    Zeros,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnealSchedule {
    pub sweeps: usize,
    pub beta_start: f64,
    pub beta_end: f64,
    pub reads: usize,
    pub seed: u64,
    pub initial: InitialState,
}

impl Default for AnnealSchedule {
    fn default() -> Self {
        Self {
            sweeps: 2000,
            beta_start: 0.1,
            beta_end: 10.0,
            reads: 1000,
            seed: 0,
            initial: InitialState::Random,
        }
    }
}

impl AnnealSchedule {
    pub fn validate(&self) -> Result<()> {
        if self.sweeps == 0 || self.reads == 0 {
            return Err(Error::invalid("sweeps and reads must be at least 1"));
        }
        if !(self.beta_start > 0.0) || !(self.beta_end >= self.beta_start) || !self.beta_end.is_finite() {
            return Err(Error::invalid(format!(
                "need 0 < beta_start <= beta_end, got {} and {}",
                self.beta_start, self.beta_end
            )));
        }
        Ok(())
    }

    /// Inverse temperature for sweep `s`, geometric in `s`.
    pub fn beta(&self, s: usize) -> f64 {
        if self.sweeps == 1 {
            return self.beta_end;
        }
        let f = s as f64 / (self.sweeps - 1) as f64;
        self.beta_start * (self.beta_end / self.beta_start).powf(f)
    }
}

/// Largest linear coefficient in magnitude, else largest entry, else 1.
fn energy_scale(q: &QuboMatrix) -> f64 {
    let n = q.n();
    let diag = (0..n).map(|i| q.get(i, i).abs()).fold(0.0, f64::max);
    if diag > 0.0 {
        return diag;
    }
    let all = (0..n)
        .flat_map(|i| (i..n).map(move |j| (i, j)))
        .map(|(i, j)| q.get(i, j).abs())
        .fold(0.0, f64::max);
    if all > 0.0 {
        all
    } else {
        1.0
    }
}

/// Single-flip Metropolis chains, one per read, each on its own random
/// stream; the final state of every chain is one sample. Inverse
/// temperatures are in units of the largest linear coefficient, so the
/// schedule does not depend on the overall scale of the weights.
pub fn simulated_annealing(q: &QuboMatrix, schedule: &AnnealSchedule) -> Result<SampleSet> {
    schedule.validate()?;
    let start = Instant::now();
    let n = q.n();
    let scale = energy_scale(q);
    let diag: Vec<f64> = (0..n).map(|i| q.get(i, i) / scale).collect();
    let nbrs: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| (j, q.coupling(i, j) / scale))
                .filter(|&(_, c)| c != 0.0)
                .collect()
        })
        .collect();
    let betas: Vec<f64> = (0..schedule.sweeps).map(|s| schedule.beta(s)).collect();

    let finals: Vec<Bitstring> = (0..schedule.reads)
        .into_par_iter()
        .map(|read| {
            let mut r = rng::stream(schedule.seed, read as u64);
            let mut x: Vec<bool> = match schedule.initial {
                InitialState::Random => (0..n).map(|_| rng::uniform(&mut r) < 0.5).collect(),
                InitialState::Zeros => vec![false; n],
            };
            let mut field = vec![0.0; n];
            for i in 0..n {
                if x[i] {
                    for &(j, c) in &nbrs[i] {
                        field[j] += c;
                    }
                }
            }
            for &beta in &betas {
                for i in 0..n {
                    let de = if x[i] { -(diag[i] + field[i]) } else { diag[i] + field[i] };
                    if de <= 0.0 || rng::uniform(&mut r) < (-beta * de).exp() {
                        x[i] = !x[i];
                        let s = if x[i] { 1.0 } else { -1.0 };
                        for &(j, c) in &nbrs[i] {
                            field[j] += s * c;
                        }
                    }
                }
            }
            Bitstring::new(x)
        })
        .collect();

    let mut set = SampleSet::new("simulated_annealing");
    for x in finals {
        set.add(x, 1);
    }
    set.timing_us = start.elapsed().as_micros() as u64;
    Ok(set)
}
