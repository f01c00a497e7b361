//! Derivative-free search over adiabatic pulse parameters.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{select_best, OverlapGraph};
use crate::rng;
use crate::rydberg::{run_mis, EmulatorParams, PulseSequence};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseParams {
    /// Peak Rabi frequency, rad/µs.
    pub omega: f64,
    /// Initial detuning, rad/µs; the sweep ends at `-delta0`.
    pub delta0: f64,
    pub t_ns: f64,
}

impl PulseParams {
    pub fn sequence(&self) -> Result<PulseSequence> {
        PulseSequence::adiabatic(self.omega, self.delta0, self.t_ns)
    }

    fn to_array(self) -> [f64; 3] {
        [self.omega, self.delta0, self.t_ns]
    }

    fn from_array(a: [f64; 3]) -> Self {
        Self {
            omega: a[0],
            delta0: a[1],
            t_ns: a[2],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamBounds {
    pub omega: (f64, f64),
    pub delta0: (f64, f64),
    pub t_ns: (f64, f64),
}

impl Default for ParamBounds {
    fn default() -> Self {
        Self {
            omega: (0.1, 5.0),
            delta0: (-6.0, -0.5),
            t_ns: (500.0, 6000.0),
        }
    }
}

impl ParamBounds {
    pub fn validate(&self) -> Result<()> {
        for (name, (lo, hi)) in [("omega", self.omega), ("delta0", self.delta0), ("T", self.t_ns)] {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::invalid(format!("{name} bounds need low < high, got ({lo}, {hi})")));
            }
        }
        if self.omega.0 < 0.0 {
            return Err(Error::invalid("omega bounds must be non-negative"));
        }
        if self.t_ns.0 <= 0.0 {
            return Err(Error::invalid("T bounds must be positive"));
        }
        Ok(())
    }

    fn ranges(&self) -> [(f64, f64); 3] {
        [self.omega, self.delta0, self.t_ns]
    }

    pub fn contains(&self, p: &PulseParams) -> bool {
        self.ranges()
            .iter()
            .zip(p.to_array())
            .all(|(&(lo, hi), v)| (lo..=hi).contains(&v))
    }

    fn at(&self, unit: [f64; 3]) -> PulseParams {
        let r = self.ranges();
        PulseParams::from_array(std::array::from_fn(|d| {
            let (lo, hi) = r[d];
            (lo + unit[d].clamp(0.0, 1.0) * (hi - lo)).clamp(lo, hi)
        }))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub iter: usize,
    pub params: PulseParams,
    /// `None` when the evaluation failed.
    pub score: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TuneResult {
    pub best: PulseParams,
    pub best_score: f64,
    pub trace: Vec<TraceEntry>,
}

impl TuneResult {
    /// `iter,omega,delta0,T,score`; failed evaluations leave `score` empty.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("iter,omega,delta0,T,score\n");
        for e in &self.trace {
            let score = e.score.map(|s| format!("{s:?}")).unwrap_or_default();
            out.push_str(&format!(
                "{},{:?},{:?},{:?},{}\n",
                e.iter, e.params.omega, e.params.delta0, e.params.t_ns, score
            ));
        }
        out
    }

    /// Best score seen up to each trace entry.
    pub fn running_max(&self) -> Vec<f64> {
        let mut best = f64::NEG_INFINITY;
        self.trace
            .iter()
            .map(|e| {
                if let Some(s) = e.score {
                    best = best.max(s);
                }
                best
            })
            .collect()
    }
}

/// Maximizes `f(params, seed)` with at most `budget` calls: a Latin
/// hypercube over half the budget, then coordinate steps around the
/// incumbent, halving the step after a full unproductive cycle. Every
/// call receives the same `seed`.
pub fn optimize<F>(bounds: &ParamBounds, budget: usize, seed: u64, f: F) -> Result<TuneResult>
where
    F: Fn(&PulseParams, u64) -> Result<f64> + Sync,
{
    bounds.validate()?;
    if budget == 0 {
        return Err(Error::invalid("budget must be at least 1"));
    }
    let mut r = rng::seeded(seed);
    let n_init = budget.div_ceil(2).max(1);

    let mut perms: Vec<Vec<usize>> = Vec::new();
    for _ in 0..3 {
        let mut p: Vec<usize> = (0..n_init).collect();
        for i in (1..n_init).rev() {
            let j = (rng::uniform(&mut r) * (i + 1) as f64) as usize;
            p.swap(i, j.min(i));
        }
        perms.push(p);
    }
    let initial: Vec<PulseParams> = (0..n_init)
        .map(|k| {
            bounds.at(std::array::from_fn(|d| {
                (perms[d][k] as f64 + rng::uniform(&mut r)) / n_init as f64
            }))
        })
        .collect();
    let scores: Vec<Option<f64>> = initial
        .par_iter()
        .map(|p| f(p, seed).ok().filter(|s| s.is_finite()))
        .collect();

    let mut trace: Vec<TraceEntry> = initial
        .into_iter()
        .zip(scores)
        .enumerate()
        .map(|(iter, (params, score))| TraceEntry { iter, params, score })
        .collect();

    let mut incumbent = incumbent_of(&trace);
    let mut step = 0.25;
    let mut since_improvement = 0;
    let mut coord = 0;
    let mut dir = 1.0;
    let ranges = bounds.ranges();
    while trace.len() < budget {
        let Some((base, base_score)) = incumbent else {
            let params = bounds.at(std::array::from_fn(|_| rng::uniform(&mut r)));
            let score = f(&params, seed).ok().filter(|s| s.is_finite());
            trace.push(TraceEntry {
                iter: trace.len(),
                params,
                score,
            });
            incumbent = incumbent_of(&trace);
            continue;
        };
        let mut unit: [f64; 3] = std::array::from_fn(|d| {
            let (lo, hi) = ranges[d];
            (base.to_array()[d] - lo) / (hi - lo)
        });
        unit[coord] += dir * step;
        let candidate = bounds.at(unit);
        let score = f(&candidate, seed).ok().filter(|s| s.is_finite());
        trace.push(TraceEntry {
            iter: trace.len(),
            params: candidate,
            score,
        });
        if score.is_some_and(|s| s > base_score) {
            incumbent = Some((candidate, score.unwrap()));
            since_improvement = 0;
            continue;
        }
        since_improvement += 1;
        if dir > 0.0 {
            dir = -1.0;
        } else {
            dir = 1.0;
            coord = (coord + 1) % 3;
        }
        if since_improvement >= 6 {
            step *= 0.5;
            since_improvement = 0;
        }
    }

    match incumbent_of(&trace) {
        Some((best, best_score)) => Ok(TuneResult {
            best,
            best_score,
            trace,
        }),
        None => Err(Error::AllEvaluationsFailed(trace.len())),
    }
}

/// First entry holding the maximum score.
fn incumbent_of(trace: &[TraceEntry]) -> Option<(PulseParams, f64)> {
    let mut best: Option<(PulseParams, f64)> = None;
    for e in trace {
        if let Some(s) = e.score {
            if best.map_or(true, |(_, b)| s > b) {
                best = Some((e.params, s));
            }
        }
    }
    best
}

/// Silhouette weight of the best independent set the emulator samples;
/// 0 when no sample is independent.
pub fn objective(
    params: &PulseParams,
    graph: &OverlapGraph,
    shots: u64,
    seed: u64,
    emulator: &EmulatorParams,
) -> Result<f64> {
    let samples = run_mis(graph, &params.sequence()?, shots, seed, emulator)?;
    let best = select_best(&samples, graph)?;
    Ok(if best.valid { best.weight } else { 0.0 })
}

pub const RESCORE_SEEDS: u64 = 5;

/// Mean of `f` over [`RESCORE_SEEDS`] seeds derived from `seed`.
pub fn rescore<F>(params: &PulseParams, seed: u64, f: F) -> Result<f64>
where
    F: Fn(&PulseParams, u64) -> Result<f64>,
{
    let mut total = 0.0;
    for k in 0..RESCORE_SEEDS {
        total += f(params, rng::derive_seed(seed, k))?;
    }
    Ok(total / RESCORE_SEEDS as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseTuning {
    pub result: TuneResult,
    /// Best parameters re-scored over several shot seeds.
    pub final_score: f64,
}

pub fn tune_pulse(
    graph: &OverlapGraph,
    bounds: &ParamBounds,
    budget: usize,
    shots: u64,
    seed: u64,
    emulator: &EmulatorParams,
) -> Result<PulseTuning> {
    let f = |p: &PulseParams, s: u64| objective(p, graph, shots, s, emulator);
    let result = optimize(bounds, budget, seed, f)?;
    let final_score = rescore(&result.best, seed, f)?;
    Ok(PulseTuning { result, final_score })
}
