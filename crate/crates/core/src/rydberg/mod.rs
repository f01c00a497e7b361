//! Statevector emulator of an analog neutral-atom device solving MIS by a
//! detuning sweep under Rydberg blockade.

mod hamiltonian;
mod register;
mod sequence;
mod waveform;

pub use hamiltonian::{Hamiltonian, DEFAULT_C6, MAX_QUBITS};
pub use register::{embed_register, Atom, Register, REGISTER_FORMAT_VERSION};
pub use sequence::{PulseSequence, SEQUENCE_FORMAT_VERSION};
pub use waveform::Waveform;

use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Bitstring, OverlapGraph, SampleSet};
use crate::rng;

pub const DEFAULT_DT_NS: f64 = 0.5;
pub const DEFAULT_NORM_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_MIN_SPACING_UM: f64 = 5.0;

/// `R_b = (C6 / Ω)^(1/6)` in µm.
pub fn blockade_radius(c6: f64, omega: f64) -> f64 {
    (c6 / omega).powf(1.0 / 6.0)
}

/// All-ground state `|0…0⟩`.
pub fn ground_state(n: usize) -> Vec<Complex64> {
    let mut psi = vec![Complex64::new(0.0, 0.0); 1 << n];
    psi[0] = Complex64::new(1.0, 0.0);
    psi
}

pub fn norm(psi: &[Complex64]) -> f64 {
    psi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Fourth-order Runge–Kutta on `dψ/dt = −i H(t) ψ` over the whole
/// sequence; `t` in ns, `H` in rad/µs. The step is the largest not above
/// `dt` that divides the duration evenly. Fails with `NormDrift` as soon
/// as the norm leaves `1 ± tolerance`.
pub fn evolve(
    h: &Hamiltonian,
    seq: &PulseSequence,
    dt: f64,
    tolerance: f64,
    initial: &[Complex64],
) -> Result<Vec<Complex64>> {
    if initial.len() != h.dim() {
        return Err(Error::LengthMismatch {
            expected: h.dim(),
            actual: initial.len(),
        });
    }
    if !(dt > 0.0) || dt > 1.0 {
        return Err(Error::invalid(format!("dt must be in (0, 1] ns, got {dt}")));
    }
    let n0 = norm(initial);
    if (n0 - 1.0).abs() > tolerance {
        return Err(Error::invalid(format!("initial state has norm {n0}")));
    }
    let total = seq.duration();
    let steps = (total / dt).ceil() as usize;
    let step = total / steps as f64;
    let scale = Complex64::new(0.0, -1e-3 * step);

    let d = h.dim();
    let zero = Complex64::new(0.0, 0.0);
    let mut psi = initial.to_vec();
    let (mut k1, mut k2, mut k3, mut k4) = (vec![zero; d], vec![zero; d], vec![zero; d], vec![zero; d]);
    let mut tmp = vec![zero; d];
    let drive = |t: f64| (seq.omega.eval_unchecked(t), seq.delta.eval_unchecked(t));

    for s in 0..steps {
        let t = s as f64 * step;
        let (o0, d0) = drive(t);
        let (om, dm) = drive(t + 0.5 * step);
        let (o1, d1) = drive((t + step).min(total));

        h.apply(o0, d0, &psi, &mut k1);
        k1.iter_mut().for_each(|v| *v *= scale);
        for b in 0..d {
            tmp[b] = psi[b] + 0.5 * k1[b];
        }
        h.apply(om, dm, &tmp, &mut k2);
        k2.iter_mut().for_each(|v| *v *= scale);
        for b in 0..d {
            tmp[b] = psi[b] + 0.5 * k2[b];
        }
        h.apply(om, dm, &tmp, &mut k3);
        k3.iter_mut().for_each(|v| *v *= scale);
        for b in 0..d {
            tmp[b] = psi[b] + k3[b];
        }
        h.apply(o1, d1, &tmp, &mut k4);
        for b in 0..d {
            psi[b] += (k1[b] + 2.0 * k2[b] + 2.0 * k3[b] + k4[b] * scale) / 6.0;
        }

        let drift = (norm(&psi) - 1.0).abs();
        if drift > tolerance {
            return Err(Error::NormDrift {
                drift,
                tolerance,
                time_ns: t + step,
            });
        }
    }
    Ok(psi)
}

/// Draws `shots` measurements in the computational basis, one random
/// stream per shot.
pub fn sample(psi: &[Complex64], n: usize, shots: u64, seed: u64) -> Result<SampleSet> {
    if psi.len() != 1 << n {
        return Err(Error::LengthMismatch {
            expected: 1 << n,
            actual: psi.len(),
        });
    }
    if shots == 0 {
        return Err(Error::invalid("shots must be at least 1"));
    }
    let mut cumulative = Vec::with_capacity(psi.len());
    let mut acc = 0.0;
    for a in psi {
        acc += a.norm_sqr();
        cumulative.push(acc);
    }
    let mut counts = vec![0u64; psi.len()];
    for shot in 0..shots {
        let u = rng::uniform(&mut rng::stream(seed, shot)) * acc;
        let idx = cumulative.partition_point(|&c| c <= u).min(psi.len() - 1);
        counts[idx] += 1;
    }
    let mut set = SampleSet::new("rydberg");
    for (idx, c) in counts.into_iter().enumerate() {
        set.add(Bitstring::from_basis_index(idx, n), c);
    }
    Ok(set)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmulatorParams {
    pub c6: f64,
    /// Defaults to [`blockade_radius`] at the sequence's peak Rabi frequency.
    pub blockade_radius_um: Option<f64>,
    pub min_spacing_um: f64,
    pub dt_ns: f64,
    pub norm_tolerance: f64,
    pub embed_seed: u64,
    pub max_restarts: usize,
}

impl Default for EmulatorParams {
    fn default() -> Self {
        Self {
            c6: DEFAULT_C6,
            blockade_radius_um: None,
            min_spacing_um: DEFAULT_MIN_SPACING_UM,
            dt_ns: DEFAULT_DT_NS,
            norm_tolerance: DEFAULT_NORM_TOLERANCE,
            embed_seed: 0,
            max_restarts: 50,
        }
    }
}

impl EmulatorParams {
    pub fn radius_for(&self, seq: &PulseSequence) -> f64 {
        self.blockade_radius_um
            .unwrap_or_else(|| blockade_radius(self.c6, seq.omega_max()))
    }
}

#[derive(Clone, Debug)]
pub struct MisRun {
    pub register: Register,
    pub samples: SampleSet,
}

/// Embed, evolve from `|0…0⟩`, measure. The step is halved once if the
/// first attempt drifts.
pub fn run_mis_detailed(
    graph: &OverlapGraph,
    seq: &PulseSequence,
    shots: u64,
    seed: u64,
    params: &EmulatorParams,
) -> Result<MisRun> {
    let start = Instant::now();
    if graph.n() > MAX_QUBITS {
        return Err(Error::TooLarge {
            what: "statevector register",
            size: graph.n(),
            limit: MAX_QUBITS,
        });
    }
    let register = embed_register(
        graph,
        params.radius_for(seq),
        params.min_spacing_um,
        params.embed_seed,
        params.max_restarts,
    )?;
    let h = Hamiltonian::new(&register, params.c6)?;
    let psi0 = ground_state(graph.n());
    let psi = match evolve(&h, seq, params.dt_ns, params.norm_tolerance, &psi0) {
        Err(Error::NormDrift { .. }) => evolve(&h, seq, 0.5 * params.dt_ns, params.norm_tolerance, &psi0)?,
        other => other?,
    };
    let mut samples = sample(&psi, graph.n(), shots, seed)?;
    samples.timing_us = start.elapsed().as_micros() as u64;
    Ok(MisRun { register, samples })
}

pub fn run_mis(
    graph: &OverlapGraph,
    seq: &PulseSequence,
    shots: u64,
    seed: u64,
    params: &EmulatorParams,
) -> Result<SampleSet> {
    run_mis_detailed(graph, seq, shots, seed, params).map(|r| r.samples)
}
