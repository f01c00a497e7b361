use serde::{Deserialize, Serialize};

use super::Waveform;
use crate::error::{Error, Result};

pub const SEQUENCE_FORMAT_VERSION: u32 = 1;

/// Rabi frequency and detuning over a common duration.
#[derive(Clone, Debug, PartialEq)]
pub struct PulseSequence {
    pub omega: Waveform,
    pub delta: Waveform,
}

#[derive(Serialize, Deserialize)]
struct SequenceJson {
    version: u32,
    #[serde(rename = "T_ns")]
    t_ns: f64,
    omega_anchors: Vec<f64>,
    delta_anchors: Vec<f64>,
}

impl PulseSequence {
    pub fn new(omega: Waveform, delta: Waveform) -> Result<Self> {
        if omega.duration() != delta.duration() {
            return Err(Error::invalid(format!(
                "waveform durations differ: {} vs {}",
                omega.duration(),
                delta.duration()
            )));
        }
        if omega.anchors().iter().any(|&v| v < 0.0) {
            return Err(Error::invalid("Rabi frequency must be non-negative"));
        }
        Ok(Self { omega, delta })
    }

    /// Ω through `[1e-9, omega, 1e-9]`, δ through `[delta0, 0, -delta0]`.
    pub fn adiabatic(omega: f64, delta0: f64, t_ns: f64) -> Result<Self> {
        Self::new(
            Waveform::new(t_ns, vec![1e-9, omega, 1e-9])?,
            Waveform::new(t_ns, vec![delta0, 0.0, -delta0])?,
        )
    }

    pub fn duration(&self) -> f64 {
        self.omega.duration()
    }

    pub fn omega_max(&self) -> f64 {
        self.omega.max_value()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(SequenceJson {
            version: SEQUENCE_FORMAT_VERSION,
            t_ns: self.duration(),
            omega_anchors: self.omega.anchors().to_vec(),
            delta_anchors: self.delta.anchors().to_vec(),
        })
        .expect("plain data serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let s: SequenceJson = serde_json::from_value(v.clone())?;
        if s.version != SEQUENCE_FORMAT_VERSION {
            return Err(Error::Parse(format!("unsupported sequence version {}", s.version)));
        }
        Self::new(Waveform::new(s.t_ns, s.omega_anchors)?, Waveform::new(s.t_ns, s.delta_anchors)?)
    }
}
