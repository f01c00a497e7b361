use crate::error::{Error, Result};

/// Shape-preserving piecewise cubic (PCHIP, Fritsch–Carlson slopes with
/// the three-point end condition) through anchors at equally spaced times
/// on `[0, duration]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Waveform {
    duration_ns: f64,
    anchors: Vec<f64>,
    slopes: Vec<f64>,
}

impl Waveform {
    pub fn new(duration_ns: f64, anchors: Vec<f64>) -> Result<Self> {
        if !(duration_ns > 0.0) || !duration_ns.is_finite() {
            return Err(Error::invalid(format!("duration must be positive, got {duration_ns}")));
        }
        if anchors.is_empty() {
            return Err(Error::invalid("waveform needs at least one anchor"));
        }
        if anchors.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("waveform anchors must be finite"));
        }
        let slopes = pchip_slopes(&anchors);
        Ok(Self {
            duration_ns,
            anchors,
            slopes,
        })
    }

    pub fn constant(duration_ns: f64, value: f64) -> Result<Self> {
        Self::new(duration_ns, vec![value, value])
    }

    pub fn duration(&self) -> f64 {
        self.duration_ns
    }

    pub fn anchors(&self) -> &[f64] {
        &self.anchors
    }

    pub fn max_value(&self) -> f64 {
        self.anchors.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Value at `t` ns, rad/µs.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(0.0..=self.duration_ns).contains(&t) {
            return Err(Error::TimeOutOfRange {
                t,
                duration: self.duration_ns,
            });
        }
        Ok(self.eval_unchecked(t))
    }

    pub(crate) fn eval_unchecked(&self, t: f64) -> f64 {
        let m = self.anchors.len();
        if m == 1 {
            return self.anchors[0];
        }
        let segments = (m - 1) as f64;
        // work in units of one segment so slopes are per-segment
        let u = (t / self.duration_ns * segments).clamp(0.0, segments);
        let k = (u.floor() as usize).min(m - 2);
        let s = u - k as f64;
        let (y0, y1) = (self.anchors[k], self.anchors[k + 1]);
        let (d0, d1) = (self.slopes[k], self.slopes[k + 1]);
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * y0
            + (s3 - 2.0 * s2 + s) * d0
            + (-2.0 * s3 + 3.0 * s2) * y1
            + (s3 - s2) * d1
    }
}

/// Derivatives at the anchors with unit spacing.
fn pchip_slopes(y: &[f64]) -> Vec<f64> {
    let m = y.len();
    if m == 1 {
        return vec![0.0];
    }
    let delta: Vec<f64> = y.windows(2).map(|w| w[1] - w[0]).collect();
    if m == 2 {
        return vec![delta[0]; 2];
    }
    let mut d = vec![0.0; m];
    for k in 1..m - 1 {
        let (a, b) = (delta[k - 1], delta[k]);
        if a * b > 0.0 {
            // harmonic mean; the general weights coincide for equal spacing
            d[k] = 2.0 / (1.0 / a + 1.0 / b);
        }
    }
    d[0] = end_slope(delta[0], delta[1]);
    d[m - 1] = end_slope(delta[m - 2], delta[m - 3]);
    d
}

fn end_slope(d0: f64, d1: f64) -> f64 {
    let s = (3.0 * d0 - d1) / 2.0;
    if s.signum() != d0.signum() || d0 == 0.0 {
        0.0
    } else if d0.signum() != d1.signum() && s.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        s
    }
}
