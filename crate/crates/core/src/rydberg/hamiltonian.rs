use nalgebra::DMatrix;
use num_complex::Complex64;

use super::Register;
use crate::error::{Error, Result};

/// Interaction coefficient, rad·µm⁶/µs.
pub const DEFAULT_C6: f64 = 5.42e6;
/// Largest register the statevector emulator accepts.
pub const MAX_QUBITS: usize = 14;

/// `H/ħ = Σ (Ω/2) σx_i − δ Σ n_i + Σ_{i<j} C6/R_ij⁶ n_i n_j` in rad/µs.
/// Basis index bit `n-1-i` is qubit `i`; a set bit is the Rydberg state.
/// Applied matrix-free: the interaction diagonal is cached and the drive
/// is a sum of bit flips.
#[derive(Clone, Debug)]
pub struct Hamiltonian {
    n: usize,
    interaction: Vec<f64>,
    excitations: Vec<f64>,
}

impl Hamiltonian {
    pub fn new(register: &Register, c6: f64) -> Result<Self> {
        let n = register.len();
        if n == 0 {
            return Err(Error::invalid("empty register"));
        }
        if n > MAX_QUBITS {
            return Err(Error::TooLarge {
                what: "statevector register",
                size: n,
                limit: MAX_QUBITS,
            });
        }
        let dim = 1usize << n;
        let mut pair = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let r = register.distance(i, j);
                pair[i][j] = c6 / r.powi(6);
            }
        }
        let mut interaction = vec![0.0; dim];
        let mut excitations = vec![0.0; dim];
        for (b, (e, x)) in interaction.iter_mut().zip(excitations.iter_mut()).enumerate() {
            let up: Vec<usize> = (0..n).filter(|&i| b >> (n - 1 - i) & 1 == 1).collect();
            *x = up.len() as f64;
            for (a, &i) in up.iter().enumerate() {
                for &j in &up[a + 1..] {
                    *e += pair[i][j];
                }
            }
        }
        Ok(Self {
            n,
            interaction,
            excitations,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// `out = H(Ω, δ) psi`.
    pub fn apply(&self, omega: f64, delta: f64, psi: &[Complex64], out: &mut [Complex64]) {
        let half = 0.5 * omega;
        for (b, o) in out.iter_mut().enumerate() {
            let mut acc = psi[b] * (self.interaction[b] - delta * self.excitations[b]);
            for q in 0..self.n {
                acc += psi[b ^ (1 << q)] * half;
            }
            *o = acc;
        }
    }

    pub fn to_dense(&self, omega: f64, delta: f64) -> DMatrix<Complex64> {
        let d = self.dim();
        let mut h = DMatrix::<Complex64>::zeros(d, d);
        for b in 0..d {
            h[(b, b)] = Complex64::new(self.interaction[b] - delta * self.excitations[b], 0.0);
            for q in 0..self.n {
                h[(b, b ^ (1 << q))] = Complex64::new(0.5 * omega, 0.0);
            }
        }
        h
    }

    /// `<psi|H|psi>`, real for normalized `psi`.
    pub fn expectation(&self, omega: f64, delta: f64, psi: &[Complex64]) -> f64 {
        let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
        self.apply(omega, delta, psi, &mut out);
        psi.iter().zip(&out).map(|(a, b)| (a.conj() * b).re).sum()
    }
}
