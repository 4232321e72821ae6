use num_complex::Complex64;
use rand::Rng;

use super::table::CostTable;
use crate::error::{Error, Result};

/// `2^n` complex amplitudes; basis index bit `k` is qubit `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|+>^n`.
    pub fn uniform(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        let a = (dim as f64).sqrt().recip();
        StateVector {
            num_qubits,
            amps: vec![Complex64::new(a, 0.0); dim],
        }
    }

    /// `|z>`.
    pub fn basis(num_qubits: usize, z: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << num_qubits];
        amps[z] = Complex64::new(1.0, 0.0);
        StateVector { num_qubits, amps }
    }

    pub fn reset_uniform(&mut self) {
        let a = (self.amps.len() as f64).sqrt().recip();
        self.amps.fill(Complex64::new(a, 0.0));
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `amp[z] *= exp(-i γ values[z])`.
    pub fn apply_cost_phase(&mut self, table: &CostTable, gamma: f64) {
        assert_eq!(table.len(), self.amps.len(), "table and state sizes differ");
        let phases: Vec<Complex64> = table
            .levels()
            .iter()
            .map(|&v| Complex64::from_polar(1.0, -gamma * v))
            .collect();
        for (a, &l) in self.amps.iter_mut().zip(table.level_of()) {
            *a *= phases[l as usize];
        }
    }

    /// `exp(-i β X)` on every qubit.
    pub fn apply_mixer(&mut self, beta: f64) {
        let (s, c) = beta.sin_cos();
        for k in 0..self.num_qubits {
            let stride = 1usize << k;
            for block in self.amps.chunks_exact_mut(2 * stride) {
                let (lo, hi) = block.split_at_mut(stride);
                for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (x, y) = (*a, *b);
                    // c·x − i s·y,  −i s·x + c·y
                    *a = Complex64::new(c * x.re + s * y.im, c * x.im - s * y.re);
                    *b = Complex64::new(s * x.im + c * y.re, c * y.im - s * x.re);
                }
            }
        }
    }

    /// Resets to `|+>^n` and applies `p` cost/mixer layers. `params` holds
    /// `γ_1..γ_p` followed by `β_1..β_p`.
    pub fn evolve_in_place(&mut self, params: &[f64], table: &CostTable) {
        assert!(params.len() % 2 == 0, "parameter vector must hold γ and β");
        let p = params.len() / 2;
        self.reset_uniform();
        for l in 0..p {
            self.apply_cost_phase(table, params[l]);
            self.apply_mixer(params[p + l]);
        }
    }

    /// `shots` independent draws from `|amp|^2` by inverse CDF. Uniforms are
    /// drawn first, in shot order, then resolved in one pass over the state.
    pub fn sample<R: Rng + ?Sized>(&self, shots: usize, rng: &mut R) -> Vec<usize> {
        let total = self.norm_sqr();
        let mut draws: Vec<(f64, usize)> = (0..shots).map(|k| (rng.random::<f64>() * total, k)).collect();
        draws.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out = vec![0usize; shots];
        let mut acc = 0.0;
        let mut last_positive = 0;
        let mut next = 0;
        for (z, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p == 0.0 {
                continue;
            }
            last_positive = z;
            acc += p;
            while next < shots && draws[next].0 < acc {
                out[draws[next].1] = z;
                next += 1;
            }
            if next == shots {
                return out;
            }
        }
        // rounding left some draws past the final partial sum
        for &(_, k) in &draws[next..] {
            out[k] = last_positive;
        }
        out
    }
}

/// Final state of the QAOA circuit with parameters `(γ_1..γ_p, β_1..β_p)`.
pub fn evolve(params: &[f64], table: &CostTable) -> StateVector {
    let mut s = StateVector::uniform(table.num_qubits());
    s.evolve_in_place(params, table);
    s
}

/// Arithmetic mean of the table at the sampled states.
pub fn estimate_loss(samples: &[usize], table: &CostTable) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    Ok(samples.iter().map(|&z| table.value(z)).sum::<f64>() / samples.len() as f64)
}
