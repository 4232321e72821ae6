//! Depth-`p` QAOA on a classical statevector.
//!
//! One run draws initial angles, then lets [`optimizer::minimize`] drive the
//! loss: each evaluation evolves the state, samples `shots` basis states and
//! returns their mean cost. The best state over every sample of the run is
//! reported.

mod optimizer;
mod state;
mod table;

pub use optimizer::{minimize, OptimizeResult, OptimizerConfig, TracePoint};
pub use state::{estimate_loss, evolve, StateVector};
pub use table::{CostTable, MAX_QUBITS};

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QaoaConfig {
    pub depth: usize,
    pub shots: usize,
    pub optimizer: OptimizerConfig,
    /// Master seed; run `k` uses stream `k` of it (see [`run_rng`]).
    pub seed: u64,
}

impl Default for QaoaConfig {
    fn default() -> Self {
        QaoaConfig {
            depth: 1,
            shots: 10,
            optimizer: OptimizerConfig::default(),
            seed: 0,
        }
    }
}

impl QaoaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.depth < 1 {
            return Err(Error::InvalidConfig("depth must be at least 1".into()));
        }
        if self.shots < 1 {
            return Err(Error::InvalidConfig("shots must be at least 1".into()));
        }
        if self.optimizer.max_evals < 1 {
            return Err(Error::InvalidConfig("max_evals must be at least 1".into()));
        }
        let o = &self.optimizer;
        if !(o.rho_end > 0.0 && o.rho_begin >= o.rho_end && o.rho_begin.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "need 0 < rho_end <= rho_begin, got {} and {}",
                o.rho_end, o.rho_begin
            )));
        }
        Ok(())
    }
}

/// ChaCha8 seeded from `master`, positioned on stream `run_index`. Streams are
/// independent, so runs can execute in any order or in parallel.
pub fn run_rng(master: u64, run_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(run_index);
    rng
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub seed: u64,
    pub run_index: u64,
    pub num_qubits: usize,
    /// Loss evaluations made by the optimizer.
    pub iterations: usize,
    /// Basis states sampled over the run (`shots × iterations`).
    pub sampled_states: usize,
    pub best_state: u64,
    pub best_loss: f64,
    pub initial_params: Vec<f64>,
    pub final_params: Vec<f64>,
    pub final_loss: f64,
    pub trace: Vec<TracePoint>,
    pub hit_cap: bool,
    #[serde(with = "duration_ms")]
    pub elapsed: Duration,
}

impl RunRecord {
    /// Bits of the best state, qubit 0 first.
    pub fn best_bits(&self) -> Vec<bool> {
        (0..self.num_qubits).map(|k| (self.best_state >> k) & 1 == 1).collect()
    }

    /// The record with its wall time cleared, for comparisons.
    pub fn without_timing(mut self) -> Self {
        self.elapsed = Duration::ZERO;
        self
    }
}

mod duration_ms {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64() * 1e3)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_secs_f64(f64::deserialize(d)? / 1e3))
    }
}

/// Initial angles: `γ_l ~ U[0, 2π)` then `β_l ~ U[0, π)`.
pub fn initial_params<R: Rng + ?Sized>(depth: usize, rng: &mut R) -> Vec<f64> {
    let gammas = (0..depth).map(|_| rng.random::<f64>() * 2.0 * PI).collect::<Vec<_>>();
    let betas = (0..depth).map(|_| rng.random::<f64>() * PI);
    gammas.into_iter().chain(betas).collect()
}

/// One QAOA run on stream `run_index` of `config.seed`.
pub fn run(table: &CostTable, config: &QaoaConfig, run_index: u64) -> Result<RunRecord> {
    config.validate()?;
    let start = Instant::now();
    let mut rng = run_rng(config.seed, run_index);
    let theta0 = initial_params(config.depth, &mut rng);

    let mut state = StateVector::uniform(table.num_qubits());
    let mut best: Option<(usize, f64)> = None;
    let mut sampled = 0usize;
    let result = minimize(
        |params| {
            state.evolve_in_place(params, table);
            let samples = state.sample(config.shots, &mut rng);
            for &z in &samples {
                let v = table.value(z);
                if best.is_none_or(|(_, b)| v < b) {
                    best = Some((z, v));
                }
            }
            sampled += samples.len();
            estimate_loss(&samples, table).expect("shots >= 1")
        },
        &theta0,
        &config.optimizer,
    );
    let (best_state, best_loss) = best.expect("at least one evaluation");
    Ok(RunRecord {
        seed: config.seed,
        run_index,
        num_qubits: table.num_qubits(),
        iterations: result.evals(),
        sampled_states: sampled,
        best_state: best_state as u64,
        best_loss,
        initial_params: theta0,
        final_params: result.x,
        final_loss: result.f,
        trace: result.trace,
        hit_cap: result.hit_cap,
        elapsed: start.elapsed(),
    })
}
