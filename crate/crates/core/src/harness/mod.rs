//! Batch experiments, verification reports and the file formats around them.

mod export;
mod verify;

pub use export::{export_encoding, import_polynomial, PolynomialExport};
pub use verify::{encoding_minimizers, verify, Check, VerifyReport};

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extbp::{brute_force, classify, default_lambda, encode, Classification, EbpAssignment, EbpInstance, Encoding, Formulation};
use crate::qaoa::{run, CostTable, QaoaConfig, RunRecord};

/// Environment variable overriding the worker count.
pub const THREADS_ENV: &str = "REFORM_THREADS";

/// A builtin name (`A`, `B`, `C`) or a path to an instance JSON file.
pub fn resolve_instance(spec: &str) -> Result<EbpInstance> {
    match EbpInstance::builtin(spec) {
        Ok(inst) => Ok(inst),
        Err(Error::UnknownInstance(_)) if Path::new(spec).is_file() => {
            EbpInstance::from_json(&std::fs::read_to_string(spec)?)
        }
        Err(e) => Err(e),
    }
}

/// Worker pool sized by `threads`, else [`THREADS_ENV`], else rayon's default.
pub fn thread_pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    let n = match threads {
        Some(n) => n,
        None => match std::env::var(THREADS_ENV) {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("{THREADS_ENV}={s} is not a thread count")))?,
            Err(_) => 0,
        },
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| Error::InvalidConfig(e.to_string()))
}

/// Penalty weights: explicit values, falling back to [`default_lambda`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Lambdas {
    pub uni: Option<f64>,
    pub capa: Option<f64>,
}

impl Lambdas {
    pub fn resolve(&self, inst: &EbpInstance) -> (f64, f64) {
        let d = default_lambda(inst);
        (self.uni.unwrap_or(d), self.capa.unwrap_or(d))
    }
}

pub fn build_encoding(inst: &EbpInstance, formulation: Formulation, lambdas: Lambdas) -> Result<Encoding> {
    let (u, c) = lambdas.resolve(inst);
    encode(inst, formulation, u, c)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub instances: Vec<String>,
    pub formulations: Vec<Formulation>,
    pub runs: usize,
    pub qaoa: QaoaConfig,
    pub lambdas: Lambdas,
    /// When false, `wall_ms` is written as 0 so that output files are
    /// reproducible byte for byte.
    pub record_timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            instances: vec!["A".into(), "B".into(), "C".into()],
            formulations: vec![Formulation::Pubo, Formulation::Qubo],
            runs: 100,
            qaoa: QaoaConfig::default(),
            lambdas: Lambdas::default(),
            record_timing: true,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.runs < 1 {
            return Err(Error::InvalidConfig("runs must be at least 1".into()));
        }
        if self.instances.is_empty() || self.formulations.is_empty() {
            return Err(Error::InvalidConfig("nothing to run".into()));
        }
        self.qaoa.validate()
    }
}

/// One line of the per-run CSV. Field order is the column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub run_id: u64,
    pub instance: String,
    pub formulation: Formulation,
    pub seed: u64,
    pub n_qubits: usize,
    pub n_iterations: usize,
    pub n_evals: usize,
    /// Qubit 0 first.
    pub best_bits: String,
    pub best_loss_unconstrained: f64,
    pub classification: Classification,
    pub wall_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub instance: String,
    pub formulation: Formulation,
    pub qubit_count: usize,
    pub runs: usize,
    pub optimal: f64,
    pub feasible_non_optimal: f64,
    pub infeasible: f64,
    pub mean_iterations: f64,
    pub mean_wall_ms: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentOutput {
    pub rows: Vec<RunRow>,
    pub summary: Vec<SummaryRow>,
}

pub fn bits_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Everything needed to run and classify one (instance, formulation) cell.
pub struct Cell {
    pub instance: EbpInstance,
    pub encoding: Encoding,
    pub table: CostTable,
    pub optimum: f64,
}

impl Cell {
    pub fn new(instance: EbpInstance, formulation: Formulation, lambdas: Lambdas) -> Result<Self> {
        let optimum = brute_force(&instance)?.optimum;
        let encoding = build_encoding(&instance, formulation, lambdas)?;
        let table = CostTable::build(&encoding.poly, encoding.qubit_count)?;
        Ok(Cell {
            instance,
            encoding,
            table,
            optimum,
        })
    }

    pub fn classify(&self, record: &RunRecord) -> Result<Classification> {
        let a = EbpAssignment::from_bits(&self.instance, &record.best_bits())?;
        classify(&self.instance, &a, self.optimum)
    }

    pub fn row(&self, record: &RunRecord, record_timing: bool) -> Result<RunRow> {
        Ok(RunRow {
            run_id: record.run_index,
            instance: self.instance.name.clone(),
            formulation: self.encoding.formulation,
            seed: record.seed,
            n_qubits: record.num_qubits,
            n_iterations: record.iterations,
            n_evals: record.sampled_states,
            best_bits: bits_string(&record.best_bits()),
            best_loss_unconstrained: record.best_loss,
            classification: self.classify(record)?,
            wall_ms: if record_timing {
                record.elapsed.as_secs_f64() * 1e3
            } else {
                0.0
            },
        })
    }

    /// Runs `0..runs` on the current rayon pool; results are in run order.
    pub fn run_batch(&self, qaoa: &QaoaConfig, runs: usize) -> Result<Vec<RunRecord>> {
        (0..runs as u64).into_par_iter().map(|k| run(&self.table, qaoa, k)).collect()
    }
}

/// Proportions and means per (instance, formulation), in first-seen order.
pub fn summarize(rows: &[RunRow]) -> Vec<SummaryRow> {
    let mut keys: Vec<(String, Formulation)> = Vec::new();
    for r in rows {
        let k = (r.instance.clone(), r.formulation);
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    keys.into_iter()
        .map(|(instance, formulation)| {
            let cell: Vec<&RunRow> = rows
                .iter()
                .filter(|r| r.instance == instance && r.formulation == formulation)
                .collect();
            let n = cell.len() as f64;
            let share = |c: Classification| cell.iter().filter(|r| r.classification == c).count() as f64 / n;
            SummaryRow {
                qubit_count: cell[0].n_qubits,
                runs: cell.len(),
                optimal: share(Classification::Optimal),
                feasible_non_optimal: share(Classification::FeasibleNonOptimal),
                infeasible: share(Classification::Infeasible),
                mean_iterations: cell.iter().map(|r| r.n_iterations as f64).sum::<f64>() / n,
                mean_wall_ms: cell.iter().map(|r| r.wall_ms).sum::<f64>() / n,
                instance,
                formulation,
            }
        })
        .collect()
}

/// Runs every (instance, formulation) cell on the current rayon pool.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for spec in &cfg.instances {
        let inst = resolve_instance(spec)?;
        for &f in &cfg.formulations {
            let cell = Cell::new(inst.clone(), f, cfg.lambdas)?;
            for record in cell.run_batch(&cfg.qaoa, cfg.runs)? {
                rows.push(cell.row(&record, cfg.record_timing)?);
            }
        }
    }
    let summary = summarize(&rows);
    Ok(ExperimentOutput { rows, summary })
}

pub fn write_csv<W: Write>(rows: &[RunRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_csv<R: std::io::Read>(r: R) -> Result<Vec<RunRow>> {
    let mut rd = csv::Reader::from_reader(r);
    Ok(rd.deserialize().collect::<std::result::Result<_, _>>()?)
}

/// Writes `runs.csv` and `summary.json` into `dir`, creating it if needed.
pub fn write_outputs(out: &ExperimentOutput, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    write_csv(&out.rows, std::fs::File::create(dir.join("runs.csv"))?)?;
    let mut json = serde_json::to_string_pretty(&out.summary)?;
    json.push('\n');
    std::fs::write(dir.join("summary.json"), json)?;
    Ok(())
}
