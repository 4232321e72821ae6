use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use reform_core::extbp::Formulation;
use reform_core::harness::{
    self, build_encoding, export_encoding, resolve_instance, run_experiment, summarize, thread_pool, write_csv,
    write_outputs, Cell, ExperimentConfig, Lambdas,
};
use reform_core::qaoa::{OptimizerConfig, QaoaConfig};

#[derive(Parser)]
#[command(name = "reform", version, about = "Penalty reformulations of extended bin packing, solved with simulated QAOA")]
struct Cli {
    /// Worker threads (default: REFORM_THREADS, else all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One QAOA run; prints the CSV row.
    Solve {
        /// Builtin name (A, B, C) or instance file.
        #[arg(long)]
        instance: String,
        #[command(flatten)]
        lambdas: LambdaArgs,
        #[arg(long, default_value = "pubo")]
        formulation: Formulation,
        /// Stream index under the master seed.
        #[arg(long, default_value_t = 0)]
        run_index: u64,
        #[command(flatten)]
        qaoa: QaoaArgs,
    },
    /// Batches of runs over instances and formulations.
    Experiment {
        /// Builtin names or instance files; repeatable.
        #[arg(long = "instance", default_values = ["A", "B", "C"])]
        instances: Vec<String>,
        /// `pubo`, `qubo`; repeatable.
        #[arg(long = "formulation", default_values = ["pubo", "qubo"])]
        formulations: Vec<Formulation>,
        #[arg(long, default_value_t = 100)]
        runs: usize,
        #[command(flatten)]
        lambdas: LambdaArgs,
        #[command(flatten)]
        qaoa: QaoaArgs,
        /// Directory for runs.csv and summary.json; without it the CSV goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write wall_ms as 0 so reruns produce identical files.
        #[arg(long)]
        no_timing: bool,
    },
    /// Brute-force checks of an instance and both encodings.
    Verify {
        #[arg(long)]
        instance: String,
    },
    /// Writes an encoding as a JSON term list.
    Export {
        /// Builtin name (A, B, C) or instance file.
        #[arg(long)]
        instance: String,
        #[command(flatten)]
        lambdas: LambdaArgs,
        #[arg(long, default_value = "pubo")]
        formulation: Formulation,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct LambdaArgs {
    /// Weight of the one-train-per-group penalties (default: objective range + 1).
    #[arg(long)]
    lambda_uni: Option<f64>,
    /// Weight of the capacity penalties (default: objective range + 1).
    #[arg(long)]
    lambda_capa: Option<f64>,
}

impl LambdaArgs {
    fn lambdas(&self) -> Lambdas {
        Lambdas {
            uni: self.lambda_uni,
            capa: self.lambda_capa,
        }
    }
}

#[derive(Args)]
struct QaoaArgs {
    #[arg(long, default_value_t = 10)]
    shots: usize,
    #[arg(long, default_value_t = 1)]
    depth: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 500)]
    max_evals: usize,
}

impl QaoaArgs {
    fn config(&self) -> QaoaConfig {
        QaoaConfig {
            depth: self.depth,
            shots: self.shots,
            seed: self.seed,
            optimizer: OptimizerConfig {
                max_evals: self.max_evals,
                ..OptimizerConfig::default()
            },
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match thread_pool(cli.threads)
        .map_err(anyhow::Error::from)
        .and_then(|pool| pool.install(|| execute(cli.command)))
    {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn execute(command: Command) -> Result<bool> {
    match command {
        Command::Solve {
            instance,
            lambdas,
            formulation,
            run_index,
            qaoa,
        } => {
            let inst = resolve_instance(&instance)?;
            let cell = Cell::new(inst, formulation, lambdas.lambdas())?;
            let record = reform_core::qaoa::run(&cell.table, &qaoa.config(), run_index)?;
            let row = cell.row(&record, true)?;
            write_csv(&[row], std::io::stdout().lock())?;
            eprintln!(
                "final params {:?}, {} evaluations{}",
                record.final_params,
                record.iterations,
                if record.hit_cap { " (evaluation cap reached)" } else { "" }
            );
            Ok(true)
        }
        Command::Experiment {
            instances,
            formulations,
            runs,
            lambdas,
            qaoa,
            out,
            no_timing,
        } => {
            let cfg = ExperimentConfig {
                instances,
                formulations,
                runs,
                qaoa: qaoa.config(),
                lambdas: lambdas.lambdas(),
                record_timing: !no_timing,
            };
            let output = run_experiment(&cfg)?;
            match out {
                Some(dir) => {
                    write_outputs(&output, &dir).with_context(|| format!("writing to {}", dir.display()))?;
                    for s in summarize(&output.rows) {
                        eprintln!(
                            "{} {}: {} qubits, optimal {:.2}, feasible {:.2}, infeasible {:.2}, mean iterations {:.1}",
                            s.instance,
                            s.formulation,
                            s.qubit_count,
                            s.optimal,
                            s.feasible_non_optimal,
                            s.infeasible,
                            s.mean_iterations
                        );
                    }
                }
                None => write_csv(&output.rows, std::io::stdout().lock())?,
            }
            Ok(true)
        }
        Command::Verify { instance } => {
            let inst = resolve_instance(&instance)?;
            let report = harness::verify(&inst)?;
            print!("{report}");
            Ok(report.all_passed())
        }
        Command::Export {
            instance,
            lambdas,
            formulation,
            out,
        } => {
            let inst = resolve_instance(&instance)?;
            let enc = build_encoding(&inst, formulation, lambdas.lambdas())?;
            let mut json = export_encoding(&inst, &enc).to_json()?;
            json.push('\n');
            match out {
                Some(path) => std::fs::write(&path, json).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{json}"),
            }
            Ok(true)
        }
    }
}
