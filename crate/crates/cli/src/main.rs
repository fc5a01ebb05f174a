use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use vqkz::experiments::{
    curve_data, gen_qary_lattice, gen_random_lattice, oracle_bench, run_experiment, ExperimentSpec,
};
use vqkz::lattice::{lll_reduce, read_basis, write_basis};
use vqkz::oracle::{OracleConfig, QuantumOracle};
use vqkz::reduction::{vqkz_reduce, ExactOracle, ReductionOutcome, ReductionStatus, DEFAULT_MAX_TOURS};

#[derive(Parser)]
#[command(name = "vqkz", version, about = "Variational block lattice reduction on a simulated quantum oracle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Random,
    Qary,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Lll,
    Bkz,
    Vqkz,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleArg {
    Quantum,
    Exact,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a lattice basis file.
    Gen {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        rank: usize,
        /// q-ary modulus.
        #[arg(long, default_value_t = 97)]
        q: i64,
        /// q-ary k (defaults to rank/2).
        #[arg(long)]
        k: Option<usize>,
        /// Entry bound for random bases.
        #[arg(long, default_value_t = 50)]
        bound: i64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Reduce a basis file and print the result.
    Reduce {
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long, default_value_t = 3)]
        beta: usize,
        #[arg(long, default_value_t = 0.75)]
        delta: f64,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "quantum")]
        oracle: OracleArg,
        #[arg(long, default_value_t = 6)]
        layers: usize,
        #[arg(long, default_value_t = 1000)]
        iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_TOURS)]
        max_tours: usize,
        /// Write the reduced basis here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the tour event log (JSON) here.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Run the oracle on random blocks and compare with exact enumeration.
    OracleBench {
        #[arg(long)]
        beta: usize,
        #[arg(long)]
        instances: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        layers: usize,
        #[arg(long, default_value_t = 1000)]
        iters: usize,
        #[arg(long, default_value_t = 50)]
        bound: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Qubit requirement per rank, as a gnuplot data file.
    QubitCurve {
        #[arg(long)]
        budget: usize,
        #[arg(long, default_value_t = 0.75)]
        delta: f64,
        #[arg(long, default_value_t = 256)]
        max_rank: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run an experiment grid described by a JSON spec.
    Experiment {
        #[arg(long)]
        spec: PathBuf,
    },
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn report_outcome(outcome: &ReductionOutcome, log: Option<&Path>) -> Result<()> {
    if outcome.status == ReductionStatus::TimedOut {
        eprintln!("warning: tour limit reached after {} tours; returning the best basis seen", outcome.tours);
    }
    for e in outcome.events.iter().filter_map(|e| e.warning.as_ref().map(|w| (e, w))) {
        eprintln!("warning: tour {} block [{}, {}]: {}", e.0.tour, e.0.j, e.0.k, e.1);
    }
    if let Some(p) = log {
        fs::write(p, outcome.events_json() + "\n").with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Gen {
            family,
            rank,
            q,
            k,
            bound,
            seed,
            out,
        } => {
            let basis = match family {
                FamilyArg::Random => gen_random_lattice(rank, bound, seed)?,
                FamilyArg::Qary => gen_qary_lattice(rank, k.unwrap_or(rank / 2), q, seed)?,
            };
            write_output(Some(&out), &write_basis(&basis)?)?;
        }
        Command::Reduce {
            algo,
            beta,
            delta,
            input,
            oracle,
            layers,
            iters,
            seed,
            max_tours,
            out,
            log,
        } => {
            let text = fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            let basis = read_basis(&text)?;
            let reduced = match (algo, oracle) {
                (Algo::Lll, _) => lll_reduce(&basis, delta)?,
                (Algo::Bkz, _) | (Algo::Vqkz, OracleArg::Exact) => {
                    let o = vqkz_reduce(&basis, beta, delta, ExactOracle, max_tours)?;
                    report_outcome(&o, log.as_deref())?;
                    o.basis
                }
                (Algo::Vqkz, OracleArg::Quantum) => {
                    let cfg = OracleConfig {
                        layers,
                        iterations: iters,
                        seed,
                        ..OracleConfig::default()
                    };
                    let o = vqkz_reduce(&basis, beta, delta, QuantumOracle::new(cfg), max_tours)?;
                    report_outcome(&o, log.as_deref())?;
                    o.basis
                }
            };
            write_output(out.as_deref(), &write_basis(&reduced)?)?;
        }
        Command::OracleBench {
            beta,
            instances,
            seed,
            layers,
            iters,
            bound,
            out,
        } => {
            let cfg = OracleConfig {
                layers,
                iterations: iters,
                ..OracleConfig::default()
            };
            let report = oracle_bench(beta, instances, seed, bound, &cfg)?;
            eprintln!(
                "hit rate {:.3}, excited-overlap rate {:.3} over {} instances",
                report.hit_rate, report.overlap_rate, report.instances
            );
            write_output(out.as_deref(), &(serde_json::to_string_pretty(&report)? + "\n"))?;
        }
        Command::QubitCurve {
            budget,
            delta,
            max_rank,
            out,
        } => {
            if max_rank < 2 {
                bail!("--max-rank must be at least 2");
            }
            write_output(Some(&out), &curve_data(budget, delta, max_rank))?;
        }
        Command::Experiment { spec } => {
            let text = fs::read_to_string(&spec).with_context(|| format!("reading {}", spec.display()))?;
            let spec: ExperimentSpec = serde_json::from_str(&text).context("parsing experiment spec")?;
            let report = run_experiment(&spec)?;
            for f in &report.failures {
                eprintln!("warning: rank {} instance {} failed: {}", f.rank, f.instance, f.error);
            }
            write_output(spec.output.as_deref(), &report.to_csv()?)?;
        }
    }
    Ok(())
}
