use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{experimental_qubits, gen_qary_lattice, gen_random_lattice, relative_error, ExperimentError, Method};
use crate::lattice::Basis;
use crate::oracle::{LayoutRule, OracleConfig, QuantumOracle};
use crate::reduction::{bkz_classical, vqkz_reduce, ExactOracle, DEFAULT_MAX_TOURS};
use crate::seed::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Random,
    Qary,
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::Random => "random",
            Family::Qary => "qary",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleKind {
    #[default]
    Quantum,
    Exact,
}

fn default_bound() -> i64 {
    50
}
fn default_modulus() -> i64 {
    97
}
fn default_q() -> usize {
    2
}
fn default_delta() -> f64 {
    0.75
}
fn default_tours() -> usize {
    DEFAULT_MAX_TOURS
}

/// A grid of instances, JSON-loadable. Ranks run `rank_min..=rank_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub family: Family,
    pub rank_min: usize,
    pub rank_max: usize,
    pub instances: usize,
    pub beta: usize,
    #[serde(default = "default_delta")]
    pub delta: f64,
    /// Qubits per block coordinate.
    #[serde(default = "default_q")]
    pub q: usize,
    #[serde(default)]
    pub oracle: OracleKind,
    #[serde(default)]
    pub oracle_config: OracleConfig,
    pub seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default = "default_bound")]
    pub entry_bound: i64,
    #[serde(default = "default_modulus")]
    pub modulus: i64,
    /// q-ary `k`; `⌊d/2⌋` when absent.
    #[serde(default)]
    pub qary_k: Option<usize>,
    #[serde(default = "default_tours")]
    pub max_tours: usize,
    /// Write measured wall time; otherwise `wall_ms` is 0 and output is byte-stable.
    #[serde(default)]
    pub record_timing: bool,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: String| Err(ExperimentError::InvalidSpec(m));
        if self.beta < 2 {
            return bad(format!("beta must be at least 2, got {}", self.beta));
        }
        if self.rank_min < self.beta + 1 || self.rank_max < self.rank_min {
            return bad(format!(
                "ranks {}..={} must be nonempty and start above beta = {}",
                self.rank_min, self.rank_max, self.beta
            ));
        }
        if self.instances == 0 {
            return bad("instances must be at least 1".into());
        }
        if self.q == 0 {
            return bad("q must be at least 1".into());
        }
        self.oracle_config.validate().map_err(|e| ExperimentError::InvalidSpec(e.to_string()))
    }

    fn method(&self) -> &'static str {
        match self.oracle {
            OracleKind::Quantum => "vqkz",
            OracleKind::Exact => "vqkz_exact",
        }
    }

    pub fn instance_seed(&self, rank: usize, index: usize) -> u64 {
        derive_seed(self.seed, &[rank as u64, index as u64])
    }

    pub fn generate(&self, rank: usize, seed: u64) -> Result<Basis, ExperimentError> {
        match self.family {
            Family::Random => gen_random_lattice(rank, self.entry_bound, seed),
            Family::Qary => gen_qary_lattice(rank, self.qary_k.unwrap_or(rank / 2), self.modulus, seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub rank: usize,
    pub instance: usize,
    pub seed: u64,
    pub lambda_baseline: f64,
    pub lambda_algo: f64,
    pub epsilon: f64,
    pub qubits: usize,
    pub wall_ms: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowFailure {
    pub rank: usize,
    pub instance: usize,
    pub seed: u64,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub spec: ExperimentSpec,
    pub rows: Vec<ExperimentRow>,
    pub failures: Vec<RowFailure>,
}

impl ExperimentReport {
    /// Mean ε per rank over the rows that succeeded.
    pub fn mean_epsilon(&self, rank: usize) -> Option<f64> {
        let eps: Vec<f64> = self.rows.iter().filter(|r| r.rank == rank).map(|r| r.epsilon).collect();
        (!eps.is_empty()).then(|| eps.iter().sum::<f64>() / eps.len() as f64)
    }

    pub fn to_csv(&self) -> Result<String, ExperimentError> {
        let s = &self.spec;
        let mut out = String::new();
        out.push_str(&format!(
            "# family={} ranks={}..={} instances={} beta={} delta={} q={} oracle={} seed={} entry_bound={} modulus={} qary_k={} max_tours={}\n",
            s.family.name(),
            s.rank_min,
            s.rank_max,
            s.instances,
            s.beta,
            s.delta,
            s.q,
            s.method(),
            s.seed,
            s.entry_bound,
            s.modulus,
            s.qary_k.map_or("d/2".to_string(), |k| k.to_string()),
            s.max_tours,
        ));
        out.push_str(&format!(
            "# oracle_config={}\n",
            serde_json::to_string(&s.oracle_config).expect("plain config")
        ));
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| ExperimentError::Csv(e.to_string());
        w.write_record([
            "rank",
            "instance",
            "seed",
            "family",
            "method",
            "lambda_baseline",
            "lambda_algo",
            "epsilon",
            "qubits",
            "wall_ms",
        ])
        .map_err(csv_err)?;
        for rank in s.rank_min..=s.rank_max {
            let rows: Vec<&ExperimentRow> = self.rows.iter().filter(|r| r.rank == rank).collect();
            for r in &rows {
                w.write_record([
                    r.rank.to_string(),
                    r.instance.to_string(),
                    r.seed.to_string(),
                    s.family.name().to_string(),
                    s.method().to_string(),
                    r.lambda_baseline.to_string(),
                    r.lambda_algo.to_string(),
                    r.epsilon.to_string(),
                    r.qubits.to_string(),
                    r.wall_ms.to_string(),
                ])
                .map_err(csv_err)?;
            }
            if rows.is_empty() {
                continue;
            }
            let n = rows.len() as f64;
            let mean = |f: fn(&ExperimentRow) -> f64| rows.iter().map(|r| f(r)).sum::<f64>() / n;
            w.write_record([
                rank.to_string(),
                "mean".to_string(),
                String::new(),
                s.family.name().to_string(),
                s.method().to_string(),
                mean(|r| r.lambda_baseline).to_string(),
                mean(|r| r.lambda_algo).to_string(),
                mean(|r| r.epsilon).to_string(),
                rows[0].qubits.to_string(),
                rows.iter().map(|r| r.wall_ms).sum::<u128>().to_string(),
            ])
            .map_err(csv_err)?;
        }
        let body = w.into_inner().map_err(|e| ExperimentError::Csv(e.to_string()))?;
        out.push_str(&String::from_utf8(body).expect("csv output is utf-8"));
        for f in &self.failures {
            out.push_str(&format!("# failed rank={} instance={} seed={}: {}\n", f.rank, f.instance, f.seed, f.error));
        }
        Ok(out)
    }
}

fn run_instance(spec: &ExperimentSpec, rank: usize, index: usize) -> Result<ExperimentRow, ExperimentError> {
    let seed = spec.instance_seed(rank, index);
    let basis = spec.generate(rank, seed)?;
    let started = Instant::now();
    let baseline = bkz_classical(&basis, spec.beta, spec.delta)?;
    let algo = match spec.oracle {
        OracleKind::Exact => vqkz_reduce(&basis, spec.beta, spec.delta, ExactOracle, spec.max_tours)?,
        OracleKind::Quantum => {
            let cfg = OracleConfig {
                seed: derive_seed(seed, &[1]),
                layout: LayoutRule::Uniform { q: spec.q },
                ..spec.oracle_config.clone()
            };
            vqkz_reduce(&basis, spec.beta, spec.delta, QuantumOracle::new(cfg), spec.max_tours)?
        }
    };
    let wall_ms = if spec.record_timing { started.elapsed().as_millis() } else { 0 };
    let lambda_baseline = baseline.basis.norms_sq()[0].sqrt();
    let lambda_algo = algo.basis.norms_sq()[0].sqrt();
    Ok(ExperimentRow {
        rank,
        instance: index,
        seed,
        lambda_baseline,
        lambda_algo,
        epsilon: relative_error(lambda_baseline, lambda_algo)?,
        qubits: experimental_qubits(Method::Vqkz, rank, spec.beta, spec.q),
        wall_ms,
    })
}

/// Runs every (rank, instance) pair. Instances run in parallel; each has its
/// own seed, so the report does not depend on scheduling. A failing instance
/// is recorded and skipped.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport, ExperimentError> {
    spec.validate()?;
    let jobs: Vec<(usize, usize)> = (spec.rank_min..=spec.rank_max)
        .flat_map(|r| (0..spec.instances).map(move |i| (r, i)))
        .collect();
    let results: Vec<_> = jobs
        .par_iter()
        .map(|&(r, i)| (r, i, run_instance(spec, r, i)))
        .collect();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (rank, instance, res) in results {
        match res {
            Ok(row) => rows.push(row),
            Err(e) => failures.push(RowFailure {
                rank,
                instance,
                seed: spec.instance_seed(rank, instance),
                error: e.to_string(),
            }),
        }
    }
    Ok(ExperimentReport {
        spec: spec.clone(),
        rows,
        failures,
    })
}
