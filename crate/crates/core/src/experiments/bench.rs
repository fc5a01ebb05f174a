use rayon::prelude::*;
use serde::Serialize;

use super::{gen_random_lattice, ExperimentError};
use crate::lattice::lll_reduce;
use crate::oracle::{solve_svp_block, OracleConfig, OracleError};
use crate::reduction::enumerate_shortest;
use crate::seed::derive_seed;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleBenchRow {
    pub instance: usize,
    pub seed: u64,
    pub lambda_sq: f64,
    pub found_sq: Option<f64>,
    pub hit: bool,
    pub excited_overlap: f64,
    pub attempts: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleBenchReport {
    pub beta: usize,
    pub instances: usize,
    pub seed: u64,
    pub hit_rate: f64,
    /// Fraction of instances with more than half the weight on excited levels 1..=3.
    pub overlap_rate: f64,
    pub rows: Vec<OracleBenchRow>,
}

/// Runs the oracle on `instances` LLL-reduced random bases of rank `beta`
/// (entries in `[-entry_bound, entry_bound]`) and compares with enumeration.
pub fn oracle_bench(
    beta: usize,
    instances: usize,
    seed: u64,
    entry_bound: i64,
    config: &OracleConfig,
) -> Result<OracleBenchReport, ExperimentError> {
    if instances == 0 {
        return Err(ExperimentError::InvalidSpec("instances must be at least 1".into()));
    }
    let rows: Vec<OracleBenchRow> = (0..instances)
        .into_par_iter()
        .map(|i| -> Result<OracleBenchRow, ExperimentError> {
            let s = derive_seed(seed, &[i as u64]);
            let block = lll_reduce(&gen_random_lattice(beta, entry_bound, s)?, 0.75)?;
            let (_, lambda_sq) = enumerate_shortest(&block, None)?;
            let cfg = OracleConfig {
                seed: derive_seed(s, &[1]),
                ..config.clone()
            };
            let run: Result<_, OracleError> = solve_svp_block(&block, &cfg);
            Ok(match run {
                Ok(r) => OracleBenchRow {
                    instance: i,
                    seed: s,
                    lambda_sq,
                    found_sq: Some(r.norm_sq),
                    hit: (r.norm_sq - lambda_sq).abs() <= 1e-9 * lambda_sq,
                    excited_overlap: r.excited_overlap(),
                    attempts: r.attempts,
                    error: None,
                },
                Err(e) => OracleBenchRow {
                    instance: i,
                    seed: s,
                    lambda_sq,
                    found_sq: None,
                    hit: false,
                    excited_overlap: 0.0,
                    attempts: 0,
                    error: Some(e.to_string()),
                },
            })
        })
        .collect::<Result<_, _>>()?;
    let n = rows.len() as f64;
    Ok(OracleBenchReport {
        beta,
        instances,
        seed,
        hit_rate: rows.iter().filter(|r| r.hit).count() as f64 / n,
        overlap_rate: rows.iter().filter(|r| r.excited_overlap > 0.5).count() as f64 / n,
        rows,
    })
}
