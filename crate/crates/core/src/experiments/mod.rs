//! Instance generators, comparison metrics, qubit-requirement curves and the
//! CSV experiment runner.

mod bench;
mod generators;
mod metrics;
mod runner;

pub use bench::{oracle_bench, OracleBenchReport, OracleBenchRow};
pub use generators::{gen_qary_lattice, gen_random_lattice};
pub use metrics::{
    curve_data, experimental_qubits, gaussian_heuristic, max_beta, qia_max_rank, qia_qubits, qubit_curve,
    relative_error, vqkz_feasibility_gap, vqkz_max_rank, vqkz_min_beta, CurvePoint, HermiteBase, Method,
};
pub use runner::{
    run_experiment, ExperimentReport, ExperimentRow, ExperimentSpec, Family, OracleKind, RowFailure,
};

use thiserror::Error;

use crate::lattice::LatticeError;
use crate::reduction::ReductionError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExperimentError {
    #[error("invalid experiment: {0}")]
    InvalidSpec(String),
    #[error("q-ary lattice needs 1 <= k < d and q >= 2, got d={d}, k={k}, q={q}")]
    InvalidShape { d: usize, k: usize, q: i64 },
    #[error("relative error needs a positive baseline norm")]
    ZeroBaseline,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error("csv output: {0}")]
    Csv(String),
}
