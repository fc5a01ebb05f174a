//! The variational SVP oracle: find the first excited state of the block
//! Hamiltonian with a ground-state overlap penalty, then decode it with a
//! small classical enumeration over the least certain qubits.

mod levels;
mod optimize;
mod postprocess;

pub use levels::{excited_state_overlaps, LevelOverlap};
pub use optimize::{loss, optimize, penalized_diagonal, Optimized};
pub use postprocess::{ambiguous_qubits, default_width, post_process, Candidate, PostProcessed};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::encoding::{coordinate_bounds, gamma_estimate, DiagonalHamiltonian, EncodingError, QubitLayout};
use crate::lattice::{gram_schmidt, Basis, LatticeError};
use crate::reduction::{sign_normalize, SvpOracle};
use crate::seed::derive_seed;
use crate::sim::{
    build_he_ansatz, build_svp_ansatz, max_qubits, Circuit, Coupling, GradientMethod, Marginals, SimError,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error(transparent)]
    Encoding(#[from] EncodingError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("invalid oracle configuration: {0}")]
    InvalidConfig(String),
    #[error("the oracle needs a block of rank at least 2, got {0}")]
    BlockTooSmall(usize),
    #[error("every post-processing candidate decodes to the zero vector")]
    AllCandidatesZero,
    #[error("penalty {gamma} is below the first excitation energy {gap}")]
    PenaltyTooSmall { gamma: f64, gap: f64 },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnsatzKind {
    #[default]
    Svp,
    He,
}

/// How many qubits each block coordinate gets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LayoutRule {
    Uniform { q: usize },
    /// From the block's Gram–Schmidt coordinate bounds.
    Adaptive,
}

impl Default for LayoutRule {
    fn default() -> Self {
        LayoutRule::Uniform { q: 2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleConfig {
    pub layers: usize,
    pub iterations: usize,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub seed: u64,
    /// Fixed overlap penalty; estimated from a random basis state when absent.
    pub gamma: Option<f64>,
    pub ansatz: AnsatzKind,
    pub coupling: Coupling,
    /// 0 reads marginals off the exact state.
    pub shots: usize,
    /// Post-processing width; `⌈log₂ n⌉` when absent.
    pub width: Option<usize>,
    pub layout: LayoutRule,
    pub gradient: GradientMethod,
    /// Extra attempts with fresh seeds after a failed or stalled run.
    pub restarts: usize,
    /// Early stop after this many iterations without progress (0 = never).
    pub patience: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            layers: 6,
            iterations: 1000,
            learning_rate: 0.05,
            beta1: 0.9,
            beta2: 0.999,
            seed: 0,
            gamma: None,
            ansatz: AnsatzKind::Svp,
            coupling: Coupling::Hamiltonian,
            shots: 0,
            width: None,
            layout: LayoutRule::default(),
            gradient: GradientMethod::Adjoint,
            restarts: 1,
            patience: 200,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<(), OracleError> {
        let bad = |m: &str| Err(OracleError::InvalidConfig(m.to_string()));
        if self.layers == 0 {
            return bad("layers must be at least 1");
        }
        if self.iterations == 0 {
            return bad("iterations must be at least 1");
        }
        if !(self.learning_rate > 0.0) {
            return bad("learning rate must be positive");
        }
        if !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) {
            return bad("Adam decay rates must lie in [0, 1)");
        }
        if self.gamma.is_some_and(|g| !(g >= 0.0)) {
            return bad("gamma must be nonnegative");
        }
        if let LayoutRule::Uniform { q: 0 } = self.layout {
            return bad("uniform layout needs q >= 1");
        }
        Ok(())
    }
}

/// Everything one oracle call produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub seed: u64,
    pub gamma: f64,
    pub layers: usize,
    pub iterations: usize,
    /// Coefficients over the block basis, first nonzero entry positive.
    pub v: Vec<i64>,
    pub norm_sq: f64,
    pub final_loss: f64,
    pub loss_trace: Vec<f64>,
    pub marginals: Marginals,
    pub candidates: Vec<Candidate>,
    pub chosen: usize,
    /// Ground level plus the first three excited levels of the final state.
    pub levels: Vec<LevelOverlap>,
    pub attempts: usize,
}

impl OracleResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain oracle record")
    }

    /// Combined weight on excited levels 1..=3.
    pub fn excited_overlap(&self) -> f64 {
        self.levels.iter().filter(|l| l.level >= 1).map(|l| l.overlap).sum()
    }
}

fn layout_for(block: &Basis, rule: LayoutRule) -> Result<QubitLayout, OracleError> {
    let beta = block.rank();
    Ok(match rule {
        LayoutRule::Uniform { q } => QubitLayout::uniform(beta, q)?,
        LayoutRule::Adaptive => {
            let gso = gram_schmidt(block)?;
            QubitLayout::adaptive(&coordinate_bounds(&gso, 0, beta)?)?
        }
    })
}

pub fn build_ansatz(h: &DiagonalHamiltonian, config: &OracleConfig) -> Result<Circuit, OracleError> {
    Ok(match config.ansatz {
        AnsatzKind::Svp => build_svp_ansatz(h, config.layers, config.coupling)?,
        AnsatzKind::He => build_he_ansatz(h.num_qubits(), config.layers)?,
    })
}

struct Attempt {
    result: Result<OracleResult, OracleError>,
    retry: bool,
}

fn attempt(
    h: &DiagonalHamiltonian,
    diag: &[f64],
    first_excited: f64,
    circuit: &Circuit,
    config: &OracleConfig,
    seed: u64,
) -> Result<Attempt, OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gamma = match config.gamma {
        Some(g) => g,
        None => gamma_estimate(h, &mut rng),
    };
    if gamma < first_excited {
        return Err(OracleError::PenaltyTooSmall {
            gamma,
            gap: first_excited,
        });
    }
    let mut penalized = diag.to_vec();
    penalized[h.ground_bits().to_index()] += gamma;
    let theta0: Vec<f64> = (0..circuit.num_params()).map(|_| rng.random_range(-0.1..0.1)).collect();
    let opt = optimize(circuit, &penalized, theta0, config)?;
    let state = circuit.run(&opt.theta)?;
    let marginals = if config.shots == 0 {
        state.marginal_probabilities()
    } else {
        Marginals::from_counts(&state.sample(config.shots, &mut rng), h.num_qubits())
    };
    let width = config.width.unwrap_or_else(|| default_width(h.num_qubits()));
    let stalled = opt.stagnated && opt.best_loss >= opt.trace[0] * (1.0 - 1e-3);
    let pp = match post_process(&marginals, h, width) {
        Ok(pp) => pp,
        Err(OracleError::AllCandidatesZero) => {
            return Ok(Attempt {
                result: Err(OracleError::AllCandidatesZero),
                retry: true,
            })
        }
        Err(e) => return Err(e),
    };
    let mut v = pp.best().x.clone();
    sign_normalize(&mut v);
    let result = OracleResult {
        seed,
        gamma,
        layers: config.layers,
        iterations: opt.trace.len(),
        norm_sq: pp.best().norm2,
        v,
        final_loss: opt.best_loss,
        loss_trace: opt.trace,
        marginals,
        chosen: pp.chosen,
        candidates: pp.candidates,
        levels: excited_state_overlaps(&state, h, 3),
        attempts: 1,
    };
    Ok(Attempt {
        result: Ok(result),
        retry: stalled,
    })
}

/// One oracle call on a projected block.
///
/// The first attempt uses `config.seed`; when it stalls or every candidate is
/// zero, up to `config.restarts` more attempts run with derived seeds and the
/// shortest result wins (lower loss on equal norms).
pub fn solve_svp_block(block: &Basis, config: &OracleConfig) -> Result<OracleResult, OracleError> {
    config.validate()?;
    let beta = block.rank();
    if beta < 2 {
        return Err(OracleError::BlockTooSmall(beta));
    }
    let layout = layout_for(block, config.layout)?;
    let n = layout.num_qubits();
    if n > max_qubits() {
        return Err(SimError::TooManyQubits { n, cap: max_qubits() }.into());
    }
    let h = DiagonalHamiltonian::from_block(block, layout)?;
    let diag = h.diagonal();
    let ground = h.ground_bits().to_index();
    let first_excited = diag
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != ground)
        .map(|(_, &e)| e)
        .fold(f64::INFINITY, f64::min);
    let circuit = build_ansatz(&h, config)?;

    let mut best: Option<OracleResult> = None;
    let mut last_err = OracleError::AllCandidatesZero;
    let mut used = 0;
    for a in 0..=config.restarts {
        used = a + 1;
        let seed = if a == 0 { config.seed } else { derive_seed(config.seed, &[a as u64]) };
        let Attempt { result, retry } = attempt(&h, &diag, first_excited, &circuit, config, seed)?;
        match result {
            Ok(r) => {
                let better = best.as_ref().is_none_or(|b| {
                    r.norm_sq < b.norm_sq || (r.norm_sq == b.norm_sq && r.final_loss < b.final_loss)
                });
                if better {
                    best = Some(r);
                }
            }
            Err(e) => last_err = e,
        }
        if !retry {
            break;
        }
    }
    let mut r = best.ok_or(last_err)?;
    r.attempts = used;
    Ok(r)
}

/// [`SvpOracle`] adapter that derives a fresh seed for every call.
#[derive(Debug, Clone)]
pub struct QuantumOracle {
    config: OracleConfig,
    calls: u64,
    runs: Vec<OracleResult>,
}

impl QuantumOracle {
    pub fn new(config: OracleConfig) -> Self {
        Self {
            config,
            calls: 0,
            runs: Vec::new(),
        }
    }

    pub fn calls(&self) -> u64 {
        self.calls
    }

    /// Results of every successful call, in order.
    pub fn runs(&self) -> &[OracleResult] {
        &self.runs
    }
}

impl SvpOracle for QuantumOracle {
    type Error = OracleError;

    fn solve(&mut self, block: &Basis) -> Result<Vec<i64>, OracleError> {
        let mut cfg = self.config.clone();
        cfg.seed = derive_seed(self.config.seed, &[self.calls]);
        self.calls += 1;
        let r = solve_svp_block(block, &cfg)?;
        let v = r.v.clone();
        self.runs.push(r);
        Ok(v)
    }
}
