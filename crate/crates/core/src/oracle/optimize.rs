use serde::{Deserialize, Serialize};

use super::{OracleConfig, OracleError};
use crate::encoding::DiagonalHamiltonian;
use crate::sim::Circuit;

/// `diag(H) + γ·|gs⟩⟨gs|` as a dense diagonal, so its expectation is the loss.
pub fn penalized_diagonal(h: &DiagonalHamiltonian, gamma: f64) -> Vec<f64> {
    let mut d = h.diagonal();
    d[h.ground_bits().to_index()] += gamma;
    d
}

/// `⟨ψ(θ)|H|ψ(θ)⟩ + γ·|⟨ψ_gs|ψ(θ)⟩|²`.
pub fn loss(theta: &[f64], circuit: &Circuit, h: &DiagonalHamiltonian, gamma: f64) -> Result<f64, OracleError> {
    if gamma < 0.0 {
        return Err(OracleError::InvalidConfig(format!("penalty must be nonnegative, got {gamma}")));
    }
    let state = circuit.run(theta)?;
    let energy = state.expectation_diagonal(h)?;
    let overlap = state.overlap_with_basis_state(&h.ground_bits())?;
    Ok(energy + gamma * overlap)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Optimized {
    /// Parameters at the lowest loss seen.
    pub theta: Vec<f64>,
    pub best_loss: f64,
    pub best_iteration: usize,
    /// Loss at every iteration, before that iteration's step.
    pub trace: Vec<f64>,
    /// Stopped early because the loss stopped improving.
    pub stagnated: bool,
}

/// Adam on the expectation of `diag`, starting from `theta0`.
///
/// Stops after `config.iterations` steps, or once `config.patience`
/// consecutive iterations fail to improve the best loss by a relative 1e-6
/// (`patience = 0` disables that).
pub fn optimize(
    circuit: &Circuit,
    diag: &[f64],
    theta0: Vec<f64>,
    config: &OracleConfig,
) -> Result<Optimized, OracleError> {
    let p = theta0.len();
    let mut theta = theta0;
    let (mut m, mut v) = (vec![0.0; p], vec![0.0; p]);
    let (b1, b2) = (config.beta1, config.beta2);
    let mut best = (f64::INFINITY, theta.clone(), 0usize);
    let mut last_gain = 0usize;
    let mut trace = Vec::with_capacity(config.iterations);
    let mut stagnated = false;

    for t in 0..config.iterations {
        let (f, g) = config.gradient.evaluate(circuit, &theta, diag)?;
        trace.push(f);
        if f < best.0 {
            if best.0.is_infinite() || f < best.0 - 1e-6 * best.0.abs() {
                last_gain = t;
            }
            best = (f, theta.clone(), t);
        }
        if config.patience > 0 && t - last_gain >= config.patience {
            stagnated = true;
            break;
        }
        let step = (t + 1) as i32;
        let (c1, c2) = (1.0 - b1.powi(step), 1.0 - b2.powi(step));
        for i in 0..p {
            m[i] = b1 * m[i] + (1.0 - b1) * g[i];
            v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
            theta[i] -= config.learning_rate * (m[i] / c1) / ((v[i] / c2).sqrt() + 1e-8);
        }
    }
    let (best_loss, theta, best_iteration) = best;
    Ok(Optimized {
        theta,
        best_loss,
        best_iteration,
        trace,
        stagnated,
    })
}
