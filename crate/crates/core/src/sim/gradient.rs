use std::f64::consts::{FRAC_PI_2, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Circuit, Gate, SimError, StateVector};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradientMethod {
    /// Reverse sweep over the circuit, one forward and one backward pass.
    #[default]
    Adjoint,
    /// Shift rules: two terms for single-qubit rotations, four for CRz.
    ParameterShift,
}

impl GradientMethod {
    pub fn evaluate(self, circuit: &Circuit, theta: &[f64], diag: &[f64]) -> Result<(f64, Vec<f64>), SimError> {
        match self {
            GradientMethod::Adjoint => expectation_and_gradient(circuit, theta, diag),
            GradientMethod::ParameterShift => Ok((
                expectation(circuit, theta, diag)?,
                parameter_shift_gradient(circuit, theta, diag)?,
            )),
        }
    }
}

/// `⟨ψ(θ)|D|ψ(θ)⟩` for a diagonal `D` given densely.
pub fn expectation(circuit: &Circuit, theta: &[f64], diag: &[f64]) -> Result<f64, SimError> {
    circuit.run(theta)?.expectation_values(diag)
}

/// Value and exact gradient by adjoint differentiation.
pub fn expectation_and_gradient(
    circuit: &Circuit,
    theta: &[f64],
    diag: &[f64],
) -> Result<(f64, Vec<f64>), SimError> {
    let mut psi = circuit.run(theta)?;
    let value = psi.expectation_values(diag)?;
    let mut lambda = psi.clone();
    for (a, d) in lambda.amplitudes_mut().iter_mut().zip(diag) {
        *a *= *d;
    }
    let mut grad = vec![0.0; circuit.num_params()];
    let mut scratch = psi.clone();
    for g in circuit.gates().iter().rev() {
        let angle = Circuit::angle(g, theta);
        if let Some(slot) = g.slot() {
            scratch.amplitudes_mut().copy_from_slice(psi.amplitudes());
            g.apply_generator(&mut scratch);
            let inner: Complex64 = lambda
                .amplitudes()
                .iter()
                .zip(scratch.amplitudes())
                .map(|(l, s)| l.conj() * s)
                .sum();
            grad[slot] += 2.0 * inner.im;
        }
        g.apply(&mut psi, angle, true);
        g.apply(&mut lambda, angle, true);
    }
    Ok((value, grad))
}

/// Runs the circuit with gate `shifted` rotated by an extra `offset`.
fn run_shifted(circuit: &Circuit, theta: &[f64], shifted: usize, offset: f64) -> Result<StateVector, SimError> {
    let mut state = StateVector::zero(circuit.num_qubits())?;
    for (i, g) in circuit.gates().iter().enumerate() {
        let mut angle = Circuit::angle(g, theta);
        if i == shifted {
            angle += offset;
        }
        g.apply(&mut state, angle, false);
    }
    Ok(state)
}

/// Gradient from shift rules, applied per gate and summed per slot.
///
/// CRz has generator eigenvalues `{0, ±½}`, so the two-term rule is not exact
/// for it and the four-term rule is used instead.
pub fn parameter_shift_gradient(circuit: &Circuit, theta: &[f64], diag: &[f64]) -> Result<Vec<f64>, SimError> {
    circuit.check_params(theta)?;
    let f = |i: usize, s: f64| -> Result<f64, SimError> {
        run_shifted(circuit, theta, i, s)?.expectation_values(diag)
    };
    let c_plus = (SQRT_2 + 1.0) / (4.0 * SQRT_2);
    let c_minus = (SQRT_2 - 1.0) / (4.0 * SQRT_2);
    let mut grad = vec![0.0; circuit.num_params()];
    for (i, g) in circuit.gates().iter().enumerate() {
        let Some(slot) = g.slot() else { continue };
        let d = match g {
            Gate::Crz { .. } => {
                c_plus * (f(i, FRAC_PI_2)? - f(i, -FRAC_PI_2)?)
                    - c_minus * (f(i, 3.0 * FRAC_PI_2)? - f(i, -3.0 * FRAC_PI_2)?)
            }
            _ => 0.5 * (f(i, FRAC_PI_2)? - f(i, -FRAC_PI_2)?),
        };
        grad[slot] += d;
    }
    Ok(grad)
}
