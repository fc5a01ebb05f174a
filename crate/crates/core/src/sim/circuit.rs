use std::fmt;

use num_complex::Complex64;

use super::{SimError, StateVector};

/// Gates understood by the simulator. Rotations read their angle from a
/// parameter slot: `Rx(θ) = e^{-iθX/2}`, `Ry(θ) = e^{-iθY/2}`,
/// `Rz(θ) = diag(e^{-iθ/2}, e^{iθ/2})`, and `Crz` applies `Rz` to the target
/// when the control is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    H(usize),
    X(usize),
    Cx { control: usize, target: usize },
    Rx { qubit: usize, slot: usize },
    Ry { qubit: usize, slot: usize },
    Rz { qubit: usize, slot: usize },
    Crz { control: usize, target: usize, slot: usize },
}

impl Gate {
    pub fn slot(&self) -> Option<usize> {
        match *self {
            Gate::Rx { slot, .. } | Gate::Ry { slot, .. } | Gate::Rz { slot, .. } | Gate::Crz { slot, .. } => {
                Some(slot)
            }
            _ => None,
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::X(q) => vec![q],
            Gate::Rx { qubit, .. } | Gate::Ry { qubit, .. } | Gate::Rz { qubit, .. } => vec![qubit],
            Gate::Cx { control, target } | Gate::Crz { control, target, .. } => vec![control, target],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::X(_) => "X",
            Gate::Cx { .. } => "CX",
            Gate::Rx { .. } => "RX",
            Gate::Ry { .. } => "RY",
            Gate::Rz { .. } => "RZ",
            Gate::Crz { .. } => "CRZ",
        }
    }

    /// Applies the gate (or its inverse) with rotation angle `angle`.
    pub(crate) fn apply(&self, state: &mut StateVector, angle: f64, inverse: bool) {
        let angle = if inverse { -angle } else { angle };
        match *self {
            Gate::H(q) => {
                let m = state.mask(q);
                let r = std::f64::consts::FRAC_1_SQRT_2;
                for_pairs(state.amplitudes_mut(), m, |a, b| {
                    let (x, y) = (*a, *b);
                    *a = (x + y) * r;
                    *b = (x - y) * r;
                });
            }
            Gate::X(q) => {
                let m = state.mask(q);
                for_pairs(state.amplitudes_mut(), m, std::mem::swap);
            }
            Gate::Cx { control, target } => {
                let (c, t) = (state.mask(control), state.mask(target));
                let amps = state.amplitudes_mut();
                for i in 0..amps.len() {
                    if i & c != 0 && i & t == 0 {
                        amps.swap(i, i | t);
                    }
                }
            }
            Gate::Rx { qubit, .. } => {
                let m = state.mask(qubit);
                let (s, c) = (angle / 2.0).sin_cos();
                let mis = Complex64::new(0.0, -s);
                for_pairs(state.amplitudes_mut(), m, |a, b| {
                    let (x, y) = (*a, *b);
                    *a = x * c + y * mis;
                    *b = x * mis + y * c;
                });
            }
            Gate::Ry { qubit, .. } => {
                let m = state.mask(qubit);
                let (s, c) = (angle / 2.0).sin_cos();
                for_pairs(state.amplitudes_mut(), m, |a, b| {
                    let (x, y) = (*a, *b);
                    *a = x * c - y * s;
                    *b = x * s + y * c;
                });
            }
            Gate::Rz { qubit, .. } => {
                let m = state.mask(qubit);
                let lo = Complex64::from_polar(1.0, -angle / 2.0);
                let hi = lo.conj();
                for_pairs(state.amplitudes_mut(), m, |a, b| {
                    *a *= lo;
                    *b *= hi;
                });
            }
            Gate::Crz { control, target, .. } => {
                let (c, t) = (state.mask(control), state.mask(target));
                let lo = Complex64::from_polar(1.0, -angle / 2.0);
                let hi = lo.conj();
                for (i, a) in state.amplitudes_mut().iter_mut().enumerate() {
                    if i & c != 0 {
                        *a *= if i & t == 0 { lo } else { hi };
                    }
                }
            }
        }
    }

    /// Replaces `state` by `G|state⟩`, where the gate is `e^{-iθG}`.
    /// Fixed gates have no generator and leave the state untouched.
    pub(crate) fn apply_generator(&self, state: &mut StateVector) {
        match *self {
            Gate::Rx { qubit, .. } => {
                let m = state.mask(qubit);
                for_pairs(state.amplitudes_mut(), m, |a, b| {
                    std::mem::swap(a, b);
                    *a *= 0.5;
                    *b *= 0.5;
                });
            }
            Gate::Ry { qubit, .. } => {
                let m = state.mask(qubit);
                let half_i = Complex64::new(0.0, 0.5);
                for_pairs(state.amplitudes_mut(), m, |a, b| {
                    let (x, y) = (*a, *b);
                    *a = -half_i * y;
                    *b = half_i * x;
                });
            }
            Gate::Rz { qubit, .. } => {
                let m = state.mask(qubit);
                for_pairs(state.amplitudes_mut(), m, |a, b| {
                    *a *= 0.5;
                    *b *= -0.5;
                });
            }
            Gate::Crz { control, target, .. } => {
                let (c, t) = (state.mask(control), state.mask(target));
                for (i, a) in state.amplitudes_mut().iter_mut().enumerate() {
                    *a *= if i & c == 0 {
                        0.0
                    } else if i & t == 0 {
                        0.5
                    } else {
                        -0.5
                    };
                }
            }
            Gate::H(_) | Gate::X(_) | Gate::Cx { .. } => {}
        }
    }
}

/// Visits every amplitude pair `(i, i | mask)` with the mask bit clear in `i`.
fn for_pairs(amps: &mut [Complex64], mask: usize, mut f: impl FnMut(&mut Complex64, &mut Complex64)) {
    let block = mask << 1;
    for base in (0..amps.len()).step_by(block) {
        let (lo, hi) = amps[base..base + block].split_at_mut(mask);
        for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
            f(a, b);
        }
    }
}

/// An ordered gate list on `n` qubits with `num_params` parameter slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
    num_params: usize,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            gates: Vec::new(),
            num_params: 0,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn num_params(&self) -> usize {
        self.num_params
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Appends a gate. A parameter slot must either reuse an existing slot or
    /// be the next free one, which keeps slots contiguous.
    pub fn push(&mut self, gate: Gate) -> Result<(), SimError> {
        let qs = gate.qubits();
        for &q in &qs {
            if q >= self.n {
                return Err(SimError::QubitOutOfRange { qubit: q, n: self.n });
            }
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(SimError::RepeatedQubit(qs[0]));
        }
        if let Some(slot) = gate.slot() {
            if slot > self.num_params {
                return Err(SimError::SlotGap {
                    slot,
                    next: self.num_params,
                });
            }
            if slot == self.num_params {
                self.num_params += 1;
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Next unused parameter slot.
    pub fn next_slot(&self) -> usize {
        self.num_params
    }

    pub(crate) fn check_params(&self, theta: &[f64]) -> Result<(), SimError> {
        if theta.len() != self.num_params {
            return Err(SimError::ParamCountMismatch {
                expected: self.num_params,
                found: theta.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn angle(gate: &Gate, theta: &[f64]) -> f64 {
        gate.slot().map_or(0.0, |s| theta[s])
    }

    /// Runs the circuit on `|0…0⟩`.
    pub fn run(&self, theta: &[f64]) -> Result<StateVector, SimError> {
        self.check_params(theta)?;
        let mut state = StateVector::zero(self.n)?;
        for g in &self.gates {
            g.apply(&mut state, Self::angle(g, theta), false);
        }
        Ok(state)
    }
}

/// One gate per line: `GATE qubits slot`, qubits comma-separated and `-`
/// for gates without a parameter.
impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gates {
            let qs: Vec<String> = g.qubits().iter().map(usize::to_string).collect();
            match g.slot() {
                Some(s) => writeln!(f, "{} {} {}", g.name(), qs.join(","), s)?,
                None => writeln!(f, "{} {} -", g.name(), qs.join(","))?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::BitString;
    use proptest::prelude::*;

    #[test]
    fn empty_circuit_is_zero_state() {
        let s = Circuit::new(3).run(&[]).unwrap();
        assert_eq!(s.probabilities()[0], 1.0);
    }

    #[test]
    fn hadamard_and_x() {
        let mut c = Circuit::new(1);
        c.push(Gate::H(0)).unwrap();
        let s = c.run(&[]).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        for a in s.amplitudes() {
            assert!((a.re - r).abs() < 1e-15 && a.im == 0.0);
        }
        let mut c = Circuit::new(2);
        c.push(Gate::X(0)).unwrap();
        let s = c.run(&[]).unwrap();
        assert_eq!(s.overlap_with_basis_state(&"10".parse::<BitString>().unwrap()).unwrap(), 1.0);
    }

    #[test]
    fn cx_and_crz_act_on_control_one() {
        let mut c = Circuit::new(2);
        c.push(Gate::X(0)).unwrap();
        c.push(Gate::Cx { control: 0, target: 1 }).unwrap();
        let s = c.run(&[]).unwrap();
        assert_eq!(s.overlap_with_basis_state(&"11".parse::<BitString>().unwrap()).unwrap(), 1.0);

        let mut c = Circuit::new(2);
        c.push(Gate::H(1)).unwrap();
        c.push(Gate::Crz { control: 0, target: 1, slot: 0 }).unwrap();
        let s = c.run(&[1.3]).unwrap();
        // control is 0: CRz acts as identity
        assert!(s.amplitudes().iter().all(|a| a.im.abs() < 1e-15));
    }

    #[test]
    fn rotations_match_closed_forms() {
        let theta = 0.7f64;
        let mut c = Circuit::new(1);
        c.push(Gate::Rx { qubit: 0, slot: 0 }).unwrap();
        let s = c.run(&[theta]).unwrap();
        assert!((s.amplitudes()[0].re - (theta / 2.0).cos()).abs() < 1e-15);
        assert!((s.amplitudes()[1].im + (theta / 2.0).sin()).abs() < 1e-15);

        let mut c = Circuit::new(1);
        c.push(Gate::Ry { qubit: 0, slot: 0 }).unwrap();
        let s = c.run(&[theta]).unwrap();
        assert!((s.amplitudes()[1].re - (theta / 2.0).sin()).abs() < 1e-15);

        let mut c = Circuit::new(1);
        c.push(Gate::H(0)).unwrap();
        c.push(Gate::Rz { qubit: 0, slot: 0 }).unwrap();
        let s = c.run(&[theta]).unwrap();
        let a0 = s.amplitudes()[0];
        let a1 = s.amplitudes()[1];
        assert!(((a1 / a0).arg() - theta).abs() < 1e-12);
    }

    #[test]
    fn validation() {
        let mut c = Circuit::new(2);
        assert!(matches!(c.push(Gate::H(2)), Err(SimError::QubitOutOfRange { .. })));
        assert!(matches!(
            c.push(Gate::Rx { qubit: 0, slot: 1 }),
            Err(SimError::SlotGap { slot: 1, next: 0 })
        ));
        assert!(c.push(Gate::Cx { control: 1, target: 1 }).is_err());
        c.push(Gate::Rx { qubit: 0, slot: 0 }).unwrap();
        c.push(Gate::Rz { qubit: 1, slot: 0 }).unwrap();
        assert_eq!(c.num_params(), 1);
        assert!(matches!(c.run(&[]), Err(SimError::ParamCountMismatch { expected: 1, found: 0 })));
    }

    #[test]
    fn dump_format() {
        let mut c = Circuit::new(2);
        c.push(Gate::H(0)).unwrap();
        c.push(Gate::Rx { qubit: 1, slot: 0 }).unwrap();
        c.push(Gate::Crz { control: 0, target: 1, slot: 1 }).unwrap();
        assert_eq!(c.to_string(), "H 0 -\nRX 1 0\nCRZ 0,1 1\n");
    }

    #[test]
    fn inverse_undoes_gate() {
        let mut c = Circuit::new(3);
        c.push(Gate::H(0)).unwrap();
        c.push(Gate::Ry { qubit: 1, slot: 0 }).unwrap();
        c.push(Gate::Cx { control: 0, target: 2 }).unwrap();
        let mut s = c.run(&[0.4]).unwrap();
        let before = s.clone();
        let gates = [
            Gate::Rx { qubit: 2, slot: 0 },
            Gate::Crz { control: 1, target: 0, slot: 0 },
            Gate::H(1),
            Gate::Cx { control: 2, target: 1 },
        ];
        for g in &gates {
            g.apply(&mut s, 0.9, false);
        }
        for g in gates.iter().rev() {
            g.apply(&mut s, 0.9, true);
        }
        for (a, b) in s.amplitudes().iter().zip(before.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    fn random_circuit(n: usize, picks: &[(u8, usize, usize)]) -> Circuit {
        let mut c = Circuit::new(n);
        for &(kind, a, b) in picks {
            let (a, b) = (a % n, b % n);
            let slot = c.next_slot();
            let g = match kind % 7 {
                0 => Gate::H(a),
                1 => Gate::X(a),
                2 => Gate::Rx { qubit: a, slot },
                3 => Gate::Ry { qubit: a, slot },
                4 => Gate::Rz { qubit: a, slot },
                5 if a != b => Gate::Crz { control: a, target: b, slot },
                6 if a != b => Gate::Cx { control: a, target: b },
                _ => Gate::H(b),
            };
            c.push(g).unwrap();
        }
        c
    }

    proptest! {
        #[test]
        fn gates_preserve_norm(
            picks in prop::collection::vec((any::<u8>(), 0usize..8, 0usize..8), 1..40),
            seed in -3.0f64..3.0,
        ) {
            let c = random_circuit(4, &picks);
            let theta: Vec<f64> = (0..c.num_params()).map(|i| seed * (i as f64 + 1.0)).collect();
            let mut s = StateVector::zero(4).unwrap();
            for g in c.gates() {
                g.apply(&mut s, Circuit::angle(g, &theta), false);
                prop_assert!((s.norm_sq() - 1.0).abs() < 1e-12);
            }
        }

        #[test]
        fn rz_layers_keep_probabilities(
            qubits in prop::collection::vec(0usize..4, 1..12),
            angles in prop::collection::vec(-6.0f64..6.0, 12),
        ) {
            let mut prep = Circuit::new(4);
            for (q, slot) in [(0, 0), (1, 1), (2, 2), (3, 3)] {
                prep.push(Gate::Ry { qubit: q, slot }).unwrap();
            }
            let base = prep.run(&angles[..4]).unwrap();
            let mut s = base.clone();
            for (i, &q) in qubits.iter().enumerate() {
                let g = if i % 2 == 0 {
                    Gate::Rz { qubit: q, slot: 0 }
                } else {
                    Gate::Crz { control: q, target: (q + 1) % 4, slot: 0 }
                };
                g.apply(&mut s, angles[i], false);
            }
            for (p, r) in s.probabilities().iter().zip(base.probabilities()) {
                prop_assert!((p - r).abs() < 1e-12);
            }
        }
    }
}
