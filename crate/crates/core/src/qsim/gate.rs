use std::fmt;

use super::linalg::{c, mat2, unitarity_deviation, CMatrix, NORM_TOL, ONE, ZERO};
use super::pauli::Pauli;
use super::state::{check_qubit_count, check_targets, DensityMatrix, LocalOp, Statevector};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    Hadamard,
    PauliX,
    PauliY,
    PauliZ,
    Cnot,
    SingleQubitUnitary(CMatrix),
}

/// A gate bound to its qubits. For `Cnot`, targets are `[control, target]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    kind: GateKind,
    targets: Vec<usize>,
}

impl Gate {
    pub fn h(q: usize) -> Self {
        Self { kind: GateKind::Hadamard, targets: vec![q] }
    }

    pub fn x(q: usize) -> Self {
        Self { kind: GateKind::PauliX, targets: vec![q] }
    }

    pub fn y(q: usize) -> Self {
        Self { kind: GateKind::PauliY, targets: vec![q] }
    }

    pub fn z(q: usize) -> Self {
        Self { kind: GateKind::PauliZ, targets: vec![q] }
    }

    pub fn pauli(letter: Pauli, q: usize) -> Option<Self> {
        match letter {
            Pauli::I => None,
            Pauli::X => Some(Self::x(q)),
            Pauli::Y => Some(Self::y(q)),
            Pauli::Z => Some(Self::z(q)),
        }
    }

    pub fn cnot(control: usize, target: usize) -> Result<Self> {
        if control == target {
            return Err(Error::RepeatedTarget);
        }
        Ok(Self { kind: GateKind::Cnot, targets: vec![control, target] })
    }

    pub fn unitary(matrix: CMatrix, q: usize) -> Result<Self> {
        if matrix.nrows() != 2 || matrix.ncols() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: matrix.nrows() });
        }
        let dev = unitarity_deviation(&matrix);
        if dev > NORM_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(Self { kind: GateKind::SingleQubitUnitary(matrix), targets: vec![q] })
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn arity(&self) -> usize {
        self.targets.len()
    }

    pub fn matrix(&self) -> CMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match &self.kind {
            GateKind::Hadamard => mat2(c(h), c(h), c(h), c(-h)),
            GateKind::PauliX => Pauli::X.matrix(),
            GateKind::PauliY => Pauli::Y.matrix(),
            GateKind::PauliZ => Pauli::Z.matrix(),
            GateKind::Cnot => CMatrix::from_row_slice(
                4,
                4,
                &[
                    ONE, ZERO, ZERO, ZERO, //
                    ZERO, ONE, ZERO, ZERO, //
                    ZERO, ZERO, ZERO, ONE, //
                    ZERO, ZERO, ONE, ZERO,
                ],
            ),
            GateKind::SingleQubitUnitary(m) => m.clone(),
        }
    }

    pub fn as_local_op(&self) -> LocalOp {
        LocalOp::new_unchecked(self.matrix(), self.targets.clone())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            GateKind::Hadamard => "H",
            GateKind::PauliX => "X",
            GateKind::PauliY => "Y",
            GateKind::PauliZ => "Z",
            GateKind::Cnot => "CNOT",
            GateKind::SingleQubitUnitary(_) => "U",
        };
        let qs: Vec<String> = self.targets.iter().map(|q| q.to_string()).collect();
        write!(f, "{name}({})", qs.join(","))
    }
}

/// Ordered gate list on a fixed register.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        Ok(Self { num_qubits, gates: Vec::new() })
    }

    pub fn from_gates(num_qubits: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut circuit = Self::new(num_qubits)?;
        for g in gates {
            circuit.push(g)?;
        }
        Ok(circuit)
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        check_targets(&gate.targets, self.num_qubits)?;
        self.gates.push(gate);
        Ok(self)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
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

    /// Number of gates of each kind, as (hadamards, cnots, others).
    pub fn census(&self) -> (usize, usize, usize) {
        self.gates.iter().fold((0, 0, 0), |(h, cx, o), g| match g.kind {
            GateKind::Hadamard => (h + 1, cx, o),
            GateKind::Cnot => (h, cx + 1, o),
            _ => (h, cx, o + 1),
        })
    }

    pub fn apply_to_density(&self, dm: &DensityMatrix) -> Result<DensityMatrix> {
        if dm.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch { expected: self.num_qubits, found: dm.num_qubits() });
        }
        self.gates.iter().try_fold(dm.clone(), |acc, g| acc.conjugated(&g.as_local_op()))
    }
}

/// `U_circuit |state>`.
pub fn apply_circuit(state: &Statevector, circuit: &Circuit) -> Result<Statevector> {
    if state.num_qubits() != circuit.num_qubits {
        return Err(Error::DimensionMismatch {
            expected: circuit.num_qubits,
            found: state.num_qubits(),
        });
    }
    let mut out = state.clone();
    for g in &circuit.gates {
        out.apply_local(&g.as_local_op())?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::linalg::{max_abs, I};
    use crate::qsim::fidelity;

    #[test]
    fn empty_circuit_is_identity() {
        let psi = Statevector::normalized(vec![c(1.0), I, c(-0.5), c(2.0)]).unwrap();
        let out = apply_circuit(&psi, &Circuit::new(2).unwrap()).unwrap();
        assert_eq!(out, psi);
    }

    #[test]
    fn bell_pair_construction() {
        let circuit = Circuit::from_gates(2, [Gate::h(0), Gate::cnot(0, 1).unwrap()]).unwrap();
        let out = apply_circuit(&Statevector::from_bits("00").unwrap(), &circuit).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected = [c(h), ZERO, ZERO, c(h)];
        for (a, b) in out.amplitudes().iter().zip(expected) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(Gate::cnot(1, 1), Err(Error::RepeatedTarget)));
        let not_unitary = mat2(ONE, ONE, ZERO, ONE);
        assert!(matches!(Gate::unitary(not_unitary, 0), Err(Error::NotUnitary(_))));
        let mut circuit = Circuit::new(2).unwrap();
        assert!(matches!(circuit.push(Gate::h(2)), Err(Error::QubitOutOfRange { .. })));
        let psi = Statevector::from_bits("000").unwrap();
        assert!(matches!(apply_circuit(&psi, &circuit), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn density_evolution_matches_pure() {
        let circuit = Circuit::from_gates(
            3,
            [Gate::h(0), Gate::cnot(0, 2).unwrap(), Gate::y(1), Gate::cnot(2, 1).unwrap()],
        )
        .unwrap();
        let psi = Statevector::from_bits("010").unwrap();
        let pure = apply_circuit(&psi, &circuit).unwrap();
        let mixed = circuit.apply_to_density(&psi.to_density()).unwrap();
        assert!(max_abs(&(mixed.matrix() - pure.to_density().matrix())) < 1e-14);
        assert!((fidelity(&pure, &mixed).unwrap() - 1.0).abs() < 1e-12);
    }
}
