//! Encoder circuits for the five-qubit code.
//!
//! [`encoding_circuit`] uses four Hadamards and eight CNOTs with the data
//! qubit on qubit 5 and ancillas prepared in `|0111>`; it maps
//! `alpha|0> + beta|1>` to `alpha|0_L> + beta|1_L>` with no relative phase.
//!
//! [`figure_circuit`] is the gate-for-gate layout of the reference
//! encoder drawing (top wire = qubit 1, data on qubit 5). With its drawn
//! input `|1000>` it leaves the code space; with ancillas `|1001>` it
//! produces `alpha|0_L> - beta|1_L>`. It is kept for comparison only.

use crate::qsim::linalg::{C64, ZERO};
use crate::qsim::{Circuit, Gate, Statevector};
use crate::{Error, Result};

use super::NUM_QUBITS;

/// Register index of the data qubit (qubit 5).
pub const ENCODER_DATA_QUBIT: usize = 4;
/// Computational-basis preparation of qubits 1..=4 for [`encoding_circuit`].
pub const ENCODER_ANCILLA_BITS: [u8; 4] = [0, 1, 1, 1];
/// Ancilla preparation drawn alongside the reference layout.
pub const FIGURE_ANCILLA_BITS: [u8; 4] = [1, 0, 0, 0];

fn cx(control: usize, target: usize) -> Gate {
    Gate::cnot(control, target).expect("distinct qubits")
}

pub fn encoding_circuit() -> Circuit {
    let gates = [
        Gate::h(1),
        Gate::h(2),
        cx(2, 3),
        cx(4, 2),
        cx(2, 0),
        cx(1, 2),
        Gate::h(3),
        Gate::h(1),
        cx(1, 4),
        cx(2, 1),
        cx(3, 2),
        cx(0, 3),
    ];
    Circuit::from_gates(NUM_QUBITS, gates).expect("static circuit")
}

pub fn figure_circuit() -> Circuit {
    let gates = [
        cx(4, 0),
        Gate::h(0),
        Gate::h(1),
        cx(1, 4),
        cx(1, 2),
        cx(0, 2),
        cx(4, 3),
        cx(0, 4),
        Gate::h(2),
        Gate::h(3),
        cx(2, 4),
        cx(3, 4),
    ];
    Circuit::from_gates(NUM_QUBITS, gates).expect("static circuit")
}

fn product_input(alpha: C64, beta: C64, ancillas: [u8; 4]) -> Result<Statevector> {
    let norm = alpha.norm_sqr() + beta.norm_sqr();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(norm));
    }
    if ancillas.iter().any(|b| *b > 1) {
        return Err(Error::InvalidConfig(format!("ancilla bits {ancillas:?}")));
    }
    let base = ancillas
        .iter()
        .fold(0usize, |acc, b| (acc << 1) | *b as usize)
        << 1;
    let mut amps = vec![ZERO; 1 << NUM_QUBITS];
    amps[base] = alpha;
    amps[base | 1] = beta;
    Statevector::normalized(amps)
}

/// Input register for [`encoding_circuit`] carrying `alpha|0> + beta|1>`.
pub fn encoder_input(alpha: C64, beta: C64) -> Result<Statevector> {
    product_input(alpha, beta, ENCODER_ANCILLA_BITS)
}

/// Input register for [`figure_circuit`] with the given ancilla bits.
pub fn figure_input(alpha: C64, beta: C64, ancillas: [u8; 4]) -> Result<Statevector> {
    product_input(alpha, beta, ancillas)
}
