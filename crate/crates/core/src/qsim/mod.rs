//! Dense simulation of small qubit registers (at most ten qubits).
//!
//! Qubit 0 is the most significant bit of a basis index, so the ket
//! `|10010>` is index 18. Global phases are kept; use [`fidelity`] to
//! compare states.

mod channel;
mod gate;
pub mod linalg;
mod observable;
mod pauli;
mod sampling;
mod state;

pub use channel::{apply_channel, KrausChannel};
pub use gate::{apply_circuit, Circuit, Gate, GateKind};
pub use linalg::{CMatrix, C64};
pub use observable::{expectation, Observable};
pub use pauli::{Pauli, PauliString};
pub use sampling::{check_dichotomic, sample_product_outcomes, ProductSampler};
pub use state::{fidelity, DensityMatrix, LocalOp, QuantumState, StateView, Statevector, MAX_QUBITS};
