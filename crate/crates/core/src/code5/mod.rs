//! The `[[5,1,3]]` five-qubit code.
//!
//! Qubits are labelled 1..=5 in [`PauliError`] and in documentation, and
//! map to register indices 0..=4.

mod correction;
mod encoder;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::qsim::linalg::{c, CMatrix, C64, CHANNEL_TOL, ZERO};
use crate::qsim::{expectation, Observable, Pauli, PauliString, QuantumState, Statevector};
use crate::{Error, Result};

pub use correction::{correct_exactly, measure_and_correct, CorrectionRecord, ExactCorrection};
pub use encoder::{
    encoder_input, encoding_circuit, figure_circuit, figure_input, ENCODER_ANCILLA_BITS,
    ENCODER_DATA_QUBIT, FIGURE_ANCILLA_BITS,
};

pub const NUM_QUBITS: usize = 5;

/// Generators `S1..S4` written qubit 1 first.
const GENERATORS: [&str; 4] = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"];

/// `(ket, sign)` pairs of the logical zero, amplitude `sign / 4`.
const ZERO_L: [(&str, i8); 16] = [
    ("00000", 1), ("10010", 1), ("01001", 1), ("10100", 1),
    ("01010", 1), ("11011", -1), ("00110", -1), ("11000", -1),
    ("11101", -1), ("00011", -1), ("11110", -1), ("01111", -1),
    ("10001", -1), ("01100", -1), ("10111", -1), ("00101", 1),
];

const ONE_L: [(&str, i8); 16] = [
    ("11111", 1), ("01101", 1), ("10110", 1), ("01011", 1),
    ("10101", 1), ("00100", -1), ("11001", -1), ("00111", -1),
    ("00010", -1), ("11100", -1), ("00001", -1), ("10000", -1),
    ("01110", -1), ("10011", -1), ("01000", -1), ("11010", 1),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerSet {
    generators: [PauliString; 4],
}

impl StabilizerSet {
    pub fn five_qubit() -> Self {
        let generators = GENERATORS.map(|s| s.parse().expect("static generator"));
        Self { generators }
    }

    pub fn generators(&self) -> &[PauliString; 4] {
        &self.generators
    }

    pub fn matrices(&self) -> [CMatrix; 4] {
        std::array::from_fn(|k| self.generators[k].to_matrix())
    }

    /// Projector onto the code space, `prod_k (I + S_k) / 2`.
    pub fn code_projector(&self) -> CMatrix {
        let dim = 1 << NUM_QUBITS;
        self.matrices()
            .iter()
            .fold(CMatrix::identity(dim, dim), |acc, s| acc * (CMatrix::identity(dim, dim) + s) * c(0.5))
    }
}

impl Default for StabilizerSet {
    fn default() -> Self {
        Self::five_qubit()
    }
}

fn table_state(table: &[(&str, i8); 16]) -> Statevector {
    let mut amps = vec![ZERO; 1 << NUM_QUBITS];
    for (ket, sign) in table {
        let idx = usize::from_str_radix(ket, 2).expect("static ket");
        amps[idx] = c(*sign as f64 / 4.0);
    }
    Statevector::new(amps).expect("logical states are normalized")
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogicalBasis {
    pub zero: Statevector,
    pub one: Statevector,
}

impl LogicalBasis {
    pub fn five_qubit() -> Self {
        Self { zero: table_state(&ZERO_L), one: table_state(&ONE_L) }
    }
}

/// `alpha |0_L> + beta |1_L>` built from the amplitude tables.
pub fn logical_state(alpha: C64, beta: C64) -> Result<Statevector> {
    let norm = alpha.norm_sqr() + beta.norm_sqr();
    if (norm - 1.0).abs() > CHANNEL_TOL {
        return Err(Error::NotNormalized(norm));
    }
    let basis = LogicalBasis::five_qubit();
    let amps = basis
        .zero
        .amplitudes()
        .iter()
        .zip(basis.one.amplitudes())
        .map(|(z, o)| alpha * z + beta * o)
        .collect();
    Statevector::normalized(amps)
}

/// Haar-random qubit amplitudes `(alpha, beta)`.
pub fn random_amplitudes<R: rand::Rng + ?Sized>(rng: &mut R) -> (C64, C64) {
    let cos_theta: f64 = 1.0 - 2.0 * rng.gen::<f64>();
    let phi = std::f64::consts::TAU * rng.gen::<f64>();
    let half = cos_theta.clamp(-1.0, 1.0).acos() / 2.0;
    (c(half.cos()), C64::from_polar(half.sin(), phi))
}

/// `(<S1>, <S2>, <S3>, <S4>)`.
pub fn stabilizer_expectations(state: &impl QuantumState) -> Result<[f64; 4]> {
    if state.num_qubits() != NUM_QUBITS {
        return Err(Error::DimensionMismatch { expected: NUM_QUBITS, found: state.num_qubits() });
    }
    let set = StabilizerSet::five_qubit();
    let mut out = [0.0; 4];
    for (slot, g) in out.iter_mut().zip(set.generators()) {
        *slot = expectation(state, &Observable::pauli(g.clone()))?;
    }
    Ok(out)
}

/// Single-qubit Pauli error on qubit `1..=5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawPauliError", into = "RawPauliError")]
pub struct PauliError {
    qubit: usize,
    letter: Pauli,
}

#[derive(Serialize, Deserialize)]
struct RawPauliError {
    qubit: usize,
    letter: Pauli,
}

impl TryFrom<RawPauliError> for PauliError {
    type Error = Error;
    fn try_from(raw: RawPauliError) -> Result<Self> {
        PauliError::new(raw.qubit, raw.letter)
    }
}

impl From<PauliError> for RawPauliError {
    fn from(e: PauliError) -> Self {
        RawPauliError { qubit: e.qubit, letter: e.letter }
    }
}

impl PauliError {
    pub fn new(qubit: usize, letter: Pauli) -> Result<Self> {
        if !(1..=NUM_QUBITS).contains(&qubit) {
            return Err(Error::QubitOutOfRange { index: qubit, num_qubits: NUM_QUBITS });
        }
        if letter == Pauli::I {
            return Err(Error::InvalidPauli("identity is not an error".into()));
        }
        Ok(Self { qubit, letter })
    }

    /// All 15 single-qubit errors, ordered by qubit then X, Y, Z.
    pub fn all() -> Vec<PauliError> {
        (1..=NUM_QUBITS)
            .flat_map(|q| Pauli::NON_IDENTITY.map(|l| PauliError { qubit: q, letter: l }))
            .collect()
    }

    pub fn qubit(&self) -> usize {
        self.qubit
    }

    /// Zero-based register index.
    pub fn index(&self) -> usize {
        self.qubit - 1
    }

    pub fn letter(&self) -> Pauli {
        self.letter
    }

    pub fn as_pauli_string(&self) -> PauliString {
        PauliString::single(NUM_QUBITS, self.index(), self.letter)
    }
}

impl fmt::Display for PauliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.letter.as_char(), self.qubit)
    }
}

/// Bit `k` is 1 iff the error anticommutes with generator `S_{k+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Syndrome(pub [u8; 4]);

impl Syndrome {
    pub const TRIVIAL: Syndrome = Syndrome([0; 4]);

    /// All 16 syndromes, `S1` bit most significant.
    pub fn all() -> impl Iterator<Item = Syndrome> {
        (0..16u8).map(|v| Syndrome([(v >> 3) & 1, (v >> 2) & 1, (v >> 1) & 1, v & 1]))
    }

    pub fn is_trivial(&self) -> bool {
        self.0 == [0; 4]
    }

    pub fn bits(&self) -> [u8; 4] {
        self.0
    }

    pub fn of_pauli(p: &PauliString) -> Syndrome {
        let set = StabilizerSet::five_qubit();
        Syndrome(std::array::from_fn(|k| u8::from(!set.generators()[k].commutes_with(p))))
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits = self.0;
        write!(f, "({},{},{},{})", bits[0], bits[1], bits[2], bits[3])
    }
}

pub fn syndrome_of_error(err: PauliError) -> Syndrome {
    Syndrome::of_pauli(&err.as_pauli_string())
}

/// Lookup decoder: the unique weight-1 error with this syndrome, or `None`
/// for the trivial syndrome.
pub fn decode_syndrome(syn: Syndrome) -> Option<PauliError> {
    if syn.is_trivial() {
        return None;
    }
    PauliError::all().into_iter().find(|e| syndrome_of_error(*e) == syn)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::{fidelity, DensityMatrix};

    #[test]
    fn logical_tables() {
        let zero = logical_state(c(1.0), ZERO).unwrap();
        assert_eq!(zero.amplitude(0b00000), c(0.25));
        assert_eq!(zero.amplitude(0b11011), c(-0.25));
        assert_eq!(zero.amplitude(0b10010), c(0.25));
        let one = logical_state(ZERO, c(1.0)).unwrap();
        assert_eq!(one.amplitude(0b11111), c(0.25));
        assert_eq!(one.amplitude(0b01101), c(0.25));
        assert!(logical_state(c(1.0), c(1.0)).is_err());
    }

    #[test]
    fn superposition_is_stabilized() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = logical_state(c(h), c(h)).unwrap();
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
        for v in stabilizer_expectations(&psi).unwrap() {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn logical_states_are_orthogonal() {
        let b = LogicalBasis::five_qubit();
        assert!(fidelity(&b.zero, &b.one).unwrap() < 1e-30);
        assert!((fidelity(&b.zero, &b.zero).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn stabilizer_expectations_after_x1() {
        let mut psi = LogicalBasis::five_qubit().zero;
        psi.apply_local(&crate::qsim::LocalOp::new(Pauli::X.matrix(), vec![0]).unwrap()).unwrap();
        let ev = stabilizer_expectations(&psi).unwrap();
        let expected = [1.0, 1.0, 1.0, -1.0];
        for (a, b) in ev.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
        let mixed = DensityMatrix::maximally_mixed(5).unwrap();
        assert!(stabilizer_expectations(&mixed).unwrap().iter().all(|v| v.abs() < 1e-15));
        let small = DensityMatrix::maximally_mixed(3).unwrap();
        assert!(stabilizer_expectations(&small).is_err());
    }

    #[test]
    fn syndrome_examples() {
        let e = |q, l| PauliError::new(q, l).unwrap();
        assert_eq!(syndrome_of_error(e(1, Pauli::X)), Syndrome([0, 0, 0, 1]));
        assert_eq!(syndrome_of_error(e(3, Pauli::Z)), Syndrome([0, 0, 1, 0]));
        assert_eq!(syndrome_of_error(e(5, Pauli::Z)), Syndrome([0, 1, 0, 0]));
        assert_eq!(decode_syndrome(Syndrome::TRIVIAL), None);
        assert_eq!(decode_syndrome(Syndrome([0, 0, 0, 1])), Some(e(1, Pauli::X)));
    }

    #[test]
    fn pauli_error_validation() {
        assert!(PauliError::new(0, Pauli::X).is_err());
        assert!(PauliError::new(6, Pauli::X).is_err());
        assert!(PauliError::new(2, Pauli::I).is_err());
        let json = serde_json::to_string(&PauliError::new(2, Pauli::Y).unwrap()).unwrap();
        assert_eq!(json, r#"{"qubit":2,"letter":"Y"}"#);
        assert!(serde_json::from_str::<PauliError>(r#"{"qubit":9,"letter":"Y"}"#).is_err());
    }
}
