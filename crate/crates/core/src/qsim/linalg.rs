//! Small dense complex linear-algebra helpers shared by the simulator.
//!
//! Basis convention: in an `n`-qubit register, qubit `q` is bit `n - 1 - q`
//! of the basis index, so qubit 0 is the most significant bit. A local
//! operator acting on `targets` uses the same convention internally:
//! `targets[0]` is the most significant bit of the operator's index.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

/// Tolerance for norms and unitarity.
pub const NORM_TOL: f64 = 1e-12;
/// Tolerance for channels, Hermiticity of derived quantities and positivity.
pub const CHANNEL_TOL: f64 = 1e-10;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn mat2(a: C64, b: C64, cc: C64, d: C64) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[a, b, cc, d])
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn kron_all<'a>(ops: impl IntoIterator<Item = &'a CMatrix>) -> CMatrix {
    ops.into_iter()
        .fold(identity(1), |acc, op| acc.kronecker(op))
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn unitarity_deviation(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    max_abs(&(m.adjoint() * m - identity(m.nrows())))
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let sym = (m + m.adjoint()) * c(0.5);
    let mut vals: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Operator (spectral) norm of a Hermitian matrix.
pub fn hermitian_operator_norm(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m)
        .into_iter()
        .map(f64::abs)
        .fold(0.0, f64::max)
}

/// Principal square root of a positive semidefinite Hermitian matrix.
/// Eigenvalues are clamped at zero first.
pub fn psd_sqrt(m: &CMatrix) -> CMatrix {
    let sym = (m + m.adjoint()) * c(0.5);
    let eig = sym.symmetric_eigen();
    let roots = eig.eigenvalues.map(|v| c(v.max(0.0).sqrt()));
    let vecs = &eig.eigenvectors;
    vecs * CMatrix::from_diagonal(&roots) * vecs.adjoint()
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// Basis-index offsets for every local index of an operator on `targets`.
fn local_offsets(targets: &[usize], num_qubits: usize) -> (Vec<usize>, usize) {
    let k = targets.len();
    let masks: Vec<usize> = targets.iter().map(|&q| 1 << (num_qubits - 1 - q)).collect();
    let target_mask = masks.iter().fold(0, |acc, m| acc | m);
    let offsets = (0..1usize << k)
        .map(|local| {
            masks
                .iter()
                .enumerate()
                .filter(|(j, _)| (local >> (k - 1 - j)) & 1 == 1)
                .fold(0, |acc, (_, m)| acc | m)
        })
        .collect();
    (offsets, target_mask)
}

/// In place `amps <- (op on targets) amps` for an `num_qubits` register.
pub fn apply_local(op: &CMatrix, targets: &[usize], num_qubits: usize, amps: &mut [C64]) {
    let (offsets, target_mask) = local_offsets(targets, num_qubits);
    let local_dim = offsets.len();
    debug_assert_eq!(op.nrows(), local_dim);
    let mut buf = vec![ZERO; local_dim];
    for base in 0..amps.len() {
        if base & target_mask != 0 {
            continue;
        }
        for (slot, off) in buf.iter_mut().zip(&offsets) {
            *slot = amps[base | off];
        }
        for (r, off) in offsets.iter().enumerate() {
            let mut acc = ZERO;
            for (cidx, v) in buf.iter().enumerate() {
                acc += op[(r, cidx)] * v;
            }
            amps[base | off] = acc;
        }
    }
}

/// `m <- (op on targets) m`, applying the operator to every column.
pub fn left_apply_local(op: &CMatrix, targets: &[usize], num_qubits: usize, m: &mut CMatrix) {
    let dim = m.nrows();
    for col in m.as_mut_slice().chunks_mut(dim) {
        apply_local(op, targets, num_qubits, col);
    }
}

/// `rho <- A rho A^dagger` for a local operator `A`.
pub fn conjugate_local(op: &CMatrix, targets: &[usize], num_qubits: usize, rho: &CMatrix) -> CMatrix {
    let mut m = rho.clone();
    left_apply_local(op, targets, num_qubits, &mut m);
    let mut adj = m.adjoint();
    left_apply_local(op, targets, num_qubits, &mut adj);
    adj.adjoint()
}

/// Dense embedding of a local operator into the full register.
pub fn embed(op: &CMatrix, targets: &[usize], num_qubits: usize) -> CMatrix {
    let mut m = identity(1 << num_qubits);
    left_apply_local(op, targets, num_qubits, &mut m);
    m
}
