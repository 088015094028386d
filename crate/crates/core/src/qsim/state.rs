use nalgebra::DVector;

use super::linalg::{
    self, c, hermitian_eigenvalues, hermiticity_deviation, identity, CMatrix, C64, CHANNEL_TOL,
    NORM_TOL, ZERO,
};
use crate::{Error, Result};

pub const MAX_QUBITS: usize = 10;

pub(crate) fn check_qubit_count(n: usize) -> Result<()> {
    if (1..=MAX_QUBITS).contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedQubitCount(n))
    }
}

pub(crate) fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::DimensionMismatch { expected: dim.next_power_of_two(), found: dim });
    }
    let n = dim.trailing_zeros() as usize;
    check_qubit_count(n)?;
    Ok(n)
}

pub(crate) fn check_targets(targets: &[usize], num_qubits: usize) -> Result<()> {
    for (i, &t) in targets.iter().enumerate() {
        if t >= num_qubits {
            return Err(Error::QubitOutOfRange { index: t, num_qubits });
        }
        if targets[..i].contains(&t) {
            return Err(Error::RepeatedTarget);
        }
    }
    Ok(())
}

/// An operator acting on a subset of qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalOp {
    matrix: CMatrix,
    targets: Vec<usize>,
}

impl LocalOp {
    pub fn new(matrix: CMatrix, targets: Vec<usize>) -> Result<Self> {
        check_targets(&targets, usize::MAX)?;
        let dim = 1usize << targets.len();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: matrix.nrows() });
        }
        Ok(Self { matrix, targets })
    }

    pub(crate) fn new_unchecked(matrix: CMatrix, targets: Vec<usize>) -> Self {
        Self { matrix, targets }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub(crate) fn check_fits(&self, num_qubits: usize) -> Result<()> {
        check_targets(&self.targets, num_qubits)
    }

    pub fn embed(&self, num_qubits: usize) -> CMatrix {
        linalg::embed(&self.matrix, &self.targets, num_qubits)
    }
}

/// Pure state of `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    num_qubits: usize,
    amps: DVector<C64>,
}

impl Statevector {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let num_qubits = qubits_for_dim(amplitudes.len())?;
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { num_qubits, amps: DVector::from_vec(amplitudes) })
    }

    /// Rescales to unit norm before validating.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm * norm));
        }
        Self::new(amplitudes.into_iter().map(|a| a / norm).collect())
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::DimensionMismatch { expected: dim, found: index });
        }
        let mut amps = DVector::from_element(dim, ZERO);
        amps[index] = c(1.0);
        Ok(Self { num_qubits, amps })
    }

    /// Computational basis ket from a bit string, qubit 0 first: `"10010"`.
    pub fn from_bits(bits: &str) -> Result<Self> {
        let index = usize::from_str_radix(bits, 2)
            .map_err(|_| Error::InvalidConfig(format!("bad bit string {bits:?}")))?;
        Self::basis(bits.len(), index)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.amps.as_slice()
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`
    pub fn inner(&self, other: &Statevector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(self.amps.dotc(&other.amps))
    }

    pub fn apply_local(&mut self, op: &LocalOp) -> Result<()> {
        op.check_fits(self.num_qubits)?;
        linalg::apply_local(&op.matrix, &op.targets, self.num_qubits, self.amps.as_mut_slice());
        Ok(())
    }

    /// Tensor product `self ⊗ other`, with `self` on the leading qubits.
    pub fn tensor(&self, other: &Statevector) -> Result<Statevector> {
        let n = self.num_qubits + other.num_qubits;
        check_qubit_count(n)?;
        Ok(Self { num_qubits: n, amps: self.amps.kronecker(&other.amps) })
    }

    pub fn scaled_phase(&self, phase: C64) -> Statevector {
        Self { num_qubits: self.num_qubits, amps: &self.amps * phase }
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }
}

/// Mixed state of `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    rho: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(rho: CMatrix) -> Result<Self> {
        if !rho.is_square() {
            return Err(Error::InvalidDensityMatrix("matrix is not square".into()));
        }
        let num_qubits = qubits_for_dim(rho.nrows())?;
        let herm = hermiticity_deviation(&rho);
        if herm > NORM_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let tr = linalg::trace(&rho);
        if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr}")));
        }
        let min_eig = hermitian_eigenvalues(&rho)[0];
        if min_eig < -CHANNEL_TOL {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(Self { num_qubits, rho })
    }

    pub(crate) fn from_raw(num_qubits: usize, rho: CMatrix) -> Self {
        Self { num_qubits, rho }
    }

    pub fn from_pure(psi: &Statevector) -> Self {
        let rho = &psi.amps * psi.amps.adjoint();
        Self { num_qubits: psi.num_qubits, rho }
    }

    pub fn maximally_mixed(num_qubits: usize) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let dim = 1usize << num_qubits;
        Ok(Self { num_qubits, rho: identity(dim) * c(1.0 / dim as f64) })
    }

    /// Convex combination `sum_i w_i rho_i`. Weights must be non-negative
    /// and sum to one.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidDensityMatrix("empty mixture".into()))?;
        let n = first.1.num_qubits;
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if parts.iter().any(|(w, _)| *w < 0.0) || (total - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidDensityMatrix(format!("mixture weights sum to {total}")));
        }
        let mut rho = CMatrix::zeros(1 << n, 1 << n);
        for (w, part) in parts {
            if part.num_qubits != n {
                return Err(Error::DimensionMismatch { expected: n, found: part.num_qubits });
            }
            rho += &part.rho * c(*w);
        }
        Ok(Self { num_qubits: n, rho })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.rho
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(&self.rho).re
    }

    pub fn purity(&self) -> f64 {
        linalg::trace(&(&self.rho * &self.rho)).re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.rho)[0]
    }

    /// `A rho A^dagger` for a local operator; no renormalisation.
    pub fn conjugated(&self, op: &LocalOp) -> Result<DensityMatrix> {
        op.check_fits(self.num_qubits)?;
        Ok(Self {
            num_qubits: self.num_qubits,
            rho: linalg::conjugate_local(&op.matrix, &op.targets, self.num_qubits, &self.rho),
        })
    }

    /// Reduced state on `keep` (in the given order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        check_targets(keep, self.num_qubits)?;
        check_qubit_count(keep.len())?;
        let n = self.num_qubits;
        let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
        let assemble = |kept: usize, rest: usize| {
            let mut idx = 0;
            for (j, &q) in keep.iter().enumerate() {
                idx |= ((kept >> (keep.len() - 1 - j)) & 1) << (n - 1 - q);
            }
            for (j, &q) in traced.iter().enumerate() {
                idx |= ((rest >> (traced.len() - 1 - j)) & 1) << (n - 1 - q);
            }
            idx
        };
        let kd = 1usize << keep.len();
        let rd = 1usize << traced.len();
        let mut out = CMatrix::zeros(kd, kd);
        for r in 0..kd {
            for cc in 0..kd {
                let mut acc = ZERO;
                for e in 0..rd {
                    acc += self.rho[(assemble(r, e), assemble(cc, e))];
                }
                out[(r, cc)] = acc;
            }
        }
        Ok(Self { num_qubits: keep.len(), rho: out })
    }
}

/// Borrowed view over either state representation.
#[derive(Debug, Clone, Copy)]
pub enum StateView<'a> {
    Pure(&'a Statevector),
    Mixed(&'a DensityMatrix),
}

/// Common interface for pure and mixed states.
pub trait QuantumState {
    fn num_qubits(&self) -> usize;
    fn view(&self) -> StateView<'_>;

    /// Raw `<A_1 A_2 ... A_k>` for a product of local operators. Operators
    /// are applied right to left onto the state (the last one first).
    fn product_expectation(&self, ops: &[LocalOp]) -> Result<C64> {
        for op in ops {
            op.check_fits(self.num_qubits())?;
        }
        let n = self.num_qubits();
        Ok(match self.view() {
            StateView::Pure(psi) => {
                let mut v = psi.amps.clone();
                for op in ops.iter().rev() {
                    linalg::apply_local(&op.matrix, &op.targets, n, v.as_mut_slice());
                }
                psi.amps.dotc(&v)
            }
            StateView::Mixed(dm) => {
                let mut m = dm.rho.clone();
                for op in ops.iter().rev() {
                    linalg::left_apply_local(&op.matrix, &op.targets, n, &mut m);
                }
                linalg::trace(&m)
            }
        })
    }

    fn to_density(&self) -> DensityMatrix {
        match self.view() {
            StateView::Pure(psi) => DensityMatrix::from_pure(psi),
            StateView::Mixed(dm) => dm.clone(),
        }
    }
}

impl QuantumState for Statevector {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }
    fn view(&self) -> StateView<'_> {
        StateView::Pure(self)
    }
}

impl QuantumState for DensityMatrix {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }
    fn view(&self) -> StateView<'_> {
        StateView::Mixed(self)
    }
}

impl<T: QuantumState + ?Sized> QuantumState for &T {
    fn num_qubits(&self) -> usize {
        (**self).num_qubits()
    }
    fn view(&self) -> StateView<'_> {
        (**self).view()
    }
}

/// Squared Uhlmann fidelity, `|<a|b>|^2` for pure states.
pub fn fidelity(a: &impl QuantumState, b: &impl QuantumState) -> Result<f64> {
    if a.num_qubits() != b.num_qubits() {
        return Err(Error::DimensionMismatch { expected: a.num_qubits(), found: b.num_qubits() });
    }
    let f = match (a.view(), b.view()) {
        (StateView::Pure(x), StateView::Pure(y)) => x.inner(y)?.norm_sqr(),
        (StateView::Pure(x), StateView::Mixed(r)) | (StateView::Mixed(r), StateView::Pure(x)) => {
            (x.amps.adjoint() * &r.rho * &x.amps)[(0, 0)].re
        }
        (StateView::Mixed(r), StateView::Mixed(s)) => {
            let root = linalg::psd_sqrt(&r.rho);
            let inner = &root * &s.rho * &root;
            let eig = hermitian_eigenvalues(&inner);
            let t: f64 = eig.iter().map(|v| v.max(0.0).sqrt()).sum();
            t * t
        }
    };
    Ok(f.clamp(0.0, 1.0))
}
