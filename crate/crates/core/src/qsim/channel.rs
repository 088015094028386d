use super::linalg::{self, c, identity, kron_all, max_abs, CMatrix, CHANNEL_TOL};
use super::pauli::Pauli;
use super::state::{check_targets, DensityMatrix};
use crate::{Error, Result};

/// Completely positive trace-preserving map in Kraus form, acting on
/// `targets`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    operators: Vec<CMatrix>,
    targets: Vec<usize>,
}

impl KrausChannel {
    /// Checks `sum K^dagger K = I` within `1e-10`.
    pub fn new(operators: Vec<CMatrix>, targets: Vec<usize>) -> Result<Self> {
        check_targets(&targets, usize::MAX)?;
        let dim = 1usize << targets.len();
        if operators.is_empty() {
            return Err(Error::IncompleteKraus(1.0));
        }
        let mut sum = CMatrix::zeros(dim, dim);
        for k in &operators {
            if k.nrows() != dim || k.ncols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: k.nrows() });
            }
            sum += k.adjoint() * k;
        }
        let dev = max_abs(&(sum - identity(dim)));
        if dev > CHANNEL_TOL {
            return Err(Error::IncompleteKraus(dev));
        }
        Ok(Self { operators, targets })
    }

    pub fn identity(qubit: usize) -> Self {
        Self { operators: vec![identity(2)], targets: vec![qubit] }
    }

    /// Mixed-unitary Pauli channel: `rho -> sum_w p_w P_w rho P_w` over the
    /// words in `terms`. Probabilities must sum to one.
    pub fn pauli_mixture(terms: &[(f64, Vec<Pauli>)], targets: Vec<usize>) -> Result<Self> {
        if terms.iter().any(|(p, w)| *p < 0.0 || w.len() != targets.len()) {
            return Err(Error::IncompleteKraus(f64::NAN));
        }
        let operators = terms
            .iter()
            .filter(|(p, _)| *p > 0.0)
            .map(|(p, word)| {
                let mats: Vec<CMatrix> = word.iter().map(|l| l.matrix()).collect();
                kron_all(&mats) * c(p.sqrt())
            })
            .collect();
        Self::new(operators, targets)
    }

    /// With probability `p` the targeted qubits are replaced by the
    /// maximally mixed state: `rho -> (1-p) rho + p I/2^k ⊗ tr_S rho`.
    pub fn depolarizing(p: f64, targets: Vec<usize>) -> Result<Self> {
        check_probability(p)?;
        let words = Pauli::words(targets.len());
        let share = p / words.len() as f64;
        let terms: Vec<(f64, Vec<Pauli>)> = words
            .into_iter()
            .enumerate()
            .map(|(i, w)| (if i == 0 { 1.0 - p + share } else { share }, w))
            .collect();
        Self::pauli_mixture(&terms, targets)
    }

    /// Uniform non-identity Pauli error with total probability `p`.
    pub fn uniform_pauli_error(p: f64, targets: Vec<usize>) -> Result<Self> {
        check_probability(p)?;
        let words = Pauli::words(targets.len());
        let share = p / (words.len() - 1) as f64;
        let terms: Vec<(f64, Vec<Pauli>)> = words
            .into_iter()
            .enumerate()
            .map(|(i, w)| (if i == 0 { 1.0 - p } else { share }, w))
            .collect();
        Self::pauli_mixture(&terms, targets)
    }

    /// Complete dephasing in the computational basis (Z-basis intercept
    /// and resend).
    pub fn dephasing(qubit: usize) -> Self {
        let mut p0 = CMatrix::zeros(2, 2);
        p0[(0, 0)] = c(1.0);
        let mut p1 = CMatrix::zeros(2, 2);
        p1[(1, 1)] = c(1.0);
        Self { operators: vec![p0, p1], targets: vec![qubit] }
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn is_identity(&self) -> bool {
        self.operators.len() == 1 && max_abs(&(&self.operators[0] - identity(self.operators[0].nrows()))) == 0.0
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidProbability(p))
    }
}

pub fn apply_channel(dm: &DensityMatrix, ch: &KrausChannel) -> Result<DensityMatrix> {
    let n = dm.num_qubits();
    check_targets(&ch.targets, n)?;
    if ch.is_identity() {
        return Ok(dm.clone());
    }
    let mut out = CMatrix::zeros(dm.dim(), dm.dim());
    for k in &ch.operators {
        out += linalg::conjugate_local(k, &ch.targets, n, dm.matrix());
    }
    // exact Hermiticity
    let out = (&out + out.adjoint()) * c(0.5);
    Ok(DensityMatrix::from_raw(n, out))
}
