use super::linalg::{hermiticity_deviation, CMatrix, CHANNEL_TOL, NORM_TOL};
use super::pauli::PauliString;
use super::state::{LocalOp, QuantumState};
use crate::{Error, Result};

/// Hermitian observable in one of three encodings.
#[derive(Debug, Clone, PartialEq)]
pub enum Observable {
    /// Real linear combination of Pauli strings on the full register.
    Pauli(Vec<(f64, PauliString)>),
    /// Operator on a subset of qubits.
    Local(LocalOp),
    /// Dense operator on the full register.
    Dense(CMatrix),
}

impl Observable {
    pub fn pauli(p: PauliString) -> Self {
        Observable::Pauli(vec![(1.0, p)])
    }

    pub fn local(matrix: CMatrix, targets: Vec<usize>) -> Result<Self> {
        Ok(Observable::Local(LocalOp::new(matrix, targets)?))
    }

    pub fn to_dense(&self, num_qubits: usize) -> Result<CMatrix> {
        match self {
            Observable::Pauli(terms) => {
                let dim = 1usize << num_qubits;
                let mut m = CMatrix::zeros(dim, dim);
                for (coef, p) in terms {
                    if p.len() != num_qubits {
                        return Err(Error::DimensionMismatch { expected: num_qubits, found: p.len() });
                    }
                    m += p.to_matrix() * super::linalg::c(*coef);
                }
                Ok(m)
            }
            Observable::Local(op) => {
                op.check_fits(num_qubits)?;
                Ok(op.embed(num_qubits))
            }
            Observable::Dense(m) => {
                let dim = 1usize << num_qubits;
                if m.nrows() != dim || m.ncols() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: m.nrows() });
                }
                Ok(m.clone())
            }
        }
    }
}

/// `<obs>` on a pure or mixed state. The imaginary part of the raw value
/// must vanish within `1e-10`.
pub fn expectation(state: &impl QuantumState, obs: &Observable) -> Result<f64> {
    let n = state.num_qubits();
    let raw = match obs {
        Observable::Pauli(terms) => {
            let mut acc = super::linalg::ZERO;
            for (coef, p) in terms {
                if p.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, found: p.len() });
                }
                acc += state.product_expectation(&p.local_factors())? * (coef * p.sign() as f64);
            }
            acc
        }
        Observable::Local(op) => {
            let dev = hermiticity_deviation(op.matrix());
            if dev > NORM_TOL {
                return Err(Error::NotHermitian(dev));
            }
            state.product_expectation(std::slice::from_ref(op))?
        }
        Observable::Dense(m) => {
            let dim = 1usize << n;
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: m.nrows() });
            }
            let dev = hermiticity_deviation(m);
            if dev > NORM_TOL {
                return Err(Error::NotHermitian(dev));
            }
            let all: Vec<usize> = (0..n).collect();
            state.product_expectation(&[LocalOp::new_unchecked(m.clone(), all)])?
        }
    };
    if raw.im.abs() > CHANNEL_TOL {
        return Err(Error::NotHermitian(raw.im.abs()));
    }
    Ok(raw.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::linalg::{c, ONE, ZERO};
    use crate::qsim::{DensityMatrix, Pauli, Statevector};

    #[test]
    fn z_on_zero_is_one() {
        let zero = Statevector::from_bits("0").unwrap();
        let obs = Observable::pauli("Z".parse().unwrap());
        assert_eq!(expectation(&zero, &obs).unwrap(), 1.0);
    }

    #[test]
    fn traceless_paulis_vanish_on_maximally_mixed() {
        let mixed = DensityMatrix::maximally_mixed(3).unwrap();
        for word in Pauli::words(3).into_iter().skip(1) {
            let obs = Observable::pauli(PauliString::new(word));
            assert!(expectation(&mixed, &obs).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn encodings_agree() {
        let psi = Statevector::normalized(vec![c(0.3), ONE, c(-0.2), c(0.5)]).unwrap();
        let p: PauliString = "-XY".parse().unwrap();
        let dense = Observable::Dense(p.to_matrix());
        let local = Observable::local(p.to_matrix() * c(-1.0), vec![0, 1]).unwrap();
        let a = expectation(&psi, &Observable::pauli(p.clone())).unwrap();
        let b = expectation(&psi, &dense).unwrap();
        let d = expectation(&psi, &local).unwrap();
        assert!((a - b).abs() < 1e-14 && (a + d).abs() < 1e-14);
        let dm = psi.to_density();
        assert!((expectation(&dm, &dense).unwrap() - a).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let psi = Statevector::from_bits("0").unwrap();
        let m = CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO]);
        assert!(matches!(expectation(&psi, &Observable::Dense(m)), Err(Error::NotHermitian(_))));
        let wrong = Observable::pauli("ZZ".parse().unwrap());
        assert!(matches!(expectation(&psi, &wrong), Err(Error::DimensionMismatch { .. })));
    }
}
