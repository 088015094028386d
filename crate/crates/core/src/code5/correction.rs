use rand::Rng;

use crate::qsim::linalg::{c, CMatrix};
use crate::qsim::{DensityMatrix, Gate};
use crate::{Error, Result};

use super::{decode_syndrome, PauliError, StabilizerSet, Syndrome, NUM_QUBITS};

/// Result of one syndrome measurement followed by lookup correction.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionRecord {
    pub state: DensityMatrix,
    pub syndrome: Syndrome,
    pub correction: Option<PauliError>,
}

/// Outcome-averaged correction: the state after measuring and correcting,
/// without conditioning on a particular syndrome.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactCorrection {
    pub state: DensityMatrix,
    /// Syndromes with non-negligible probability, in [`Syndrome::all`] order.
    pub syndrome_probabilities: Vec<(Syndrome, f64)>,
}

impl ExactCorrection {
    /// The syndrome if it occurs with probability one.
    pub fn deterministic_syndrome(&self) -> Option<Syndrome> {
        match self.syndrome_probabilities.as_slice() {
            [(s, p)] if (p - 1.0).abs() < 1e-10 => Some(*s),
            _ => None,
        }
    }
}

const CERTAIN: f64 = 1e-12;

fn check_register(dm: &DensityMatrix) -> Result<()> {
    if dm.num_qubits() != NUM_QUBITS {
        return Err(Error::DimensionMismatch { expected: NUM_QUBITS, found: dm.num_qubits() });
    }
    Ok(())
}

/// `(I + sign*S)/2 rho (I + sign*S)/2` and its trace.
fn project(rho: &CMatrix, generator: &CMatrix, sign: f64) -> (CMatrix, f64) {
    let dim = rho.nrows();
    let proj = (CMatrix::identity(dim, dim) + generator * c(sign)) * c(0.5);
    let out = &proj * rho * &proj;
    let p = out.trace().re;
    (out, p)
}

fn apply_correction(rho: &CMatrix, correction: Option<PauliError>) -> CMatrix {
    match correction {
        None => rho.clone(),
        Some(err) => {
            let gate = Gate::pauli(err.letter(), err.index()).expect("non-identity");
            let dm = DensityMatrix::from_raw(NUM_QUBITS, rho.clone());
            dm.conjugated(&gate.as_local_op()).expect("in range").matrix().clone()
        }
    }
}

/// Measures `S1..S4` in order (projectively, on the density matrix), then
/// applies the decoded single-qubit correction.
pub fn measure_and_correct<R: Rng + ?Sized>(dm: &DensityMatrix, rng: &mut R) -> Result<CorrectionRecord> {
    check_register(dm)?;
    let generators = StabilizerSet::five_qubit().matrices();
    let mut rho = dm.matrix().clone();
    let mut bits = [0u8; 4];
    for (k, g) in generators.iter().enumerate() {
        let (plus, p_plus) = project(&rho, g, 1.0);
        let take_plus = if p_plus >= 1.0 - CERTAIN {
            true
        } else if p_plus <= CERTAIN {
            false
        } else {
            rng.gen::<f64>() < p_plus
        };
        let (branch, p) = if take_plus { (plus, p_plus) } else { project(&rho, g, -1.0) };
        bits[k] = u8::from(!take_plus);
        rho = branch * c(1.0 / p);
    }
    let syndrome = Syndrome(bits);
    let correction = decode_syndrome(syndrome);
    let rho = apply_correction(&rho, correction);
    let rho = (&rho + rho.adjoint()) * c(0.5);
    Ok(CorrectionRecord { state: DensityMatrix::from_raw(NUM_QUBITS, rho), syndrome, correction })
}

/// Deterministic version of [`measure_and_correct`] averaged over all
/// syndrome outcomes.
pub fn correct_exactly(dm: &DensityMatrix) -> Result<ExactCorrection> {
    check_register(dm)?;
    let generators = StabilizerSet::five_qubit().matrices();
    let dim = dm.dim();
    let mut total = CMatrix::zeros(dim, dim);
    let mut probs = Vec::new();
    for syn in Syndrome::all() {
        let mut rho = dm.matrix().clone();
        for (g, bit) in generators.iter().zip(syn.bits()) {
            rho = project(&rho, g, if bit == 0 { 1.0 } else { -1.0 }).0;
        }
        let p = rho.trace().re;
        if p > CERTAIN {
            probs.push((syn, p));
            total += apply_correction(&rho, decode_syndrome(syn));
        }
    }
    let total = (&total + total.adjoint()) * c(0.5);
    Ok(ExactCorrection { state: DensityMatrix::from_raw(NUM_QUBITS, total), syndrome_probabilities: probs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code5::{syndrome_of_error, LogicalBasis};
    use crate::qsim::{fidelity, LocalOp, Pauli};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn attacked(errors: &[(usize, Pauli)]) -> DensityMatrix {
        attacked_state(LogicalBasis::five_qubit().zero, errors)
    }

    fn attacked_state(mut psi: crate::qsim::Statevector, errors: &[(usize, Pauli)]) -> DensityMatrix {
        for (q, l) in errors {
            psi.apply_local(&LocalOp::new(l.matrix(), vec![q - 1]).unwrap()).unwrap();
        }
        psi.to_density()
    }

    #[test]
    fn clean_state_is_untouched() {
        let rho = attacked(&[]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let rec = measure_and_correct(&rho, &mut rng).unwrap();
        assert!(rec.syndrome.is_trivial());
        assert_eq!(rec.correction, None);
        assert!((fidelity(&rec.state, &rho).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn y2_is_corrected() {
        let rho = attacked(&[(2, Pauli::Y)]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let rec = measure_and_correct(&rho, &mut rng).unwrap();
        let y2 = PauliError::new(2, Pauli::Y).unwrap();
        assert_eq!(rec.syndrome, syndrome_of_error(y2));
        assert_eq!(rec.correction, Some(y2));
        let zero_l = LogicalBasis::five_qubit().zero;
        assert!((fidelity(&rec.state, &zero_l).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn weight_two_error_is_miscorrected() {
        let psi = crate::code5::logical_state(c(0.6), crate::qsim::linalg::I * 0.8).unwrap();
        let rho = attacked_state(psi.clone(), &[(1, Pauli::X), (2, Pauli::X)]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let rec = measure_and_correct(&rho, &mut rng).unwrap();
        assert_eq!(rec.syndrome, Syndrome([1, 0, 0, 1]));
        assert_eq!(rec.correction, Some(PauliError::new(4, Pauli::Z).unwrap()));
        assert!(fidelity(&rec.state, &psi).unwrap() < 1.0 - 1e-6);

        // X1 X2 Z4 acts as a logical Z: invisible on |0_L>, flips |+_L>
        let zero_l = LogicalBasis::five_qubit().zero;
        let rec = measure_and_correct(&attacked(&[(1, Pauli::X), (2, Pauli::X)]), &mut rng).unwrap();
        assert!((fidelity(&rec.state, &zero_l).unwrap() - 1.0).abs() < 1e-10);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus_l = crate::code5::logical_state(c(h), c(h)).unwrap();
        let rho = attacked_state(plus_l.clone(), &[(1, Pauli::X), (2, Pauli::X)]);
        let rec = measure_and_correct(&rho, &mut rng).unwrap();
        assert!(fidelity(&rec.state, &plus_l).unwrap() < 1e-10);
    }

    #[test]
    fn exact_correction_agrees_on_pauli_inputs() {
        let rho = attacked(&[(4, Pauli::Z)]);
        let exact = correct_exactly(&rho).unwrap();
        assert_eq!(
            exact.deterministic_syndrome(),
            Some(syndrome_of_error(PauliError::new(4, Pauli::Z).unwrap()))
        );
        let zero_l = LogicalBasis::five_qubit().zero;
        assert!((fidelity(&exact.state, &zero_l).unwrap() - 1.0).abs() < 1e-10);
    }
}
