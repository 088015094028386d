use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use super::{builtin_functional, check_parties, BellFunctional, DichotomicObservable, FunctionalKind, MeasurementStrategy};
use crate::qsim::linalg::{c, embed, hermitian_operator_norm, identity, max_abs, CMatrix, CHANNEL_TOL, I};
use crate::{Error, Result};

/// Dense Bell operator `sum_t c_t prod_j A^j` on `parties` qubits.
pub fn bell_operator(f: &BellFunctional, strat: &MeasurementStrategy) -> Result<CMatrix> {
    check_parties(f, strat)?;
    let n = f.parties;
    let dim = 1usize << n;
    let mut out = CMatrix::zeros(dim, dim);
    for t in &f.terms {
        let term = t
            .local_ops(strat)
            .iter()
            .fold(identity(dim), |acc, op| acc * op.embed(n));
        out += term * c(t.coefficient);
    }
    Ok(out)
}

/// `(A_0 + sign * A_1) / sqrt(2)` of party 1.
fn party_one_combination(strat: &MeasurementStrategy, sign: f64) -> CMatrix {
    (strat.observable(0, 0).matrix() + strat.observable(0, 1).matrix() * c(sign)) * c(FRAC_1_SQRT_2)
}

/// The four pseudo-stabilizers of the five-party functional, densified.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoStabilizerSet {
    operators: [CMatrix; 4],
}

impl PseudoStabilizerSet {
    pub fn from_strategy(strat: &MeasurementStrategy) -> Result<Self> {
        if strat.parties() != 5 {
            return Err(Error::PartyMismatch { functional: 5, strategy: strat.parties() });
        }
        let plus = party_one_combination(strat, 1.0);
        let minus = party_one_combination(strat, -1.0);
        // (party, setting) factors after the party-1 combination
        let build = |first: Option<&CMatrix>, rest: &[(usize, usize)]| {
            let mut m = first.map_or_else(|| identity(32), |p| embed(p, &[0], 5));
            for &(j, x) in rest {
                m *= embed(strat.observable(j, x).matrix(), &[j], 5);
            }
            m
        };
        let operators = [
            build(Some(&plus), &[(1, 1), (2, 1), (3, 0)]),
            build(None, &[(1, 0), (2, 1), (3, 1), (4, 0)]),
            build(Some(&plus), &[(2, 0), (3, 1), (4, 1)]),
            build(Some(&minus), &[(1, 0), (3, 0), (4, 1)]),
        ];
        Ok(Self { operators })
    }

    pub fn operators(&self) -> &[CMatrix; 4] {
        &self.operators
    }

    /// `sqrt(2) (S1 + S3) + S2 + 2 sqrt(2) S4`, equal to the Bell operator.
    pub fn combination(&self) -> CMatrix {
        let [s1, s2, s3, s4] = &self.operators;
        (s1 + s3) * c(SQRT_2) + s2 + s4 * c(2.0 * SQRT_2)
    }
}

/// Weighted Hermitian operators `(w, T)` with
/// `bound * I - B = sum w T^2` for every dichotomic strategy.
pub fn sos_terms(strat: &MeasurementStrategy, kind: FunctionalKind) -> Result<Vec<(f64, CMatrix)>> {
    match kind {
        FunctionalKind::Chsh => {
            if strat.parties() != 2 {
                return Err(Error::PartyMismatch { functional: 2, strategy: strat.parties() });
            }
            let t = |sign: f64, setting: usize| {
                embed(&party_one_combination(strat, sign), &[0], 2)
                    - embed(strat.observable(1, setting).matrix(), &[1], 2)
            };
            Ok(vec![(FRAC_1_SQRT_2, t(1.0, 0)), (FRAC_1_SQRT_2, t(-1.0, 1))])
        }
        FunctionalKind::I5 => {
            let set = PseudoStabilizerSet::from_strategy(strat)?;
            let weights = [FRAC_1_SQRT_2, 0.5, FRAC_1_SQRT_2, SQRT_2];
            Ok(weights
                .iter()
                .zip(set.operators())
                .map(|(w, s)| (*w, identity(32) - s))
                .collect())
        }
    }
}

/// Operator norm of `bound * I - B - sum w T^2`.
pub fn sos_residual(strat: &MeasurementStrategy, kind: FunctionalKind) -> Result<f64> {
    let f = builtin_functional(kind);
    let b = bell_operator(&f, strat)?;
    let dim = b.nrows();
    let mut rest = identity(dim) * c(f.quantum_bound) - b;
    for (w, t) in sos_terms(strat, kind)? {
        rest -= &t * &t * c(w);
    }
    Ok(hermitian_operator_norm(&((&rest + rest.adjoint()) * c(0.5))))
}

/// `A_2 = -i [A_0, A_1] / 2` for anticommuting `A_0, A_1`.
pub fn induced_third_observable(a0: &DichotomicObservable, a1: &DichotomicObservable) -> Result<DichotomicObservable> {
    let (x, y) = (a0.matrix(), a1.matrix());
    let anti = max_abs(&(x * y + y * x));
    if anti > CHANNEL_TOL {
        return Err(Error::NotAnticommuting(anti));
    }
    DichotomicObservable::new((x * y - y * x) * (-I * 0.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code5::StabilizerSet;
    use crate::qsim::Pauli;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn optimal_pseudo_stabilizers_are_the_code_generators() {
        let set = PseudoStabilizerSet::from_strategy(&super::super::optimal_strategy(FunctionalKind::I5)).unwrap();
        for (s_tilde, s) in set.operators().iter().zip(StabilizerSet::five_qubit().matrices()) {
            assert!(max_abs(&(s_tilde - s)) < 1e-12);
        }
    }

    #[test]
    fn combination_reproduces_bell_operator() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let strat = MeasurementStrategy::random(5, &mut rng).unwrap();
        let set = PseudoStabilizerSet::from_strategy(&strat).unwrap();
        let b = bell_operator(&builtin_functional(FunctionalKind::I5), &strat).unwrap();
        assert!(max_abs(&(set.combination() - b)) < 1e-12);
    }

    #[test]
    fn sos_holds_for_optimal_and_random() {
        use super::super::optimal_strategy;
        assert!(sos_residual(&optimal_strategy(FunctionalKind::I5), FunctionalKind::I5).unwrap() < 1e-10);
        assert!(sos_residual(&optimal_strategy(FunctionalKind::Chsh), FunctionalKind::Chsh).unwrap() < 1e-10);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..3 {
            let s5 = MeasurementStrategy::random(5, &mut rng).unwrap();
            assert!(sos_residual(&s5, FunctionalKind::I5).unwrap() < 1e-10);
            let s2 = MeasurementStrategy::random(2, &mut rng).unwrap();
            assert!(sos_residual(&s2, FunctionalKind::Chsh).unwrap() < 1e-10);
        }
    }

    #[test]
    fn third_observable_signs() {
        let x = DichotomicObservable::pauli(Pauli::X);
        let y = DichotomicObservable::pauli(Pauli::Y);
        let z = DichotomicObservable::pauli(Pauli::Z);
        let a2 = induced_third_observable(&x, &z).unwrap();
        assert!(max_abs(&(a2.matrix() + Pauli::Y.matrix())) < 1e-15);
        let a2 = induced_third_observable(&x, &y).unwrap();
        assert!(max_abs(&(a2.matrix() - Pauli::Z.matrix())) < 1e-15);
        assert!(matches!(induced_third_observable(&x, &x), Err(Error::NotAnticommuting(_))));
    }
}
