use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{check_parties, BellFunctional, MeasurementStrategy};
use crate::qsim::{ProductSampler, QuantumState};
use crate::{Error, Result};

/// Finite-shot value of a functional with its propagated standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

/// Per-term outcome distributions for repeated estimation on one state.
#[derive(Debug, Clone)]
pub struct FunctionalSampler {
    coefficients: Vec<f64>,
    samplers: Vec<ProductSampler>,
}

impl FunctionalSampler {
    pub fn new(f: &BellFunctional, strat: &MeasurementStrategy, state: &impl QuantumState) -> Result<Self> {
        check_parties(f, strat)?;
        if state.num_qubits() != f.parties {
            return Err(Error::DimensionMismatch { expected: f.parties, found: state.num_qubits() });
        }
        let samplers = f
            .terms
            .iter()
            .map(|t| ProductSampler::new(state, &t.local_ops(strat)))
            .collect::<Result<_>>()?;
        Ok(Self { coefficients: f.terms.iter().map(|t| t.coefficient).collect(), samplers })
    }

    /// Exact value from the stored distributions.
    pub fn exact(&self) -> f64 {
        self.coefficients.iter().zip(&self.samplers).map(|(c, s)| c * s.product_mean()).sum()
    }

    /// Draws an independent batch of `shots_per_term` shots for each term,
    /// in term order.
    pub fn estimate<R: Rng + ?Sized>(&self, shots_per_term: usize, rng: &mut R) -> Result<Estimate> {
        if shots_per_term == 0 {
            return Err(Error::InvalidConfig("shots_per_term must be at least 1".into()));
        }
        let n = shots_per_term as f64;
        let mut value = 0.0;
        let mut var = 0.0;
        for (c, s) in self.coefficients.iter().zip(&self.samplers) {
            let mean = s.sample_product_sum(shots_per_term, rng) as f64 / n;
            value += c * mean;
            var += c * c * (1.0 - mean * mean) / n;
        }
        Ok(Estimate { value, stderr: var.max(0.0).sqrt() })
    }
}

/// Unbiased estimate of `f` from `shots_per_term` shots per correlator.
pub fn sample_estimate<R: Rng + ?Sized>(
    f: &BellFunctional,
    strat: &MeasurementStrategy,
    state: &impl QuantumState,
    shots_per_term: usize,
    rng: &mut R,
) -> Result<Estimate> {
    FunctionalSampler::new(f, strat, state)?.estimate(shots_per_term, rng)
}
