use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use super::linalg::{c, hermiticity_deviation, identity, max_abs, CHANNEL_TOL, NORM_TOL};
use super::state::{LocalOp, QuantumState};
use crate::{Error, Result};

/// Checks `O = O^dagger` and `O^2 = I`.
pub fn check_dichotomic(op: &LocalOp) -> Result<()> {
    let m = op.matrix();
    let herm = hermiticity_deviation(m);
    if herm > NORM_TOL {
        return Err(Error::NotHermitian(herm));
    }
    let dev = max_abs(&(m * m - identity(m.nrows())));
    if dev > CHANNEL_TOL {
        return Err(Error::NotDichotomic(dev));
    }
    Ok(())
}

/// Exact joint outcome distribution of commuting dichotomic measurements on
/// disjoint supports, ready for repeated sampling.
///
/// Outcome tuples are indexed by a bit mask: bit `m - 1 - j` set means
/// party `j` observed `-1`.
#[derive(Debug, Clone)]
pub struct ProductSampler {
    parties: usize,
    probabilities: Vec<f64>,
    dist: WeightedIndex<f64>,
}

impl ProductSampler {
    pub fn new(state: &impl QuantumState, observables: &[LocalOp]) -> Result<Self> {
        let n = state.num_qubits();
        let mut used = vec![false; n];
        for op in observables {
            op.check_fits(n)?;
            check_dichotomic(op)?;
            for &q in op.targets() {
                if used[q] {
                    return Err(Error::OverlappingSupports);
                }
                used[q] = true;
            }
        }
        let m = observables.len();
        let projectors: Vec<[LocalOp; 2]> = observables
            .iter()
            .map(|op| {
                let id = identity(op.matrix().nrows());
                let plus = (&id + op.matrix()) * c(0.5);
                let minus = (&id - op.matrix()) * c(0.5);
                [
                    LocalOp::new_unchecked(plus, op.targets().to_vec()),
                    LocalOp::new_unchecked(minus, op.targets().to_vec()),
                ]
            })
            .collect();
        let mut probabilities = Vec::with_capacity(1 << m);
        for mask in 0..(1usize << m) {
            let ops: Vec<LocalOp> = projectors
                .iter()
                .enumerate()
                .map(|(j, pair)| pair[(mask >> (m - 1 - j)) & 1].clone())
                .collect();
            let p = state.product_expectation(&ops)?.re;
            probabilities.push(p.max(0.0));
        }
        let total: f64 = probabilities.iter().sum();
        for p in &mut probabilities {
            *p /= total;
        }
        let dist = WeightedIndex::new(&probabilities)
            .map_err(|e| Error::InvalidDensityMatrix(format!("outcome distribution: {e}")))?;
        Ok(Self { parties: m, probabilities, dist })
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Exact `<prod_j O_j>` from the outcome distribution.
    pub fn product_mean(&self) -> f64 {
        self.probabilities
            .iter()
            .enumerate()
            .map(|(mask, p)| p * Self::parity(mask) as f64)
            .sum()
    }

    pub fn sample_mask<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.dist.sample(rng)
    }

    pub fn outcomes(&self, mask: usize) -> Vec<i8> {
        (0..self.parties)
            .map(|j| if (mask >> (self.parties - 1 - j)) & 1 == 1 { -1 } else { 1 })
            .collect()
    }

    pub fn parity(mask: usize) -> i8 {
        if mask.count_ones().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Sum of outcome products over `shots` draws.
    pub fn sample_product_sum<R: Rng + ?Sized>(&self, shots: usize, rng: &mut R) -> i64 {
        (0..shots).map(|_| Self::parity(self.dist.sample(rng)) as i64).sum()
    }
}

/// Draws `shots` outcome tuples in `{-1, +1}^parties` for the given
/// per-party dichotomic observables.
pub fn sample_product_outcomes<R: Rng + ?Sized>(
    state: &impl QuantumState,
    observables: &[LocalOp],
    shots: usize,
    rng: &mut R,
) -> Result<Vec<Vec<i8>>> {
    let sampler = ProductSampler::new(state, observables)?;
    Ok((0..shots).map(|_| sampler.outcomes(sampler.sample_mask(rng))).collect())
}
