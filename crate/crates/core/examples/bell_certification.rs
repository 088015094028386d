//! CHSH on a Bell pair and `I5` on the code state: exact values, finite-shot
//! estimates and the sum-of-squares residuals that certify the bounds.

use qsgps::bell::{
    bell_pair, builtin_functional, evaluate, optimal_strategy, sample_estimate, sos_residual, FunctionalKind,
    MeasurementStrategy,
};
use qsgps::code5::LogicalBasis;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Returns the exact `(CHSH, I5)` values.
pub fn run() -> qsgps::Result<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let chsh = builtin_functional(FunctionalKind::Chsh);
    let i5 = builtin_functional(FunctionalKind::I5);
    let opt2 = optimal_strategy(FunctionalKind::Chsh);
    let opt5 = optimal_strategy(FunctionalKind::I5);
    let code = LogicalBasis::five_qubit().zero;

    let v2 = evaluate(&chsh, &opt2, &bell_pair())?;
    let v5 = evaluate(&i5, &opt5, &code)?;
    let e2 = sample_estimate(&chsh, &opt2, &bell_pair(), 10_000, &mut rng)?;
    let e5 = sample_estimate(&i5, &opt5, &code, 10_000, &mut rng)?;
    println!("CHSH exact {v2:.6}  sampled {:.4} +/- {:.4}  bound {:.6}", e2.value, e2.stderr, chsh.quantum_bound);
    println!("I5   exact {v5:.6}  sampled {:.4} +/- {:.4}  bound {:.6}", e5.value, e5.stderr, i5.quantum_bound);

    let random = MeasurementStrategy::random(5, &mut rng)?;
    println!("SOS residual, optimal: {:.2e}", sos_residual(&opt5, FunctionalKind::I5)?);
    println!("SOS residual, random:  {:.2e}", sos_residual(&random, FunctionalKind::I5)?);
    Ok((v2, v5))
}

#[allow(dead_code)]
fn main() -> qsgps::Result<()> {
    run().map(|_| ())
}
