//! How an eavesdropper's tampering shows up in the `I5` test: exact values
//! for every single-qubit Pauli, the classical forgery, and Monte Carlo
//! detection rates at a finite shot budget.

use qsgps::adversary::{attack_sweep, classical_forgery, detection_probability, AttackModel, DEFAULT_THRESHOLD};
use qsgps::qsim::Pauli;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Returns the largest exact `I5` over the single-qubit Pauli attacks.
pub fn run() -> qsgps::Result<f64> {
    let rows = attack_sweep(&AttackModel::all_single_pauli(), DEFAULT_THRESHOLD, true)?;
    for r in &rows {
        println!(
            "{:<3} I5={:+.5} certified={} corrected={}",
            r.label, r.i5_value, r.certified, r.corrected
        );
    }
    let worst = rows.iter().map(|r| r.i5_value).fold(f64::NEG_INFINITY, f64::max);
    println!("largest attacked value {worst:.5}");
    println!("classical forgery reaches {:.5}", classical_forgery().i5_value);

    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for attack in [AttackModel::NoAttack, AttackModel::single_pauli(5, Pauli::Z)?] {
        let stats = detection_probability(&attack, 1_000, DEFAULT_THRESHOLD, 50, &mut rng)?;
        println!(
            "{attack}: detected {}/{} (95% CI {:.3}..{:.3})",
            stats.detections, stats.trials, stats.wilson_low, stats.wilson_high
        );
    }
    Ok(worst)
}

#[allow(dead_code)]
fn main() -> qsgps::Result<()> {
    run().map(|_| ())
}
