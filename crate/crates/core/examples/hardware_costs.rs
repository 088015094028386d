//! Encoder cost on the tabulated platforms, and the fidelity actually
//! reached when the circuit runs under matching per-gate noise.

use qsgps::code5::{encoder_input, encoding_circuit, LogicalBasis};
use qsgps::qsim::fidelity;
use qsgps::qsim::linalg::{c, ZERO};
use qsgps::resource::{builtin_profiles, hardware_report, noise_channels_from_profile, simulate_noisy};

/// Returns `(profile, estimate, simulated fidelity)` per platform.
pub fn run() -> qsgps::Result<Vec<(String, f64, f64)>> {
    let circuit = encoding_circuit();
    let input = encoder_input(c(1.0), ZERO)?.to_density();
    let target = LogicalBasis::five_qubit().zero;
    let mut out = Vec::new();
    for profile in builtin_profiles() {
        let report = hardware_report(&profile, &circuit)?;
        let noisy = simulate_noisy(&circuit, &input, &noise_channels_from_profile(&profile))?;
        let simulated = fidelity(&noisy, &target)?;
        println!(
            "{:<16} t_total={:.4e} s  F_est={:.4}  F_sim={:.4}  cost={:?}",
            profile.name, report.t_total_s, report.fidelity_bound, simulated, report.cost
        );
        out.push((profile.name, report.fidelity_bound, simulated));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> qsgps::Result<()> {
    run().map(|_| ())
}
