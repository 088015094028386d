//! Encodes random logical qubits, checks them against the code space and
//! walks through the single-error syndrome table.

use qsgps::code5::{
    decode_syndrome, encoder_input, encoding_circuit, logical_state, random_amplitudes, stabilizer_expectations,
    syndrome_of_error, PauliError,
};
use qsgps::qsim::{apply_circuit, fidelity};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Returns the worst encoder fidelity seen.
pub fn run() -> qsgps::Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let circuit = encoding_circuit();
    let (h, cx, _) = circuit.census();
    println!("encoder: {h} H + {cx} CNOT");

    let mut worst = 1.0f64;
    for _ in 0..5 {
        let (a, b) = random_amplitudes(&mut rng);
        let encoded = apply_circuit(&encoder_input(a, b)?, &circuit)?;
        let f = fidelity(&encoded, &logical_state(a, b)?)?;
        let s = stabilizer_expectations(&encoded)?;
        println!("alpha={a:.3} beta={b:.3} fidelity={f:.12} stabilizers={s:?}");
        worst = worst.min(f);
    }

    for err in PauliError::all() {
        let syn = syndrome_of_error(err);
        println!("{err} -> {syn} -> {}", decode_syndrome(syn).map_or("-".into(), |e| e.to_string()));
    }
    Ok(worst)
}

#[allow(dead_code)]
fn main() -> qsgps::Result<()> {
    run().map(|_| ())
}
