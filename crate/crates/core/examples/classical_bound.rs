//! Brute-force local deterministic maxima of CHSH and `I5`.

use qsgps::bell::{builtin_functional, classical_maximum, FunctionalKind};

pub fn run() -> qsgps::Result<(f64, f64)> {
    let mut out = [0.0; 2];
    for (slot, kind) in out.iter_mut().zip([FunctionalKind::Chsh, FunctionalKind::I5]) {
        let f = builtin_functional(kind);
        let (value, argmax) = classical_maximum(&f)?;
        println!("{kind}: {} strategies, maximum {value} at {argmax}", 1usize << (2 * f.parties));
        *slot = value;
    }
    Ok((out[0], out[1]))
}

#[allow(dead_code)]
fn main() -> qsgps::Result<()> {
    run().map(|_| ())
}
