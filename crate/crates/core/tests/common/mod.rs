#![allow(dead_code)]

use qsgps::qsim::linalg::{c, identity, CMatrix, C64, I};
use qsgps::qsim::{Pauli, Statevector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gaussian amplitudes, normalized.
pub fn random_state(n: usize, rng: &mut impl Rng) -> Statevector {
    let normal = |rng: &mut dyn rand::RngCore| {
        let u1: f64 = rng.gen::<f64>().max(1e-300);
        let u2: f64 = rng.gen();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    };
    let amps: Vec<C64> = (0..1usize << n).map(|_| C64::new(normal(rng), normal(rng))).collect();
    Statevector::normalized(amps).unwrap()
}

/// `exp(-i angle n.sigma / 2)` about a random axis.
pub fn random_su2(rng: &mut impl Rng) -> CMatrix {
    let z: f64 = 1.0 - 2.0 * rng.gen::<f64>();
    let phi = std::f64::consts::TAU * rng.gen::<f64>();
    let r = (1.0 - z * z).max(0.0).sqrt();
    let n = [r * phi.cos(), r * phi.sin(), z];
    let angle = std::f64::consts::TAU * rng.gen::<f64>();
    let gen = Pauli::X.matrix() * c(n[0]) + Pauli::Y.matrix() * c(n[1]) + Pauli::Z.matrix() * c(n[2]);
    identity(2) * c((angle / 2.0).cos()) - gen * (I * (angle / 2.0).sin())
}
