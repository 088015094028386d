//! Receiver position and clock bias from four pseudoranges, for random
//! visible constellations.

use qsgps::geoposition::{forward_pseudoranges, geometry_dilution, random_scenario, solve_fix, SolverConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Returns the largest position error in meters.
pub fn run() -> qsgps::Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let (sats, truth) = random_scenario(4, &mut rng);
        let ranges = forward_pseudoranges(truth.position, truth.clock_bias_s, &sats)?;
        let fix = solve_fix(&sats, &ranges, &SolverConfig::default())?;
        let err = fix.position.distance(&truth.position);
        println!(
            "gdop {:6.2}  iterations {}  position error {:.2e} m  bias error {:.2e} s",
            geometry_dilution(&sats, truth.position).unwrap_or(f64::NAN),
            fix.iterations,
            err,
            (fix.clock_bias - truth.clock_bias_s).abs()
        );
        worst = worst.max(err);
    }
    Ok(worst)
}

#[allow(dead_code)]
fn main() -> qsgps::Result<()> {
    run().map(|_| ())
}
