//! Receiver position and clock bias from satellite pseudoranges.
//!
//! Positions are Earth-centred Cartesian coordinates in meters, times in
//! seconds. Internally the clock bias is carried as the range offset
//! `c * b` so that all four unknowns are in meters.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::TAU;
use std::ops::{Add, Sub};

use nalgebra::{DMatrix, DVector, Matrix4, Vector4};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const EARTH_RADIUS_M: f64 = 6_371_000.0;
/// Orbital radius of the scenario generator (about 20 200 km altitude).
pub const ORBIT_RADIUS_M: f64 = 26_600_000.0;
/// Fixes closer than this are the same root.
pub const ROOT_SEPARATION_M: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EcefPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl EcefPoint {
    pub const ORIGIN: EcefPoint = EcefPoint { x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn distance(&self, other: &EcefPoint) -> f64 {
        (*self - *other).norm()
    }

    pub fn dot(&self, other: &EcefPoint) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn scaled(&self, s: f64) -> EcefPoint {
        EcefPoint::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for EcefPoint {
    type Output = EcefPoint;
    fn add(self, o: EcefPoint) -> EcefPoint {
        EcefPoint::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for EcefPoint {
    type Output = EcefPoint;
    fn sub(self, o: EcefPoint) -> EcefPoint {
        EcefPoint::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SatelliteEpoch {
    pub id: String,
    pub position: EcefPoint,
    pub transmit_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pseudorange {
    pub satellite_id: String,
    /// `c * (receive_time - transmit_time)`, meters.
    pub rho: f64,
}

/// Ground-truth receiver state of a simulated scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReceiverTruth {
    pub position: EcefPoint,
    pub clock_bias_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositionFix {
    pub position: EcefPoint,
    pub clock_bias: f64,
    /// Euclidean norm of the final range residuals, meters.
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub max_iterations: usize,
    /// Step-size tolerance, meters.
    pub tolerance: f64,
    pub initial_guess: EcefPoint,
    pub initial_bias: f64,
    /// Levenberg damping added to the normal equations.
    pub damping: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { max_iterations: 50, tolerance: 1e-9, initial_guess: EcefPoint::ORIGIN, initial_bias: 0.0, damping: 0.0 }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::InvalidSolverConfig(format!("tolerance {} must be positive", self.tolerance)));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidSolverConfig("max_iterations must be at least 1".into()));
        }
        if self.damping.is_nan() || self.damping < 0.0 {
            return Err(Error::InvalidSolverConfig(format!("damping {} must be non-negative", self.damping)));
        }
        if !self.initial_guess.is_finite() || !self.initial_bias.is_finite() {
            return Err(Error::InvalidSolverConfig("initial guess must be finite".into()));
        }
        Ok(())
    }

    pub fn starting_at(&self, position: EcefPoint, bias: f64) -> Self {
        Self { initial_guess: position, initial_bias: bias, ..self.clone() }
    }
}

/// `rho_i = |p_i - truth| + c * bias`.
pub fn forward_pseudoranges(truth: EcefPoint, bias: f64, sats: &[SatelliteEpoch]) -> Result<Vec<Pseudorange>> {
    sats.iter()
        .map(|s| {
            let d = s.position.distance(&truth);
            if d == 0.0 {
                return Err(Error::SatelliteAtReceiver(s.id.clone()));
            }
            Ok(Pseudorange { satellite_id: s.id.clone(), rho: d + SPEED_OF_LIGHT * bias })
        })
        .collect()
}

/// Rows `[(x - p_i)^T / |x - p_i|, c]` of the residual Jacobian with
/// respect to `(x, y, z, bias)`, bias in seconds. The rows do not depend
/// on the bias.
pub fn jacobian(sats: &[SatelliteEpoch], position: EcefPoint) -> Result<Vec<[f64; 4]>> {
    sats.iter()
        .map(|s| {
            let diff = position - s.position;
            let d = diff.norm();
            if d == 0.0 {
                return Err(Error::SatelliteAtReceiver(s.id.clone()));
            }
            Ok([diff.x / d, diff.y / d, diff.z / d, SPEED_OF_LIGHT])
        })
        .collect()
}

/// `r_i = |p_i - x| + c b - rho_i`, meters.
pub fn residuals(sats: &[SatelliteEpoch], ranges: &[f64], position: EcefPoint, bias: f64) -> Vec<f64> {
    sats.iter()
        .zip(ranges)
        .map(|(s, rho)| s.position.distance(&position) + SPEED_OF_LIGHT * bias - rho)
        .collect()
}

/// Ranges in satellite order, after checking that ids pair up one to one.
fn matched_ranges(sats: &[SatelliteEpoch], ranges: &[Pseudorange]) -> Result<Vec<f64>> {
    if sats.len() < 4 {
        return Err(Error::TooFewSatellites { required: 4, found: sats.len() });
    }
    let mut ids = BTreeSet::new();
    for s in sats {
        if !ids.insert(s.id.as_str()) {
            return Err(Error::IdMismatch(format!("duplicate satellite id {}", s.id)));
        }
    }
    let mut by_id = BTreeMap::new();
    for r in ranges {
        if by_id.insert(r.satellite_id.as_str(), r.rho).is_some() {
            return Err(Error::IdMismatch(format!("duplicate range for {}", r.satellite_id)));
        }
        if !(r.rho > 0.0 && r.rho.is_finite()) {
            return Err(Error::IdMismatch(format!("range for {} is {}", r.satellite_id, r.rho)));
        }
    }
    if by_id.len() != sats.len() {
        return Err(Error::IdMismatch(format!("{} satellites but {} ranges", sats.len(), by_id.len())));
    }
    sats.iter()
        .map(|s| by_id.get(s.id.as_str()).copied().ok_or_else(|| Error::IdMismatch(format!("no range for {}", s.id))))
        .collect()
}

/// Smallest step the arithmetic can resolve at this coordinate scale.
fn resolution_floor(sats: &[SatelliteEpoch], x: &Vector4<f64>) -> f64 {
    let scale = sats
        .iter()
        .map(|s| s.position.norm())
        .chain([x.xyz().norm(), x[3].abs()])
        .fold(1.0, f64::max);
    64.0 * f64::EPSILON * scale
}

const SINGULAR_RATIO: f64 = 1e-12;

/// Gauss-Newton solve for position and clock bias.
///
/// Iteration stops once the update (position and `c * b`, meters) is below
/// `cfg.tolerance`, or below the rounding floor of the coordinates when
/// that is larger, or once every residual is at the rounding level of the
/// ranges themselves.
pub fn solve_fix(sats: &[SatelliteEpoch], ranges: &[Pseudorange], cfg: &SolverConfig) -> Result<PositionFix> {
    cfg.validate()?;
    let rho = matched_ranges(sats, ranges)?;
    let m = sats.len();
    let mut x = Vector4::new(cfg.initial_guess.x, cfg.initial_guess.y, cfg.initial_guess.z, SPEED_OF_LIGHT * cfg.initial_bias);
    let point = |x: &Vector4<f64>| EcefPoint::new(x[0], x[1], x[2]);
    let finish = |x: &Vector4<f64>, iterations: usize| {
        let position = point(x);
        let bias = x[3] / SPEED_OF_LIGHT;
        let res = residuals(sats, &rho, position, bias);
        PositionFix {
            position,
            clock_bias: bias,
            residual_norm: res.iter().map(|v| v * v).sum::<f64>().sqrt(),
            iterations,
            converged: true,
        }
    };
    // ranges consistent to rounding: already at a root
    let range_floor = 64.0 * f64::EPSILON * rho.iter().fold(1.0, |a: f64, b| a.max(b.abs()));
    let mut residual_norm = f64::INFINITY;
    for it in 1..=cfg.max_iterations {
        let mut jac = DMatrix::<f64>::zeros(m, 4);
        let mut r = DVector::<f64>::zeros(m);
        for (i, s) in sats.iter().enumerate() {
            let diff = point(&x) - s.position;
            let d = diff.norm();
            if d == 0.0 {
                return Err(Error::SingularGeometry);
            }
            jac[(i, 0)] = diff.x / d;
            jac[(i, 1)] = diff.y / d;
            jac[(i, 2)] = diff.z / d;
            jac[(i, 3)] = 1.0;
            r[i] = d + x[3] - rho[i];
        }
        residual_norm = r.norm();
        let sv = jac.singular_values();
        let (hi, lo) = (sv.max(), sv.min());
        if lo.is_nan() || lo <= SINGULAR_RATIO * hi {
            return Err(Error::SingularGeometry);
        }
        if residual_norm <= range_floor {
            return Ok(finish(&x, it));
        }
        let step: Vector4<f64> = if m == 4 && cfg.damping == 0.0 {
            let square = Matrix4::from_iterator(jac.iter().copied());
            let rhs = Vector4::from_iterator(r.iter().map(|v| -v));
            square.lu().solve(&rhs).ok_or(Error::SingularGeometry)?
        } else {
            let normal = jac.transpose() * &jac + DMatrix::identity(4, 4) * cfg.damping;
            let rhs = -(jac.transpose() * &r);
            let normal = Matrix4::from_iterator(normal.iter().copied());
            let rhs = Vector4::from_iterator(rhs.iter().copied());
            normal.cholesky().ok_or(Error::SingularGeometry)?.solve(&rhs)
        };
        x += step;
        if !x.iter().all(|v| v.is_finite()) {
            break;
        }
        if step.norm() <= cfg.tolerance.max(resolution_floor(sats, &x)) {
            return Ok(finish(&x, it));
        }
    }
    Err(Error::NotConverged { iterations: cfg.max_iterations, residual_norm })
}

/// Converged fixes from each starting point `(position, bias)`, keeping one
/// representative per root, in order of first appearance.
pub fn enumerate_roots(
    sats: &[SatelliteEpoch],
    ranges: &[Pseudorange],
    cfg: &SolverConfig,
    starts: &[(EcefPoint, f64)],
) -> Vec<PositionFix> {
    let mut roots: Vec<PositionFix> = Vec::new();
    for (p, b) in starts {
        if let Ok(fix) = solve_fix(sats, ranges, &cfg.starting_at(*p, *b)) {
            let same = |other: &PositionFix| {
                other.position.distance(&fix.position) < ROOT_SEPARATION_M
                    && SPEED_OF_LIGHT * (other.clock_bias - fix.clock_bias).abs() < ROOT_SEPARATION_M
            };
            if !roots.iter().any(same) {
                roots.push(fix);
            }
        }
    }
    roots
}

/// Satellites, truth and (optionally) measured ranges of one positioning
/// problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub satellites: Vec<SatelliteEpoch>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truth: Option<ReceiverTruth>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pseudoranges: Option<Vec<Pseudorange>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverConfig>,
}

impl Scenario {
    /// Measured ranges if given, otherwise the forward model at the truth.
    pub fn ranges(&self) -> Result<Vec<Pseudorange>> {
        match (&self.pseudoranges, &self.truth) {
            (Some(r), _) => Ok(r.clone()),
            (None, Some(t)) => forward_pseudoranges(t.position, t.clock_bias_s, &self.satellites),
            (None, None) => Err(Error::InvalidConfig("scenario needs pseudoranges or a truth".into())),
        }
    }

    pub fn solve(&self) -> Result<PositionFix> {
        solve_fix(&self.satellites, &self.ranges()?, &self.solver.clone().unwrap_or_default())
    }
}

/// Minimum satellite elevation above the receiver's horizon for
/// [`random_scenario`].
pub const MIN_ELEVATION_DEG: f64 = 15.0;

fn random_unit<R: Rng + ?Sized>(rng: &mut R) -> EcefPoint {
    let z: f64 = rng.gen_range(-1.0..1.0);
    let phi = rng.gen::<f64>() * TAU;
    let s = (1.0 - z * z).sqrt();
    EcefPoint::new(s * phi.cos(), s * phi.sin(), z)
}

/// Receiver on the Earth shell with `|bias| <= 10 ms` and `count`
/// satellites on the orbit shell, all above [`MIN_ELEVATION_DEG`] and with
/// a well-conditioned geometry at the truth.
pub fn random_scenario<R: Rng + ?Sized>(count: usize, rng: &mut R) -> (Vec<SatelliteEpoch>, ReceiverTruth) {
    let truth = random_unit(rng).scaled(EARTH_RADIUS_M);
    let up = truth.scaled(1.0 / EARTH_RADIUS_M);
    let min_sin = MIN_ELEVATION_DEG.to_radians().sin();
    let bias = rng.gen_range(-0.01..=0.01);
    loop {
        let mut sats = Vec::with_capacity(count);
        while sats.len() < count {
            let p = random_unit(rng).scaled(ORBIT_RADIUS_M);
            let los = p - truth;
            if los.dot(&up) / los.norm() > min_sin {
                sats.push(SatelliteEpoch { id: format!("SV{}", sats.len() + 1), position: p, transmit_time: 0.0 });
            }
        }
        if geometry_dilution(&sats, truth).is_some_and(|g| g < 20.0) {
            return (sats, ReceiverTruth { position: truth, clock_bias_s: bias });
        }
    }
}

/// Geometric dilution of precision at `position`, `None` when singular.
pub fn geometry_dilution(sats: &[SatelliteEpoch], position: EcefPoint) -> Option<f64> {
    let mut normal = Matrix4::<f64>::zeros();
    for s in sats {
        let diff = position - s.position;
        let d = diff.norm();
        let row = Vector4::new(diff.x / d, diff.y / d, diff.z / d, 1.0);
        normal += row * row.transpose();
    }
    normal.try_inverse().map(|inv| inv.trace().sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sat(id: &str, x: f64, y: f64, z: f64) -> SatelliteEpoch {
        SatelliteEpoch { id: id.into(), position: EcefPoint::new(x, y, z), transmit_time: 0.0 }
    }

    fn spread_four() -> Vec<SatelliteEpoch> {
        vec![
            sat("a", 26_600_000.0, 0.0, 0.0),
            sat("b", 18_000_000.0, 19_000_000.0, 3_000_000.0),
            sat("c", 17_000_000.0, -9_000_000.0, 18_000_000.0),
            sat("d", 19_000_000.0, -4_000_000.0, -18_000_000.0),
        ]
    }

    #[test]
    fn forward_model() {
        let truth = EcefPoint::new(EARTH_RADIUS_M, 0.0, 0.0);
        let s = [sat("a", EARTH_RADIUS_M + 20_200_000.0, 0.0, 0.0)];
        assert_eq!(forward_pseudoranges(truth, 0.0, &s).unwrap()[0].rho, 20_200_000.0);
        let shifted = forward_pseudoranges(truth, 1e-3, &s).unwrap()[0].rho;
        assert!((shifted - 20_200_000.0 - 299_792.458).abs() < 1e-8);
        assert!(matches!(forward_pseudoranges(truth, 0.0, &[sat("x", EARTH_RADIUS_M, 0.0, 0.0)]), Err(Error::SatelliteAtReceiver(_))));
    }

    #[test]
    fn four_satellite_roundtrip() {
        let truth = EcefPoint::new(EARTH_RADIUS_M, 0.0, 0.0);
        let sats = spread_four();
        let ranges = forward_pseudoranges(truth, 1e-3, &sats).unwrap();
        let fix = solve_fix(&sats, &ranges, &SolverConfig::default()).unwrap();
        assert!(fix.converged);
        assert!(fix.position.distance(&truth) < 1e-3);
        assert!((fix.clock_bias - 1e-3).abs() < 1e-11);
    }

    #[test]
    fn start_at_truth_is_a_fixed_point() {
        let truth = EcefPoint::new(EARTH_RADIUS_M, 0.0, 0.0);
        let sats = spread_four();
        let ranges = forward_pseudoranges(truth, 2e-4, &sats).unwrap();
        let fix = solve_fix(&sats, &ranges, &SolverConfig::default().starting_at(truth, 2e-4)).unwrap();
        assert!(fix.iterations <= 2);
        assert!(fix.residual_norm < 1e-9);
    }

    #[test]
    fn over_determined_reports_residual() {
        let truth = EcefPoint::new(EARTH_RADIUS_M, 0.0, 0.0);
        let mut sats = spread_four();
        sats.push(sat("e", 20_000_000.0, 10_000_000.0, -14_000_000.0));
        let mut ranges = forward_pseudoranges(truth, 0.0, &sats).unwrap();
        ranges[4].rho += 10.0;
        let fix = solve_fix(&sats, &ranges, &SolverConfig::default()).unwrap();
        assert!(fix.converged && fix.residual_norm > 1.0);
    }

    #[test]
    fn input_errors() {
        let truth = EcefPoint::new(EARTH_RADIUS_M, 0.0, 0.0);
        let sats = spread_four();
        let ranges = forward_pseudoranges(truth, 0.0, &sats).unwrap();
        assert!(matches!(solve_fix(&sats[..3], &ranges[..3], &SolverConfig::default()), Err(Error::TooFewSatellites { .. })));
        let mut wrong = ranges.clone();
        wrong[0].satellite_id = "zz".into();
        assert!(matches!(solve_fix(&sats, &wrong, &SolverConfig::default()), Err(Error::IdMismatch(_))));
        let cfg = SolverConfig { max_iterations: 1, ..SolverConfig::default() };
        assert!(matches!(solve_fix(&sats, &ranges, &cfg), Err(Error::NotConverged { .. })));
        let cfg = SolverConfig { tolerance: 0.0, ..SolverConfig::default() };
        assert!(matches!(solve_fix(&sats, &ranges, &cfg), Err(Error::InvalidSolverConfig(_))));
    }

    #[test]
    fn collinear_geometry_is_singular() {
        let sats: Vec<_> = (1..=4).map(|k| sat(&k.to_string(), 1.0e7 * k as f64, 0.0, 0.0)).collect();
        let ranges: Vec<_> = sats.iter().map(|s| Pseudorange { satellite_id: s.id.clone(), rho: 1.0e7 }).collect();
        let cfg = SolverConfig::default().starting_at(EcefPoint::new(0.0, 1.0e6, 0.0), 0.0);
        assert!(matches!(solve_fix(&sats, &ranges, &cfg), Err(Error::SingularGeometry)));
    }

    #[test]
    fn square_geometry_has_mirrored_roots() {
        let h = 20_000_000.0;
        let a = 10_000_000.0;
        let sats = vec![sat("1", a, a, h), sat("2", -a, a, h), sat("3", -a, -a, h), sat("4", a, -a, h)];
        let truth = EcefPoint::new(1_000_000.0, 2_000_000.0, EARTH_RADIUS_M);
        let ranges = forward_pseudoranges(truth, 0.0, &sats).unwrap();
        // the square's axis is a singular locus, so start away from it
        let starts = [(EcefPoint::new(2e6, 3e6, 0.0), 0.0), (EcefPoint::new(2e6, 3e6, 2.0 * h), 0.0)];
        let roots = enumerate_roots(&sats, &ranges, &SolverConfig::default(), &starts);
        assert_eq!(roots.len(), 2);
        let mirror = EcefPoint::new(truth.x, truth.y, 2.0 * h - truth.z);
        assert!(roots.iter().any(|r| r.position.distance(&truth) < 1e-3));
        assert!(roots.iter().any(|r| r.position.distance(&mirror) < 1e-3));
    }

    #[test]
    fn random_scenarios_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let (sats, truth) = random_scenario(4, &mut rng);
            let ranges = forward_pseudoranges(truth.position, truth.clock_bias_s, &sats).unwrap();
            let fix = solve_fix(&sats, &ranges, &SolverConfig::default()).unwrap();
            assert!(fix.position.distance(&truth.position) < 1e-3);
            assert!((fix.clock_bias - truth.clock_bias_s).abs() < 1e-11);
        }
    }
}
