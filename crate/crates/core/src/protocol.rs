//! One positioning task: every satellite generates a code state on noisy
//! hardware, the state may be tampered with in transit, the receiver
//! optionally corrects it and certifies it with the `I5` test, and
//! certified rounds contribute a pseudorange to the fix.
//!
//! Each round uses its own code state (one per satellite broadcast).

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::adversary::{apply_attack, AttackModel, AttackSpec, DEFAULT_THRESHOLD};
use crate::bell::{builtin_functional, optimal_strategy, sample_estimate, FunctionalKind};
use crate::code5::{encoder_input, encoding_circuit, measure_and_correct, PauliError, Syndrome};
use crate::geoposition::{
    forward_pseudoranges, solve_fix, PositionFix, Pseudorange, ReceiverTruth, SatelliteEpoch, SolverConfig,
    SPEED_OF_LIGHT,
};
use crate::qsim::linalg::{c, ZERO};
use crate::qsim::DensityMatrix;
use crate::resource::{circuit_cost, noise_channels_from_profile, profile_by_name, simulate_noisy, total_time, HardwareProfile};
use crate::{Error, Result};

/// Seed used when a config or command line gives none.
pub const DEFAULT_SEED: u64 = 20_200;
pub const DEFAULT_SHOTS_PER_TERM: usize = 10_000;

/// A built-in profile name or an inline profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HardwareSpec {
    Named(String),
    Inline(HardwareProfile),
}

impl Default for HardwareSpec {
    fn default() -> Self {
        HardwareSpec::Named("ideal".into())
    }
}

impl HardwareSpec {
    pub fn resolve(&self) -> Result<HardwareProfile> {
        match self {
            HardwareSpec::Named(name) => profile_by_name(name),
            HardwareSpec::Inline(p) => {
                p.validate()?;
                Ok(p.clone())
            }
        }
    }
}

fn default_shots() -> usize {
    DEFAULT_SHOTS_PER_TERM
}

fn default_threshold() -> f64 {
    DEFAULT_THRESHOLD
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolConfig {
    #[serde(default)]
    pub hardware: HardwareSpec,
    #[serde(default = "default_shots")]
    pub shots_per_term: usize,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    /// Attack applied to every round unless overridden.
    #[serde(default)]
    pub attack: AttackSpec,
    /// Per-satellite overrides of `attack`, keyed by satellite id.
    #[serde(default)]
    pub round_attacks: BTreeMap<String, AttackSpec>,
    #[serde(default)]
    pub correction_enabled: bool,
    pub satellites: Vec<SatelliteEpoch>,
    pub truth: ReceiverTruth,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Probability that a round's photons are lost.
    #[serde(default)]
    pub jamming_probability: f64,
    #[serde(default)]
    pub solver: SolverConfig,
}

impl ProtocolConfig {
    pub fn new(satellites: Vec<SatelliteEpoch>, truth: ReceiverTruth) -> Self {
        Self {
            hardware: HardwareSpec::default(),
            shots_per_term: DEFAULT_SHOTS_PER_TERM,
            threshold: DEFAULT_THRESHOLD,
            attack: AttackSpec::None,
            round_attacks: BTreeMap::new(),
            correction_enabled: false,
            satellites,
            truth,
            seed: DEFAULT_SEED,
            jamming_probability: 0.0,
            solver: SolverConfig::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.satellites.len() < 4 {
            return Err(Error::TooFewSatellites { required: 4, found: self.satellites.len() });
        }
        let mut ids = BTreeSet::new();
        for s in &self.satellites {
            if !ids.insert(s.id.as_str()) {
                return Err(Error::InvalidConfig(format!("duplicate satellite id {}", s.id)));
            }
        }
        if let Some(id) = self.round_attacks.keys().find(|id| !ids.contains(id.as_str())) {
            return Err(Error::UnknownSatellite(id.clone()));
        }
        if self.shots_per_term == 0 {
            return Err(Error::InvalidConfig("shots_per_term must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.jamming_probability) {
            return Err(Error::InvalidConfig(format!("jamming_probability {} outside [0, 1]", self.jamming_probability)));
        }
        if self.threshold.is_nan() {
            return Err(Error::InvalidConfig("threshold is NaN".into()));
        }
        self.hardware.resolve()?;
        self.solver.validate()?;
        for spec in std::iter::once(&self.attack).chain(self.round_attacks.values()) {
            spec.resolve()?;
        }
        Ok(())
    }

    pub fn attack_for(&self, satellite_id: &str) -> &AttackSpec {
        self.round_attacks.get(satellite_id).unwrap_or(&self.attack)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round_index: usize,
    pub satellite_id: String,
    pub attack: String,
    /// Photons lost; nothing was measured.
    pub jammed: bool,
    pub i5_estimate: Option<f64>,
    pub i5_stderr: Option<f64>,
    pub certified: bool,
    pub syndrome: Option<Syndrome>,
    pub correction: Option<PauliError>,
    /// Present iff `certified`.
    pub pseudorange: Option<Pseudorange>,
    pub transmit_time: f64,
    /// Receiver clock reading at arrival, present iff `certified`.
    pub receive_time: Option<f64>,
    pub generation_time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectionKind {
    /// `I5` estimate below the threshold.
    Uncertified,
    /// A non-trivial syndrome was measured and corrected.
    Corrected,
    Jammed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionEvent {
    pub round_index: usize,
    pub satellite_id: String,
    pub kind: DetectionKind,
    pub syndrome: Option<Syndrome>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskStatus {
    /// A fix was obtained and nothing suspicious happened.
    Fix,
    /// A fix was obtained despite detection events.
    FixWithDetections,
    /// Too few certified rounds for a fix.
    NoFix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolReport {
    pub seed: u64,
    pub hardware: HardwareProfile,
    pub rounds: Vec<RoundRecord>,
    pub certified_rounds: usize,
    pub fix: Option<PositionFix>,
    /// Distance between the fix and the configured truth, meters.
    pub fix_error_m: Option<f64>,
    pub detection_events: Vec<DetectionEvent>,
    /// Sum of the per-round generation times, seconds.
    pub total_simulated_time: f64,
    pub status: TaskStatus,
}

/// Per-config quantities shared by all rounds.
struct Prepared {
    profile: HardwareProfile,
    code_state: DensityMatrix,
    generation_time: f64,
}

fn prepare(cfg: &ProtocolConfig) -> Result<Prepared> {
    cfg.validate()?;
    let profile = cfg.hardware.resolve()?;
    let circuit = encoding_circuit();
    let input = encoder_input(c(1.0), ZERO)?.to_density();
    let code_state = simulate_noisy(&circuit, &input, &noise_channels_from_profile(&profile))?;
    let generation_time = total_time(&profile, &circuit_cost(&circuit)?);
    Ok(Prepared { profile, code_state, generation_time })
}

/// Generator for round `index`: stream `index` of the master seed.
pub fn round_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn execute_round<R: Rng + ?Sized>(
    cfg: &ProtocolConfig,
    prep: &Prepared,
    index: usize,
    satellite: &SatelliteEpoch,
    rng: &mut R,
) -> Result<RoundRecord> {
    let attack = cfg.attack_for(&satellite.id).resolve()?;
    let mut record = RoundRecord {
        round_index: index,
        satellite_id: satellite.id.clone(),
        attack: attack.label(),
        jammed: false,
        i5_estimate: None,
        i5_stderr: None,
        certified: false,
        syndrome: None,
        correction: None,
        pseudorange: None,
        transmit_time: satellite.transmit_time,
        receive_time: None,
        generation_time: prep.generation_time,
    };
    // drawn unconditionally so the stream layout does not depend on the probability
    let loss_draw: f64 = rng.gen();
    if loss_draw < cfg.jamming_probability {
        record.jammed = true;
        return Ok(record);
    }
    let mut state = apply_attack(&prep.code_state, &attack)?;
    if cfg.correction_enabled {
        let rec = measure_and_correct(&state, rng)?;
        record.syndrome = Some(rec.syndrome);
        record.correction = rec.correction;
        state = rec.state;
    }
    let est = sample_estimate(
        &builtin_functional(FunctionalKind::I5),
        &optimal_strategy(FunctionalKind::I5),
        &state,
        cfg.shots_per_term,
        rng,
    )?;
    record.i5_estimate = Some(est.value);
    record.i5_stderr = Some(est.stderr);
    record.certified = est.value >= cfg.threshold;
    if record.certified {
        let range = forward_pseudoranges(cfg.truth.position, cfg.truth.clock_bias_s, std::slice::from_ref(satellite))?
            .remove(0);
        record.receive_time = Some(satellite.transmit_time + range.rho / SPEED_OF_LIGHT);
        record.pseudorange = Some(range);
    }
    Ok(record)
}

/// Runs the round for `satellite_id` with the caller's generator.
pub fn run_round<R: Rng + ?Sized>(cfg: &ProtocolConfig, satellite_id: &str, rng: &mut R) -> Result<RoundRecord> {
    let (index, sat) = cfg
        .satellites
        .iter()
        .enumerate()
        .find(|(_, s)| s.id == satellite_id)
        .ok_or_else(|| Error::UnknownSatellite(satellite_id.to_string()))?;
    let prep = prepare(cfg)?;
    execute_round(cfg, &prep, index, sat, rng)
}

fn detection_events(rounds: &[RoundRecord]) -> Vec<DetectionEvent> {
    let mut events = Vec::new();
    for r in rounds {
        let event = |kind| DetectionEvent {
            round_index: r.round_index,
            satellite_id: r.satellite_id.clone(),
            kind,
            syndrome: r.syndrome,
        };
        if r.jammed {
            events.push(event(DetectionKind::Jammed));
            continue;
        }
        if r.syndrome.is_some_and(|s| !s.is_trivial()) {
            events.push(event(DetectionKind::Corrected));
        }
        if !r.certified {
            events.push(event(DetectionKind::Uncertified));
        }
    }
    events
}

/// One round per satellite in config order, each on its own stream of
/// `cfg.seed`, then a fix from the certified rounds when there are at
/// least four of them.
pub fn run_task(cfg: &ProtocolConfig) -> Result<ProtocolReport> {
    let prep = prepare(cfg)?;
    let rounds = cfg
        .satellites
        .iter()
        .enumerate()
        .map(|(i, sat)| execute_round(cfg, &prep, i, sat, &mut round_rng(cfg.seed, i)))
        .collect::<Result<Vec<_>>>()?;
    let certified: Vec<&RoundRecord> = rounds.iter().filter(|r| r.certified).collect();
    let fix = if certified.len() >= 4 {
        let sats: Vec<SatelliteEpoch> = certified
            .iter()
            .map(|r| cfg.satellites[r.round_index].clone())
            .collect();
        let ranges: Vec<Pseudorange> = certified.iter().filter_map(|r| r.pseudorange.clone()).collect();
        Some(solve_fix(&sats, &ranges, &cfg.solver)?)
    } else {
        None
    };
    let detection_events = detection_events(&rounds);
    let status = match (&fix, detection_events.is_empty()) {
        (Some(_), true) => TaskStatus::Fix,
        (Some(_), false) => TaskStatus::FixWithDetections,
        (None, _) => TaskStatus::NoFix,
    };
    Ok(ProtocolReport {
        seed: cfg.seed,
        hardware: prep.profile,
        certified_rounds: certified.len(),
        fix_error_m: fix.as_ref().map(|f| f.position.distance(&cfg.truth.position)),
        fix,
        detection_events,
        total_simulated_time: rounds.iter().map(|r| r.generation_time).sum(),
        rounds,
        status,
    })
}

/// Resolved attack of every round, in satellite order.
pub fn round_attacks(cfg: &ProtocolConfig) -> Result<Vec<AttackModel>> {
    cfg.satellites.iter().map(|s| cfg.attack_for(&s.id).resolve()).collect()
}

/// Four well-spread satellites over a receiver on the equator.
pub fn demo_config() -> ProtocolConfig {
    let sat = |id: &str, x: f64, y: f64, z: f64, t: f64| SatelliteEpoch {
        id: id.into(),
        position: crate::geoposition::EcefPoint::new(x, y, z),
        transmit_time: t,
    };
    let satellites = vec![
        sat("SV1", 26_600_000.0, 0.0, 0.0, 0.0),
        sat("SV2", 18_000_000.0, 19_000_000.0, 3_000_000.0, 1e-3),
        sat("SV3", 17_000_000.0, -9_000_000.0, 18_000_000.0, 2e-3),
        sat("SV4", 19_000_000.0, -4_000_000.0, -18_000_000.0, 3e-3),
    ];
    let truth = ReceiverTruth {
        position: crate::geoposition::EcefPoint::new(crate::geoposition::EARTH_RADIUS_M, 0.0, 0.0),
        clock_bias_s: 1e-3,
    };
    ProtocolConfig::new(satellites, truth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::Pauli;

    fn x1() -> AttackSpec {
        AttackSpec::Pauli { errors: vec![PauliError::new(1, Pauli::X).unwrap()] }
    }

    #[test]
    fn clean_run_fixes_position() {
        let report = run_task(&demo_config()).unwrap();
        assert_eq!(report.certified_rounds, 4);
        assert!(report.fix_error_m.unwrap() < 1e-3);
        assert_eq!(report.status, TaskStatus::Fix);
        assert!(report.rounds.iter().all(|r| r.pseudorange.is_some() == r.certified));
        assert!((report.total_simulated_time - 4.0 * 216.4e-9).abs() < 1e-15);
    }

    #[test]
    fn attacked_round_blocks_the_fix() {
        let mut cfg = demo_config();
        cfg.shots_per_term = 2000;
        cfg.round_attacks.insert("SV2".into(), x1());
        let report = run_task(&cfg).unwrap();
        assert_eq!(report.certified_rounds, 3);
        assert!(report.fix.is_none());
        assert_eq!(report.detection_events.len(), 1);
        assert_eq!(report.detection_events[0].kind, DetectionKind::Uncertified);

        cfg.correction_enabled = true;
        let report = run_task(&cfg).unwrap();
        assert_eq!(report.certified_rounds, 4);
        assert_eq!(report.status, TaskStatus::FixWithDetections);
        assert_eq!(report.rounds[1].syndrome, Some(Syndrome([0, 0, 0, 1])));
        assert_eq!(report.detection_events[0].kind, DetectionKind::Corrected);
    }

    #[test]
    fn deterministic_and_validated() {
        let mut cfg = demo_config();
        cfg.shots_per_term = 500;
        cfg.jamming_probability = 0.5;
        let a = serde_json::to_string(&run_task(&cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&run_task(&cfg).unwrap()).unwrap();
        assert_eq!(a, b);
        cfg.satellites.pop();
        assert!(matches!(run_task(&cfg), Err(Error::TooFewSatellites { .. })));
        let cfg = demo_config();
        let mut rng = round_rng(1, 0);
        assert!(matches!(run_round(&cfg, "nope", &mut rng), Err(Error::UnknownSatellite(_))));
    }

    #[test]
    fn config_json_defaults() {
        let json = serde_json::to_string(&demo_config()).unwrap();
        let back = ProtocolConfig::from_json(&json).unwrap();
        assert_eq!(back, demo_config());
        let minimal = r#"{"satellites":[],"truth":{"position":{"x":0,"y":0,"z":0},"clock_bias_s":0}}"#;
        assert!(matches!(ProtocolConfig::from_json(minimal), Err(Error::TooFewSatellites { .. })));
        let typo = json.replacen("\"seed\"", "\"sede\"", 1);
        assert!(ProtocolConfig::from_json(&typo).is_err());
    }
}
