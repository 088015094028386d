//! Gate counts, layer depths and the time/fidelity estimates derived from
//! them for a given hardware platform.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::qsim::{apply_channel, Circuit, DensityMatrix, Gate, KrausChannel};
use crate::{Error, Result};

/// Gate times in seconds and gate fidelities of one platform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardwareProfile {
    pub name: String,
    pub t_1q_s: f64,
    pub t_2q_s: f64,
    pub f_1q: f64,
    pub f_2q: f64,
}

impl HardwareProfile {
    pub fn new(name: impl Into<String>, t_1q_s: f64, t_2q_s: f64, f_1q: f64, f_2q: f64) -> Result<Self> {
        let p = Self { name: name.into(), t_1q_s, t_2q_s, f_1q, f_2q };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (label, t) in [("t_1q_s", self.t_1q_s), ("t_2q_s", self.t_2q_s)] {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::InvalidProfile(format!("{label} = {t} must be positive")));
            }
        }
        for (label, f) in [("f_1q", self.f_1q), ("f_2q", self.f_2q)] {
            if !(f > 0.0 && f <= 1.0) {
                return Err(Error::InvalidProfile(format!("{label} = {f} must lie in (0, 1]")));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: Self = serde_json::from_str(text)?;
        p.validate()?;
        Ok(p)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

pub fn superconducting() -> HardwareProfile {
    HardwareProfile::new("superconducting", 8.2e-9, 25e-9, 0.99997, 0.998).expect("static profile")
}

pub fn trapped_ion() -> HardwareProfile {
    HardwareProfile::new("trapped-ion", 1.32e-6, 60e-6, 0.9999985, 0.9997).expect("static profile")
}

/// Noiseless gates with superconducting timings.
pub fn ideal() -> HardwareProfile {
    HardwareProfile { name: "ideal".into(), f_1q: 1.0, f_2q: 1.0, ..superconducting() }
}

/// The two tabulated platforms.
pub fn builtin_profiles() -> Vec<HardwareProfile> {
    vec![superconducting(), trapped_ion()]
}

/// Looks up `superconducting`, `trapped-ion` or `ideal`.
pub fn profile_by_name(name: &str) -> Result<HardwareProfile> {
    builtin_profiles()
        .into_iter()
        .chain([ideal()])
        .find(|p| p.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownProfile(name.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CircuitCost {
    pub n_1q: usize,
    pub n_2q: usize,
    pub d_1q: usize,
    pub d_2q: usize,
}

/// Counts gates by arity and schedules them as soon as possible into
/// layers that hold disjoint gates of a single arity. A gate joins the
/// earliest existing layer of its class after the last layer touching its
/// qubits, otherwise a new layer is opened.
pub fn circuit_cost(circuit: &Circuit) -> Result<CircuitCost> {
    let mut layers: Vec<(usize, Vec<bool>)> = Vec::new();
    let mut last: Vec<Option<usize>> = vec![None; circuit.num_qubits()];
    let mut cost = CircuitCost::default();
    for gate in circuit.gates() {
        let arity = gate.arity();
        match arity {
            1 => cost.n_1q += 1,
            2 => cost.n_2q += 1,
            _ => return Err(Error::InvalidConfig(format!("gate {gate} has arity {arity}"))),
        }
        let qs = gate.targets();
        let start = qs.iter().filter_map(|&q| last[q]).max().map_or(0, |l| l + 1);
        let slot = (start..layers.len())
            .find(|&i| layers[i].0 == arity && qs.iter().all(|&q| !layers[i].1[q]))
            .unwrap_or_else(|| {
                layers.push((arity, vec![false; circuit.num_qubits()]));
                layers.len() - 1
            });
        for &q in qs {
            layers[slot].1[q] = true;
            last[q] = Some(slot);
        }
    }
    cost.d_1q = layers.iter().filter(|l| l.0 == 1).count();
    cost.d_2q = layers.iter().filter(|l| l.0 == 2).count();
    Ok(cost)
}

/// `d_1q t_1q + d_2q t_2q`.
pub fn total_time(profile: &HardwareProfile, cost: &CircuitCost) -> f64 {
    cost.d_1q as f64 * profile.t_1q_s + cost.d_2q as f64 * profile.t_2q_s
}

/// `F_1q^n_1q * F_2q^n_2q`, an upper estimate assuming independent noise.
pub fn fidelity_bound(profile: &HardwareProfile, cost: &CircuitCost) -> f64 {
    profile.f_1q.powi(cost.n_1q as i32) * profile.f_2q.powi(cost.n_2q as i32)
}

/// Error probabilities attached to each gate class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateNoise {
    pub p_1q: f64,
    pub p_2q: f64,
}

impl GateNoise {
    pub fn is_noiseless(&self) -> bool {
        self.p_1q == 0.0 && self.p_2q == 0.0
    }

    /// Uniform non-identity Pauli error on the gate's support.
    pub fn channel_for(&self, gate: &Gate) -> Result<KrausChannel> {
        let p = if gate.arity() == 1 { self.p_1q } else { self.p_2q };
        KrausChannel::uniform_pauli_error(p, gate.targets().to_vec())
    }
}

/// `p = 1 - F` per gate class.
pub fn noise_channels_from_profile(profile: &HardwareProfile) -> GateNoise {
    GateNoise { p_1q: 1.0 - profile.f_1q, p_2q: 1.0 - profile.f_2q }
}

/// Runs `circuit` on `input`, following every gate by its noise channel.
pub fn simulate_noisy(circuit: &Circuit, input: &DensityMatrix, noise: &GateNoise) -> Result<DensityMatrix> {
    if noise.is_noiseless() {
        return circuit.apply_to_density(input);
    }
    if input.num_qubits() != circuit.num_qubits() {
        return Err(Error::DimensionMismatch { expected: circuit.num_qubits(), found: input.num_qubits() });
    }
    circuit.gates().iter().try_fold(input.clone(), |rho, g| {
        let rho = rho.conjugated(&g.as_local_op())?;
        apply_channel(&rho, &noise.channel_for(g)?)
    })
}

/// Cost and platform estimates for one circuit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardwareReport {
    pub profile: HardwareProfile,
    pub cost: CircuitCost,
    pub t_total_s: f64,
    pub fidelity_bound: f64,
}

pub fn hardware_report(profile: &HardwareProfile, circuit: &Circuit) -> Result<HardwareReport> {
    let cost = circuit_cost(circuit)?;
    Ok(HardwareReport {
        profile: profile.clone(),
        cost,
        t_total_s: total_time(profile, &cost),
        fidelity_bound: fidelity_bound(profile, &cost),
    })
}
