//! Tampering and noise applied to a five-qubit code state between
//! generation and measurement, and how visible it is to the `I5` test.
//!
//! Qubits are labelled 1..=5 here, as in [`PauliError`].

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bell::{
    builtin_functional, classical_maximum, evaluate, optimal_strategy, FunctionalKind, FunctionalSampler,
    I5_CLASSICAL_BOUND, I5_QUANTUM_BOUND,
};
use crate::code5::{correct_exactly, decode_syndrome, LogicalBasis, PauliError, Syndrome, NUM_QUBITS};
use crate::qsim::linalg::{c, identity, kron_all, CMatrix};
use crate::qsim::{apply_channel, DensityMatrix, Gate, KrausChannel, Pauli};
use crate::{Error, Result};

/// Default certification threshold: the classical bound of `I5`.
pub const DEFAULT_THRESHOLD: f64 = I5_CLASSICAL_BOUND;

#[derive(Debug, Clone, PartialEq)]
pub enum AttackModel {
    NoAttack,
    /// One Pauli per targeted qubit.
    Pauli(Vec<PauliError>),
    /// Joint depolarizing of the listed qubits with probability `p`.
    Depolarizing { p: f64, qubits: Vec<usize> },
    /// Z-basis intercept and resend on each listed qubit.
    Dephasing { qubits: Vec<usize> },
    /// The transmitted state is discarded and replaced.
    StateReplacement(DensityMatrix),
}

fn check_qubits(qubits: &[usize]) -> Result<()> {
    if qubits.is_empty() {
        return Err(Error::InvalidAttack("no target qubits".into()));
    }
    for (i, q) in qubits.iter().enumerate() {
        if !(1..=NUM_QUBITS).contains(q) {
            return Err(Error::InvalidAttack(format!("qubit {q} outside 1..=5")));
        }
        if qubits[..i].contains(q) {
            return Err(Error::InvalidAttack(format!("qubit {q} targeted twice")));
        }
    }
    Ok(())
}

impl AttackModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            AttackModel::NoAttack => Ok(()),
            AttackModel::Pauli(errors) => {
                let qs: Vec<usize> = errors.iter().map(|e| e.qubit()).collect();
                check_qubits(&qs)
            }
            AttackModel::Depolarizing { p, qubits } => {
                if !(0.0..=1.0).contains(p) {
                    return Err(Error::InvalidAttack(format!("probability {p} outside [0, 1]")));
                }
                check_qubits(qubits)
            }
            AttackModel::Dephasing { qubits } => check_qubits(qubits),
            AttackModel::StateReplacement(dm) => {
                if dm.num_qubits() != NUM_QUBITS {
                    return Err(Error::InvalidAttack(format!("replacement has {} qubits", dm.num_qubits())));
                }
                Ok(())
            }
        }
    }

    pub fn single_pauli(qubit: usize, letter: Pauli) -> Result<Self> {
        Ok(AttackModel::Pauli(vec![PauliError::new(qubit, letter)?]))
    }

    /// The 15 single-qubit Pauli attacks.
    pub fn all_single_pauli() -> Vec<AttackModel> {
        PauliError::all().into_iter().map(|e| AttackModel::Pauli(vec![e])).collect()
    }

    /// The 90 Pauli attacks touching exactly two qubits.
    pub fn all_two_qubit_pauli() -> Vec<AttackModel> {
        let all = PauliError::all();
        let mut out = Vec::new();
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                if a.qubit() != b.qubit() {
                    out.push(AttackModel::Pauli(vec![*a, *b]));
                }
            }
        }
        out
    }

    pub fn global_depolarizing(p: f64) -> Self {
        AttackModel::Depolarizing { p, qubits: (1..=NUM_QUBITS).collect() }
    }

    pub fn label(&self) -> String {
        match self {
            AttackModel::NoAttack => "none".into(),
            AttackModel::Pauli(errors) => errors.iter().map(|e| e.to_string()).collect(),
            AttackModel::Depolarizing { p, qubits } => format!("depolarizing(p={p};q={})", join(qubits)),
            AttackModel::Dephasing { qubits } => format!("dephasing(q={})", join(qubits)),
            AttackModel::StateReplacement(_) => "replacement".into(),
        }
    }
}

fn join(qs: &[usize]) -> String {
    qs.iter().map(|q| q.to_string()).collect::<Vec<_>>().join("+")
}

impl fmt::Display for AttackModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Serializable description of an attack, as found in config files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum AttackSpec {
    #[default]
    None,
    Pauli { errors: Vec<PauliError> },
    Depolarizing { p: f64, qubits: Vec<usize> },
    Dephasing { qubits: Vec<usize> },
    Replacement { source: ReplacementSource },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ReplacementSource {
    /// Best product-state forgery, see [`classical_forgery`].
    Classical,
    MaximallyMixed,
    /// Product state with one Bloch vector per qubit (length at most 1).
    Product { bloch: Vec<[f64; 3]> },
}

impl AttackSpec {
    pub fn resolve(&self) -> Result<AttackModel> {
        let model = match self {
            AttackSpec::None => AttackModel::NoAttack,
            AttackSpec::Pauli { errors } => AttackModel::Pauli(errors.clone()),
            AttackSpec::Depolarizing { p, qubits } => AttackModel::Depolarizing { p: *p, qubits: qubits.clone() },
            AttackSpec::Dephasing { qubits } => AttackModel::Dephasing { qubits: qubits.clone() },
            AttackSpec::Replacement { source } => AttackModel::StateReplacement(match source {
                ReplacementSource::Classical => classical_forgery().state,
                ReplacementSource::MaximallyMixed => DensityMatrix::maximally_mixed(NUM_QUBITS)?,
                ReplacementSource::Product { bloch } => {
                    if bloch.len() != NUM_QUBITS {
                        return Err(Error::InvalidAttack(format!("{} Bloch vectors given", bloch.len())));
                    }
                    product_state(bloch)?
                }
            }),
        };
        model.validate()?;
        Ok(model)
    }
}

/// `prod_j (I + r_j . sigma) / 2`.
pub fn product_state(bloch: &[[f64; 3]]) -> Result<DensityMatrix> {
    let factors = bloch
        .iter()
        .map(|r| {
            let len = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
            if len.is_nan() || len > 1.0 + 1e-12 {
                return Err(Error::InvalidAttack(format!("Bloch vector {r:?} longer than 1")));
            }
            let m = identity(2)
                + Pauli::X.matrix() * c(r[0])
                + Pauli::Y.matrix() * c(r[1])
                + Pauli::Z.matrix() * c(r[2]);
            Ok(m * c(0.5))
        })
        .collect::<Result<Vec<CMatrix>>>()?;
    DensityMatrix::new(kron_all(&factors))
}

/// A product state chosen to score as high as possible on `I5` under the
/// optimal measurements.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalForgery {
    pub state: DensityMatrix,
    pub bloch: Vec<[f64; 3]>,
    pub i5_value: f64,
}

/// Starts from the deterministic optimum (each party's Bloch vector leaning
/// towards its pre-assigned outcomes) and improves party by party: `I5` is
/// linear in each party's Bloch vector, so each step is exact.
pub fn classical_forgery() -> ClassicalForgery {
    let f = builtin_functional(FunctionalKind::I5);
    let strat = optimal_strategy(FunctionalKind::I5);
    let axes: Vec<[[f64; 3]; 2]> = (0..NUM_QUBITS)
        .map(|j| [strat.observable(j, 0).axis(), strat.observable(j, 1).axis()])
        .collect();
    let dot = |a: &[f64; 3], b: &[f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let normalize = |v: [f64; 3]| {
        let n = dot(&v, &v).sqrt();
        if n == 0.0 {
            [0.0, 0.0, 1.0]
        } else {
            v.map(|x| x / n)
        }
    };
    let (_, assignment) = classical_maximum(&f).expect("five parties");
    let mut bloch: Vec<[f64; 3]> = (0..NUM_QUBITS)
        .map(|j| {
            let [a0, a1] = assignment.0[j].map(|v| v as f64);
            normalize(std::array::from_fn(|k| a0 * axes[j][0][k] + a1 * axes[j][1][k]))
        })
        .collect();
    let value = |bloch: &[[f64; 3]]| -> f64 {
        f.terms
            .iter()
            .map(|t| {
                let prod: f64 = t
                    .choices
                    .iter()
                    .enumerate()
                    .map(|(j, s)| match s {
                        crate::bell::Setting::Identity => 1.0,
                        crate::bell::Setting::Zero => dot(&axes[j][0], &bloch[j]),
                        crate::bell::Setting::One => dot(&axes[j][1], &bloch[j]),
                    })
                    .product();
                t.coefficient * prod
            })
            .sum()
    };
    for _ in 0..200 {
        let before = value(&bloch);
        for j in 0..NUM_QUBITS {
            // gradient of the multilinear form in party j
            let grad: [f64; 3] = std::array::from_fn(|k| {
                let mut e = bloch.clone();
                let mut unit = [0.0; 3];
                unit[k] = 1.0;
                e[j] = unit;
                let mut zero = bloch.clone();
                zero[j] = [0.0; 3];
                value(&e) - value(&zero)
            });
            bloch[j] = normalize(grad);
        }
        if value(&bloch) - before < 1e-15 {
            break;
        }
    }
    let state = product_state(&bloch).expect("unit Bloch vectors");
    let i5_value = evaluate(&f, &strat, &state).expect("five parties");
    ClassicalForgery { state, bloch, i5_value }
}

/// `(1 - p) rho + p I / 32`.
fn global_depolarize(dm: &DensityMatrix, p: f64) -> DensityMatrix {
    let mixed = DensityMatrix::maximally_mixed(dm.num_qubits()).expect("valid register");
    DensityMatrix::mixture(&[(1.0 - p, dm), (p, &mixed)]).expect("valid weights")
}

pub fn apply_attack(dm: &DensityMatrix, attack: &AttackModel) -> Result<DensityMatrix> {
    if dm.num_qubits() != NUM_QUBITS {
        return Err(Error::DimensionMismatch { expected: NUM_QUBITS, found: dm.num_qubits() });
    }
    attack.validate()?;
    match attack {
        AttackModel::NoAttack => Ok(dm.clone()),
        AttackModel::Pauli(errors) => errors.iter().try_fold(dm.clone(), |rho, e| {
            let gate = Gate::pauli(e.letter(), e.index()).expect("non-identity");
            rho.conjugated(&gate.as_local_op())
        }),
        AttackModel::Depolarizing { p, qubits } if qubits.len() == NUM_QUBITS => Ok(global_depolarize(dm, *p)),
        AttackModel::Depolarizing { p, qubits } => {
            let targets = qubits.iter().map(|q| q - 1).collect();
            apply_channel(dm, &KrausChannel::depolarizing(*p, targets)?)
        }
        AttackModel::Dephasing { qubits } => qubits
            .iter()
            .try_fold(dm.clone(), |rho, q| apply_channel(&rho, &KrausChannel::dephasing(q - 1))),
        AttackModel::StateReplacement(r) => Ok(r.clone()),
    }
}

/// Exact `I5` under the optimal strategy.
pub fn exact_i5(dm: &DensityMatrix) -> Result<f64> {
    evaluate(&builtin_functional(FunctionalKind::I5), &optimal_strategy(FunctionalKind::I5), dm)
}

/// One row of an attack sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackOutcome {
    pub label: String,
    pub i5_value: f64,
    pub certified: bool,
    /// Present when the syndrome is deterministic for this attack.
    pub syndrome: Option<Syndrome>,
    pub correction: Option<PauliError>,
    /// Whether correction brought `I5` back to its maximum.
    pub corrected: bool,
    pub i5_after_correction: Option<f64>,
}

/// Exact `I5` of each attacked `|0_L>`, its certification at `threshold`,
/// and, if `with_correction`, the outcome-averaged syndrome correction.
pub fn attack_sweep(attacks: &[AttackModel], threshold: f64, with_correction: bool) -> Result<Vec<AttackOutcome>> {
    let clean = LogicalBasis::five_qubit().zero.to_density();
    attacks
        .iter()
        .map(|attack| {
            let attacked = apply_attack(&clean, attack)?;
            let i5_value = exact_i5(&attacked)?;
            let mut row = AttackOutcome {
                label: attack.label(),
                i5_value,
                certified: i5_value >= threshold,
                syndrome: None,
                correction: None,
                corrected: false,
                i5_after_correction: None,
            };
            if with_correction {
                let exact = correct_exactly(&attacked)?;
                row.syndrome = exact.deterministic_syndrome();
                row.correction = row.syndrome.and_then(decode_syndrome);
                let after = exact_i5(&exact.state)?;
                row.corrected = (after - I5_QUANTUM_BOUND).abs() < 1e-9;
                row.i5_after_correction = Some(after);
            }
            Ok(row)
        })
        .collect()
}

/// Monte Carlo detection frequency with a 95% Wilson score interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionStats {
    pub trials: usize,
    pub detections: usize,
    pub probability: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
}

const Z95: f64 = 1.959_963_984_540_054;

pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let low = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let high = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    (low, high)
}

/// Fraction of trials in which the sampled `I5` of the attacked `|0_L>`
/// falls below `threshold`. Trial `k` draws from its own stream `k` of a
/// generator seeded from `rng`, so the result does not depend on trial order.
pub fn detection_probability<R: Rng + ?Sized>(
    attack: &AttackModel,
    shots_per_term: usize,
    threshold: f64,
    trials: usize,
    rng: &mut R,
) -> Result<DetectionStats> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    let clean = LogicalBasis::five_qubit().zero.to_density();
    let attacked = apply_attack(&clean, attack)?;
    let sampler = FunctionalSampler::new(
        &builtin_functional(FunctionalKind::I5),
        &optimal_strategy(FunctionalKind::I5),
        &attacked,
    )?;
    let base: u64 = rng.gen();
    let mut detections = 0;
    for k in 0..trials {
        let mut trial_rng = ChaCha8Rng::seed_from_u64(base);
        trial_rng.set_stream(k as u64);
        if sampler.estimate(shots_per_term, &mut trial_rng)?.value < threshold {
            detections += 1;
        }
    }
    let (wilson_low, wilson_high) = wilson_interval(detections, trials);
    Ok(DetectionStats {
        trials,
        detections,
        probability: detections as f64 / trials as f64,
        wilson_low,
        wilson_high,
    })
}
