//! Bell functionals for two and five parties.
//!
//! Party `j` (1-based in the literature) measures qubit `j - 1`. Each party
//! holds two dichotomic observables `A_0^j, A_1^j`; a correlator term picks
//! one of them or the identity for every party.

mod estimate;
mod sos;

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::qsim::linalg::{c, hermiticity_deviation, identity, max_abs, CMatrix, CHANNEL_TOL, ZERO};
use crate::qsim::{LocalOp, Pauli, QuantumState, MAX_QUBITS};
use crate::{Error, Result};

pub use estimate::{sample_estimate, Estimate, FunctionalSampler};
pub use sos::{bell_operator, induced_third_observable, sos_residual, sos_terms, PseudoStabilizerSet};

/// Largest party count accepted by [`classical_maximum`].
pub const MAX_ENUMERATED_PARTIES: usize = 6;

/// Hermitian 2x2 operator squaring to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct DichotomicObservable {
    matrix: CMatrix,
}

impl DichotomicObservable {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != 2 || matrix.ncols() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: matrix.nrows() });
        }
        let herm = hermiticity_deviation(&matrix);
        if herm > CHANNEL_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let dev = max_abs(&(&matrix * &matrix - identity(2)));
        if dev > CHANNEL_TOL {
            return Err(Error::NotDichotomic(dev));
        }
        Ok(Self { matrix })
    }

    pub fn pauli(p: Pauli) -> Self {
        Self { matrix: p.matrix() }
    }

    /// `r_x X + r_y Y + r_z Z` for a unit vector `r`.
    pub fn from_axis(r: [f64; 3]) -> Result<Self> {
        let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
        if (norm - 1.0).abs() > CHANNEL_TOL {
            return Err(Error::NotDichotomic((norm - 1.0).abs()));
        }
        let m = Pauli::X.matrix() * c(r[0]) + Pauli::Y.matrix() * c(r[1]) + Pauli::Z.matrix() * c(r[2]);
        Ok(Self { matrix: m })
    }

    /// `cos(theta) X + sin(theta) (cos(phi) Y + sin(phi) Z)`.
    pub fn bloch(theta: f64, phi: f64) -> Self {
        let (s, cth) = theta.sin_cos();
        Self::from_axis([cth, s * phi.cos(), s * phi.sin()]).expect("unit axis")
    }

    /// Uniformly random axis on the Bloch sphere.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let theta = rng.gen::<f64>().mul_add(-2.0, 1.0).acos();
        let phi = rng.gen::<f64>() * std::f64::consts::TAU;
        Self::bloch(theta, phi)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `(tr(O X), tr(O Y), tr(O Z)) / 2`.
    pub fn axis(&self) -> [f64; 3] {
        Pauli::NON_IDENTITY.map(|p| (&self.matrix * p.matrix()).trace().re / 2.0)
    }

    /// `U O U^dagger`.
    pub fn conjugated(&self, u: &CMatrix) -> Result<Self> {
        Self::new(u * &self.matrix * u.adjoint())
    }
}

/// Two observables per party.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementStrategy {
    settings: Vec<[DichotomicObservable; 2]>,
}

impl MeasurementStrategy {
    pub fn new(settings: Vec<[DichotomicObservable; 2]>) -> Result<Self> {
        if settings.is_empty() || settings.len() > MAX_QUBITS {
            return Err(Error::UnsupportedQubitCount(settings.len()));
        }
        Ok(Self { settings })
    }

    pub fn random<R: Rng + ?Sized>(parties: usize, rng: &mut R) -> Result<Self> {
        let settings = (0..parties)
            .map(|_| [DichotomicObservable::random(rng), DichotomicObservable::random(rng)])
            .collect();
        Self::new(settings)
    }

    pub fn parties(&self) -> usize {
        self.settings.len()
    }

    pub fn settings(&self) -> &[[DichotomicObservable; 2]] {
        &self.settings
    }

    /// `A_setting` of party `party` (0-based).
    pub fn observable(&self, party: usize, setting: usize) -> &DichotomicObservable {
        &self.settings[party][setting]
    }

    /// Every observable of party `j` rotated by `unitaries[j]`.
    pub fn conjugated(&self, unitaries: &[CMatrix]) -> Result<Self> {
        if unitaries.len() != self.parties() {
            return Err(Error::PartyMismatch { functional: unitaries.len(), strategy: self.parties() });
        }
        let settings = self
            .settings
            .iter()
            .zip(unitaries)
            .map(|([a0, a1], u)| Ok([a0.conjugated(u)?, a1.conjugated(u)?]))
            .collect::<Result<_>>()?;
        Self::new(settings)
    }
}

/// Measurement choice of one party inside a correlator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Setting {
    Identity,
    Zero,
    One,
}

impl Setting {
    fn index(self) -> Option<usize> {
        match self {
            Setting::Identity => None,
            Setting::Zero => Some(0),
            Setting::One => Some(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorTerm {
    pub coefficient: f64,
    pub choices: Vec<Setting>,
}

impl CorrelatorTerm {
    pub fn new(coefficient: f64, choices: Vec<Setting>) -> Result<Self> {
        if choices.iter().all(|s| *s == Setting::Identity) {
            return Err(Error::InvalidConfig("correlator term with no measured party".into()));
        }
        Ok(Self { coefficient, choices })
    }

    /// Parses a pattern such as `"0110-"`: `0`/`1` pick a setting, `-` is
    /// the identity.
    pub fn parse(coefficient: f64, pattern: &str) -> Result<Self> {
        let choices = pattern
            .chars()
            .map(|ch| match ch {
                '0' => Ok(Setting::Zero),
                '1' => Ok(Setting::One),
                '-' => Ok(Setting::Identity),
                other => Err(Error::InvalidConfig(format!("bad setting {other:?} in {pattern:?}"))),
            })
            .collect::<Result<_>>()?;
        Self::new(coefficient, choices)
    }

    /// Local operators of the measured parties for `strat`.
    pub fn local_ops(&self, strat: &MeasurementStrategy) -> Vec<LocalOp> {
        self.choices
            .iter()
            .enumerate()
            .filter_map(|(j, s)| {
                s.index().map(|x| {
                    LocalOp::new(strat.observable(j, x).matrix().clone(), vec![j]).expect("single qubit")
                })
            })
            .collect()
    }

    /// Value under a deterministic assignment.
    pub fn deterministic_value(&self, assignment: &[[i8; 2]]) -> f64 {
        let sign: i8 = self
            .choices
            .iter()
            .zip(assignment)
            .map(|(s, a)| s.index().map_or(1, |x| a[x]))
            .product();
        self.coefficient * sign as f64
    }
}

impl fmt::Display for CorrelatorTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.coefficient)?;
        for (j, s) in self.choices.iter().enumerate() {
            if let Some(x) = s.index() {
                write!(f, " A{x}^{}", j + 1)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BellFunctional {
    pub name: String,
    pub parties: usize,
    pub terms: Vec<CorrelatorTerm>,
    pub classical_bound: f64,
    pub quantum_bound: f64,
}

impl BellFunctional {
    pub fn new(
        name: impl Into<String>,
        parties: usize,
        terms: Vec<CorrelatorTerm>,
        classical_bound: f64,
        quantum_bound: f64,
    ) -> Result<Self> {
        if terms.iter().any(|t| t.choices.len() != parties) {
            return Err(Error::InvalidConfig("term width differs from party count".into()));
        }
        if classical_bound > quantum_bound {
            return Err(Error::InvalidConfig(format!(
                "classical bound {classical_bound} exceeds quantum bound {quantum_bound}"
            )));
        }
        Ok(Self { name: name.into(), parties, terms, classical_bound, quantum_bound })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FunctionalKind {
    Chsh,
    I5,
}

impl FunctionalKind {
    pub fn parties(self) -> usize {
        match self {
            FunctionalKind::Chsh => 2,
            FunctionalKind::I5 => 5,
        }
    }
}

impl fmt::Display for FunctionalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FunctionalKind::Chsh => "chsh",
            FunctionalKind::I5 => "i5",
        })
    }
}

/// `4 sqrt(2) + 1`.
pub const I5_QUANTUM_BOUND: f64 = 4.0 * SQRT_2 + 1.0;
pub const I5_CLASSICAL_BOUND: f64 = 5.0;
pub const CHSH_QUANTUM_BOUND: f64 = 2.0 * SQRT_2;
pub const CHSH_CLASSICAL_BOUND: f64 = 2.0;

const CHSH_TERMS: [(f64, &str); 4] = [(1.0, "00"), (1.0, "01"), (1.0, "10"), (-1.0, "11")];

/// The four grouped correlators expanded over the party-1 sums.
const I5_TERMS: [(f64, &str); 7] = [
    (1.0, "0110-"),
    (1.0, "1110-"),
    (1.0, "-0110"),
    (1.0, "0-011"),
    (1.0, "1-011"),
    (2.0, "00-01"),
    (-2.0, "10-01"),
];

pub fn builtin_functional(kind: FunctionalKind) -> BellFunctional {
    let (name, table, cb, qb): (_, &[(f64, &str)], _, _) = match kind {
        FunctionalKind::Chsh => ("CHSH", &CHSH_TERMS, CHSH_CLASSICAL_BOUND, CHSH_QUANTUM_BOUND),
        FunctionalKind::I5 => ("I5", &I5_TERMS, I5_CLASSICAL_BOUND, I5_QUANTUM_BOUND),
    };
    let terms = table
        .iter()
        .map(|(coef, pat)| CorrelatorTerm::parse(*coef, pat).expect("static pattern"))
        .collect();
    BellFunctional::new(name, kind.parties(), terms, cb, qb).expect("static functional")
}

fn check_parties(f: &BellFunctional, strat: &MeasurementStrategy) -> Result<()> {
    if f.parties != strat.parties() {
        return Err(Error::PartyMismatch { functional: f.parties, strategy: strat.parties() });
    }
    Ok(())
}

/// Exact `<prod_j A>` for every term, in term order.
pub fn correlators(f: &BellFunctional, strat: &MeasurementStrategy, state: &impl QuantumState) -> Result<Vec<f64>> {
    check_parties(f, strat)?;
    if state.num_qubits() != f.parties {
        return Err(Error::DimensionMismatch { expected: f.parties, found: state.num_qubits() });
    }
    f.terms
        .iter()
        .map(|t| {
            let v = state.product_expectation(&t.local_ops(strat))?;
            if v.im.abs() > CHANNEL_TOL {
                return Err(Error::NotHermitian(v.im.abs()));
            }
            Ok(v.re)
        })
        .collect()
}

/// `sum_t c_t <prod_j A_{x_t(j)}^j>`.
pub fn evaluate(f: &BellFunctional, strat: &MeasurementStrategy, state: &impl QuantumState) -> Result<f64> {
    let values = correlators(f, strat, state)?;
    Ok(f.terms.iter().zip(values).map(|(t, v)| t.coefficient * v).sum())
}

/// Pre-assigned `(a_0, a_1)` outcome pair for every party.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeterministicAssignment(pub Vec<[i8; 2]>);

impl fmt::Display for DeterministicAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|[a, b]| format!("({a:+},{b:+})")).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Exhaustive maximum over the `4^parties` deterministic strategies.
/// Ties resolve to the first assignment in enumeration order.
pub fn classical_maximum(f: &BellFunctional) -> Result<(f64, DeterministicAssignment)> {
    if f.parties > MAX_ENUMERATED_PARTIES {
        return Err(Error::TooManyParties(f.parties));
    }
    let m = f.parties;
    let mut best = (f64::NEG_INFINITY, Vec::new());
    let mut assignment = vec![[1i8; 2]; m];
    for code in 0..(1usize << (2 * m)) {
        for (j, slot) in assignment.iter_mut().enumerate() {
            let bits = code >> (2 * (m - 1 - j));
            let sign = |b: usize| if b & 1 == 0 { 1 } else { -1 };
            *slot = [sign(bits >> 1), sign(bits)];
        }
        let value: f64 = f.terms.iter().map(|t| t.deterministic_value(&assignment)).sum();
        if value > best.0 {
            best = (value, assignment.clone());
        }
    }
    Ok((best.0, DeterministicAssignment(best.1)))
}

fn rotated_pair() -> [DichotomicObservable; 2] {
    [
        DichotomicObservable::from_axis([FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2]).expect("unit axis"),
        DichotomicObservable::from_axis([FRAC_1_SQRT_2, 0.0, -FRAC_1_SQRT_2]).expect("unit axis"),
    ]
}

fn xz_pair() -> [DichotomicObservable; 2] {
    [DichotomicObservable::pauli(Pauli::X), DichotomicObservable::pauli(Pauli::Z)]
}

pub fn optimal_strategy(kind: FunctionalKind) -> MeasurementStrategy {
    let settings = match kind {
        FunctionalKind::Chsh => vec![xz_pair(), rotated_pair()],
        FunctionalKind::I5 => {
            let mut s = vec![rotated_pair()];
            s.extend((1..5).map(|_| xz_pair()));
            s
        }
    };
    MeasurementStrategy::new(settings).expect("static strategy")
}

/// `(|00> + |11>) / sqrt(2)`.
pub fn bell_pair() -> crate::qsim::Statevector {
    let h = c(FRAC_1_SQRT_2);
    crate::qsim::Statevector::new(vec![h, ZERO, ZERO, h]).expect("normalized")
}
