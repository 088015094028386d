//! Command-line front end. Every subcommand renders a serializable report
//! as JSON, a plain-text table, or (for row-shaped reports) CSV.
//!
//! Exit codes: 0 success, 2 usage, 3 configuration or I/O, 4 positioning
//! solver, 5 validation, 6 protocol run without a fix.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::adversary::{attack_sweep, AttackModel, AttackOutcome, DEFAULT_THRESHOLD};
use crate::bell::{
    bell_pair, builtin_functional, classical_maximum, correlators, optimal_strategy, sample_estimate, Estimate,
    FunctionalKind,
};
use crate::code5::{
    decode_syndrome, encoder_input, encoding_circuit, figure_circuit, figure_input, logical_state, random_amplitudes,
    stabilizer_expectations, syndrome_of_error, LogicalBasis, PauliError, Syndrome, FIGURE_ANCILLA_BITS,
};
use crate::geoposition::{geometry_dilution, PositionFix, Scenario};
use crate::protocol::{run_task, ProtocolConfig, ProtocolReport, DEFAULT_SEED, DEFAULT_SHOTS_PER_TERM};
use crate::qsim::{apply_circuit, fidelity, DensityMatrix, Pauli};
use crate::resource::{builtin_profiles, hardware_report, profile_by_name, HardwareProfile, HardwareReport};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;
pub const EXIT_SOLVER: i32 = 4;
pub const EXIT_VALIDATION: i32 = 5;
pub const EXIT_NO_FIX: i32 = 6;

#[derive(Debug, Parser)]
#[command(name = "qsgps", version, about = "Five-qubit code certification and quantum-secured positioning")]
pub struct Cli {
    /// Master seed for every random draw [default: 20200].
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Report format; `attack-sweep` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Table,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stabilizer expectations, syndrome table and encoder fidelity.
    VerifyCode {
        /// Random logical inputs pushed through the encoder.
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Exact and sampled value of a Bell functional at its optimum.
    Bell {
        #[arg(long, value_enum, default_value_t = FunctionalKind::I5)]
        functional: FunctionalKind,
        #[arg(long, default_value_t = DEFAULT_SHOTS_PER_TERM)]
        shots: usize,
    },
    /// Exhaustive classical maximum of a Bell functional.
    ClassicalBound {
        #[arg(long, value_enum, default_value_t = FunctionalKind::I5)]
        functional: FunctionalKind,
    },
    /// Exact `I5` of the attacked code state for a family of attacks.
    AttackSweep {
        #[arg(long, value_enum, default_value_t = AttackSet::AllSinglePauli)]
        attacks: AttackSet,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
        /// Also run syndrome correction on every attacked state.
        #[arg(long)]
        correct: bool,
    },
    /// Gate counts, depth, time and fidelity of the encoder on a platform.
    Hardware {
        /// Built-in profile; both tabulated platforms when omitted.
        #[arg(long, conflicts_with = "profile_file")]
        profile: Option<String>,
        /// Profile JSON file.
        #[arg(long)]
        profile_file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = EncoderKind::Derived)]
        circuit: EncoderKind,
    },
    /// Position and clock bias from a scenario file.
    Position {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Full positioning task from a protocol config file.
    ProtocolRun {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `shots_per_term` of the config.
        #[arg(long)]
        shots: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AttackSet {
    /// The 15 single-qubit Paulis.
    AllSinglePauli,
    /// The 90 Paulis on two distinct qubits.
    AllTwoQubit,
    /// Global depolarizing at p = 0, 0.1, ..., 1.
    Depolarizing,
    /// Z-basis intercept-resend on each qubit, then on all five.
    Dephasing,
    /// Classical forgery and maximally mixed replacement.
    Replacement,
}

impl AttackSet {
    pub fn attacks(self) -> Result<Vec<AttackModel>> {
        Ok(match self {
            AttackSet::AllSinglePauli => AttackModel::all_single_pauli(),
            AttackSet::AllTwoQubit => AttackModel::all_two_qubit_pauli(),
            AttackSet::Depolarizing => (0..=10).map(|k| AttackModel::global_depolarizing(k as f64 / 10.0)).collect(),
            AttackSet::Dephasing => (1..=5)
                .map(|q| AttackModel::Dephasing { qubits: vec![q] })
                .chain([AttackModel::Dephasing { qubits: (1..=5).collect() }])
                .collect(),
            AttackSet::Replacement => vec![
                AttackModel::StateReplacement(crate::adversary::classical_forgery().state),
                AttackModel::StateReplacement(DensityMatrix::maximally_mixed(5)?),
            ],
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EncoderKind {
    /// The verified encoder.
    Derived,
    /// The literal transcription of the reference drawing.
    Figure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyndromeRow {
    pub error: PauliError,
    pub syndrome: Syndrome,
    pub decoded: Option<PauliError>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyCodeReport {
    pub stabilizers_zero: [f64; 4],
    pub stabilizers_one: [f64; 4],
    pub hadamards: usize,
    pub cnots: usize,
    pub samples: usize,
    pub min_encoder_fidelity: f64,
    /// Same inputs through the literal drawing.
    pub min_figure_fidelity: f64,
    pub syndromes: Vec<SyndromeRow>,
    pub syndrome_bijective: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermValue {
    pub term: String,
    pub coefficient: f64,
    pub correlator: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BellReport {
    pub functional: FunctionalKind,
    pub state: String,
    pub classical_bound: f64,
    pub quantum_bound: f64,
    pub exact: f64,
    pub shots_per_term: usize,
    pub sampled: Estimate,
    pub terms: Vec<TermValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalBoundReport {
    pub functional: FunctionalKind,
    pub strategies: usize,
    pub bound: f64,
    /// `[a_0, a_1]` per party.
    pub argmax: Vec<[i8; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub threshold: f64,
    pub with_correction: bool,
    pub rows: Vec<AttackOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositionReport {
    pub fix: PositionFix,
    pub gdop: Option<f64>,
    pub position_error_m: Option<f64>,
    pub clock_bias_error_s: Option<f64>,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invocation {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: ErrorBody<'a>,
    exit_code: i32,
}

fn error_json(kind: &str, message: String, code: i32) -> String {
    let body = ErrorReport { error: ErrorBody { kind, message }, exit_code: code };
    serde_json::to_string(&body).expect("plain struct") + "\n"
}

/// Exit status and short machine-readable kind of a library error.
pub fn classify(err: &Error) -> (i32, &'static str) {
    match err {
        Error::Io(_) => (EXIT_CONFIG, "io"),
        Error::Json(_) => (EXIT_CONFIG, "malformed_json"),
        Error::InvalidConfig(_)
        | Error::UnknownProfile(_)
        | Error::InvalidProfile(_)
        | Error::InvalidSolverConfig(_)
        | Error::InvalidAttack(_)
        | Error::UnknownSatellite(_)
        | Error::IdMismatch(_)
        | Error::TooFewSatellites { .. } => (EXIT_CONFIG, "invalid_config"),
        Error::SingularGeometry => (EXIT_SOLVER, "singular_geometry"),
        Error::NotConverged { .. } => (EXIT_SOLVER, "not_converged"),
        Error::SatelliteAtReceiver(_) => (EXIT_SOLVER, "satellite_at_receiver"),
        _ => (EXIT_VALIDATION, "validation"),
    }
}

/// Parses `args` (program name first) and runs the command. Nothing is
/// printed; the report goes to `--output` when given.
pub fn invoke<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Invocation { code: EXIT_OK, stdout: e.to_string(), stderr: String::new() }
                }
                _ => Invocation {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: error_json("usage", e.to_string().trim_end().to_string(), EXIT_USAGE),
                },
            };
        }
    };
    let failure = |err: Error| {
        let (code, kind) = classify(&err);
        Invocation { code, stdout: String::new(), stderr: error_json(kind, err.to_string(), code) }
    };
    let (code, body) = match execute(&cli) {
        Ok(out) => out,
        Err(CommandError::Usage(msg)) => {
            return Invocation { code: EXIT_USAGE, stdout: String::new(), stderr: error_json("usage", msg, EXIT_USAGE) }
        }
        Err(CommandError::Lib(err)) => return failure(err),
    };
    match &cli.output {
        Some(path) => match std::fs::write(path, &body) {
            Ok(()) => Invocation { code, stdout: String::new(), stderr: String::new() },
            Err(e) => failure(Error::Io(e)),
        },
        None => Invocation { code, stdout: body, stderr: String::new() },
    }
}

enum CommandError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for CommandError {
    fn from(e: Error) -> Self {
        CommandError::Lib(e)
    }
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable report") + "\n"
}

fn no_csv(command: &str) -> CommandError {
    CommandError::Usage(format!("csv output is not available for {command}"))
}

fn execute(cli: &Cli) -> std::result::Result<(i32, String), CommandError> {
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let format = cli.format;
    let fmt = format.unwrap_or(OutputFormat::Json);
    match &cli.command {
        Command::VerifyCode { samples } => {
            let report = verify_code(*samples, &mut rng)?;
            let code = if report.passed { EXIT_OK } else { EXIT_VALIDATION };
            let body = match fmt {
                OutputFormat::Json => json(&report),
                OutputFormat::Table => verify_table(&report),
                OutputFormat::Csv => return Err(no_csv("verify-code")),
            };
            Ok((code, body))
        }
        Command::Bell { functional, shots } => {
            let report = bell_report(*functional, *shots, &mut rng)?;
            let body = match fmt {
                OutputFormat::Json => json(&report),
                OutputFormat::Table => bell_table(&report),
                OutputFormat::Csv => return Err(no_csv("bell")),
            };
            Ok((EXIT_OK, body))
        }
        Command::ClassicalBound { functional } => {
            let f = builtin_functional(*functional);
            let (bound, argmax) = classical_maximum(&f)?;
            let report = ClassicalBoundReport {
                functional: *functional,
                strategies: 1 << (2 * f.parties),
                bound,
                argmax: argmax.0.clone(),
            };
            let body = match fmt {
                OutputFormat::Json => json(&report),
                OutputFormat::Table => format!(
                    "functional  {}\nstrategies  {}\nbound       {}\nargmax      {}\n",
                    report.functional, report.strategies, report.bound, argmax
                ),
                OutputFormat::Csv => return Err(no_csv("classical-bound")),
            };
            Ok((EXIT_OK, body))
        }
        Command::AttackSweep { attacks, threshold, correct } => {
            let rows = attack_sweep(&attacks.attacks()?, *threshold, *correct)?;
            let report = SweepReport { threshold: *threshold, with_correction: *correct, rows };
            let body = match format.unwrap_or(OutputFormat::Csv) {
                OutputFormat::Json => json(&report),
                OutputFormat::Table => sweep_table(&report),
                OutputFormat::Csv => sweep_csv(&report.rows)?,
            };
            Ok((EXIT_OK, body))
        }
        Command::Hardware { profile, profile_file, circuit } => {
            let profiles = match (profile, profile_file) {
                (Some(name), _) => vec![profile_by_name(name)?],
                (None, Some(path)) => vec![HardwareProfile::from_file(path)?],
                (None, None) => builtin_profiles(),
            };
            let circuit = match circuit {
                EncoderKind::Derived => encoding_circuit(),
                EncoderKind::Figure => figure_circuit(),
            };
            let reports = profiles
                .iter()
                .map(|p| hardware_report(p, &circuit))
                .collect::<Result<Vec<_>>>()?;
            let body = match fmt {
                OutputFormat::Json => json(&reports),
                OutputFormat::Table => hardware_table(&reports),
                OutputFormat::Csv => hardware_csv(&reports)?,
            };
            Ok((EXIT_OK, body))
        }
        Command::Position { scenario } => {
            let report = position_report(scenario)?;
            let body = match fmt {
                OutputFormat::Json => json(&report),
                OutputFormat::Table => position_table(&report),
                OutputFormat::Csv => return Err(no_csv("position")),
            };
            Ok((EXIT_OK, body))
        }
        Command::ProtocolRun { config, shots } => {
            let mut cfg = ProtocolConfig::from_file(config)?;
            if let Some(s) = cli.seed {
                cfg.seed = s;
            }
            if let Some(n) = shots {
                cfg.shots_per_term = *n;
            }
            let report = run_task(&cfg)?;
            let code = if report.fix.is_some() { EXIT_OK } else { EXIT_NO_FIX };
            let body = match fmt {
                OutputFormat::Json => json(&report),
                OutputFormat::Table => protocol_table(&report),
                OutputFormat::Csv => protocol_csv(&report)?,
            };
            Ok((code, body))
        }
    }
}

pub fn verify_code(samples: usize, rng: &mut ChaCha8Rng) -> Result<VerifyCodeReport> {
    let basis = LogicalBasis::five_qubit();
    let stabilizers_zero = stabilizer_expectations(&basis.zero)?;
    let stabilizers_one = stabilizer_expectations(&basis.one)?;
    let (hadamards, cnots, _) = encoding_circuit().census();
    let (derived, drawn) = (encoding_circuit(), figure_circuit());
    let mut min_encoder_fidelity = 1.0f64;
    let mut min_figure_fidelity = 1.0f64;
    for _ in 0..samples {
        let (a, b) = random_amplitudes(rng);
        let target = logical_state(a, b)?;
        let out = apply_circuit(&encoder_input(a, b)?, &derived)?;
        min_encoder_fidelity = min_encoder_fidelity.min(fidelity(&out, &target)?);
        let out = apply_circuit(&figure_input(a, b, FIGURE_ANCILLA_BITS)?, &drawn)?;
        min_figure_fidelity = min_figure_fidelity.min(fidelity(&out, &target)?);
    }
    let syndromes: Vec<SyndromeRow> = PauliError::all()
        .into_iter()
        .map(|e| {
            let s = syndrome_of_error(e);
            SyndromeRow { error: e, syndrome: s, decoded: decode_syndrome(s) }
        })
        .collect();
    let mut seen: Vec<Syndrome> = syndromes.iter().map(|r| r.syndrome).collect();
    seen.sort_by_key(|s| s.bits());
    seen.dedup();
    let syndrome_bijective =
        seen.len() == 15 && !seen.contains(&Syndrome::TRIVIAL) && syndromes.iter().all(|r| r.decoded == Some(r.error));
    let eigen_ok = stabilizers_zero.iter().chain(&stabilizers_one).all(|v| (v - 1.0).abs() < 1e-12);
    let passed =
        eigen_ok && (hadamards, cnots) == (4, 8) && min_encoder_fidelity >= 1.0 - 1e-10 && syndrome_bijective;
    Ok(VerifyCodeReport {
        stabilizers_zero,
        stabilizers_one,
        hadamards,
        cnots,
        samples,
        min_encoder_fidelity,
        min_figure_fidelity,
        syndromes,
        syndrome_bijective,
        passed,
    })
}

pub fn bell_report(kind: FunctionalKind, shots: usize, rng: &mut ChaCha8Rng) -> Result<BellReport> {
    let f = builtin_functional(kind);
    let strat = optimal_strategy(kind);
    let (state, label) = match kind {
        FunctionalKind::Chsh => (bell_pair(), "bell pair"),
        FunctionalKind::I5 => (LogicalBasis::five_qubit().zero, "|0_L>"),
    };
    let values = correlators(&f, &strat, &state)?;
    let exact = f.terms.iter().zip(&values).map(|(t, v)| t.coefficient * v).sum();
    let sampled = sample_estimate(&f, &strat, &state, shots, rng)?;
    Ok(BellReport {
        functional: kind,
        state: label.into(),
        classical_bound: f.classical_bound,
        quantum_bound: f.quantum_bound,
        exact,
        shots_per_term: shots,
        sampled,
        terms: f
            .terms
            .iter()
            .zip(values)
            .map(|(t, v)| TermValue { term: t.to_string(), coefficient: t.coefficient, correlator: v })
            .collect(),
    })
}

pub fn position_report(path: &Path) -> Result<PositionReport> {
    let scenario: Scenario = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let fix = scenario.solve()?;
    Ok(PositionReport {
        gdop: geometry_dilution(&scenario.satellites, fix.position),
        position_error_m: scenario.truth.as_ref().map(|t| t.position.distance(&fix.position)),
        clock_bias_error_s: scenario.truth.as_ref().map(|t| (t.clock_bias_s - fix.clock_bias).abs()),
        fix,
    })
}

fn fmt_syndrome(s: Option<Syndrome>) -> String {
    s.map_or_else(String::new, |s| s.bits().iter().map(|b| b.to_string()).collect())
}

fn fmt_opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

fn csv_rows(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let to_err = |e: csv::Error| Error::InvalidConfig(format!("csv: {e}"));
    w.write_record(header).map_err(to_err)?;
    for r in rows {
        w.write_record(&r).map_err(to_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidConfig(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
}

fn sweep_csv(rows: &[AttackOutcome]) -> Result<String> {
    csv_rows(
        &["label", "i5_value", "certified", "syndrome", "correction", "corrected", "i5_after_correction"],
        rows.iter().map(|r| {
            vec![
                r.label.clone(),
                r.i5_value.to_string(),
                r.certified.to_string(),
                fmt_syndrome(r.syndrome),
                fmt_opt(r.correction),
                r.corrected.to_string(),
                fmt_opt(r.i5_after_correction),
            ]
        }),
    )
}

fn hardware_csv(reports: &[HardwareReport]) -> Result<String> {
    csv_rows(
        &["profile", "n_1q", "n_2q", "d_1q", "d_2q", "t_total_s", "fidelity_bound"],
        reports.iter().map(|r| {
            vec![
                r.profile.name.clone(),
                r.cost.n_1q.to_string(),
                r.cost.n_2q.to_string(),
                r.cost.d_1q.to_string(),
                r.cost.d_2q.to_string(),
                r.t_total_s.to_string(),
                r.fidelity_bound.to_string(),
            ]
        }),
    )
}

fn protocol_csv(report: &ProtocolReport) -> Result<String> {
    csv_rows(
        &["round", "satellite", "attack", "jammed", "i5_estimate", "i5_stderr", "certified", "syndrome", "correction", "rho_m"],
        report.rounds.iter().map(|r| {
            vec![
                r.round_index.to_string(),
                r.satellite_id.clone(),
                r.attack.clone(),
                r.jammed.to_string(),
                fmt_opt(r.i5_estimate),
                fmt_opt(r.i5_stderr),
                r.certified.to_string(),
                fmt_syndrome(r.syndrome),
                fmt_opt(r.correction),
                fmt_opt(r.pseudorange.as_ref().map(|p| p.rho)),
            ]
        }),
    )
}

fn verify_table(r: &VerifyCodeReport) -> String {
    let mut s = String::new();
    let fmt4 = |v: &[f64; 4]| v.map(|x| format!("{x:+.6}")).join(" ");
    let _ = writeln!(s, "<S_k> on |0_L>       {}", fmt4(&r.stabilizers_zero));
    let _ = writeln!(s, "<S_k> on |1_L>       {}", fmt4(&r.stabilizers_one));
    let _ = writeln!(s, "encoder gates        {} H, {} CNOT", r.hadamards, r.cnots);
    let _ = writeln!(s, "min fidelity         {:.12} over {} inputs", r.min_encoder_fidelity, r.samples);
    let _ = writeln!(s, "drawn circuit        {:.6}", r.min_figure_fidelity);
    let _ = writeln!(s, "error  syndrome  decoded");
    for row in &r.syndromes {
        let _ = writeln!(s, "{:<6} {}      {}", row.error.to_string(), fmt_syndrome(Some(row.syndrome)), fmt_opt(row.decoded));
    }
    let _ = writeln!(s, "bijective            {}", r.syndrome_bijective);
    let _ = writeln!(s, "passed               {}", r.passed);
    s
}

fn bell_table(r: &BellReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "functional {} on {}", r.functional, r.state);
    for t in &r.terms {
        let _ = writeln!(s, "  {:<24} {:+.6}", t.term, t.correlator);
    }
    let _ = writeln!(s, "exact      {:.6}", r.exact);
    let _ = writeln!(
        s,
        "sampled    {:.4} +/- {:.4} ({} shots/term)",
        r.sampled.value, r.sampled.stderr, r.shots_per_term
    );
    let _ = writeln!(s, "classical  {:.4}\nquantum    {:.4}", r.classical_bound, r.quantum_bound);
    s
}

fn sweep_table(r: &SweepReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<34} {:>9} {:>9} {:>8} {:>5} {:>9}", "attack", "I5", "certified", "syndrome", "fix", "after");
    for row in &r.rows {
        let _ = writeln!(
            s,
            "{:<34} {:>9.5} {:>9} {:>8} {:>5} {:>9}",
            row.label,
            row.i5_value,
            row.certified,
            fmt_syndrome(row.syndrome),
            fmt_opt(row.correction),
            row.i5_after_correction.map_or_else(String::new, |v| format!("{v:.5}"))
        );
    }
    let _ = writeln!(s, "threshold {}", r.threshold);
    s
}

fn fmt_time(t: f64) -> String {
    if t < 1e-6 {
        format!("{:.1} ns", t * 1e9)
    } else if t < 1e-3 {
        format!("{:.2} us", t * 1e6)
    } else {
        format!("{:.3} ms", t * 1e3)
    }
}

fn hardware_table(reports: &[HardwareReport]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<16} {:>4} {:>4} {:>4} {:>4} {:>12} {:>9}",
        "profile", "n1q", "n2q", "d1q", "d2q", "t_total", "F_circuit"
    );
    for r in reports {
        let _ = writeln!(
            s,
            "{:<16} {:>4} {:>4} {:>4} {:>4} {:>12} {:>8.1}%",
            r.profile.name,
            r.cost.n_1q,
            r.cost.n_2q,
            r.cost.d_1q,
            r.cost.d_2q,
            fmt_time(r.t_total_s),
            r.fidelity_bound * 100.0
        );
    }
    s
}

fn position_table(r: &PositionReport) -> String {
    let p = r.fix.position;
    let mut s = format!(
        "position    ({:.4}, {:.4}, {:.4}) m\nclock bias  {:.6e} s\nresidual    {:.3e} m\niterations  {}\n",
        p.x, p.y, p.z, r.fix.clock_bias, r.fix.residual_norm, r.fix.iterations
    );
    if let Some(g) = r.gdop {
        let _ = writeln!(s, "gdop        {g:.3}");
    }
    if let (Some(e), Some(b)) = (r.position_error_m, r.clock_bias_error_s) {
        let _ = writeln!(s, "error       {e:.3e} m, {b:.3e} s");
    }
    s
}

fn protocol_table(r: &ProtocolReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<5} {:<8} {:<14} {:>9} {:>7} {:>9} {:>8}", "round", "sat", "attack", "I5", "stderr", "certified", "syndrome");
    for round in &r.rounds {
        let (v, e) = match (round.i5_estimate, round.i5_stderr) {
            (Some(v), Some(e)) => (format!("{v:.4}"), format!("{e:.4}")),
            _ => ("jammed".into(), String::new()),
        };
        let _ = writeln!(
            s,
            "{:<5} {:<8} {:<14} {:>9} {:>7} {:>9} {:>8}",
            round.round_index,
            round.satellite_id,
            round.attack,
            v,
            e,
            round.certified,
            fmt_syndrome(round.syndrome)
        );
    }
    match (&r.fix, r.fix_error_m) {
        (Some(fix), Some(err)) => {
            let p = fix.position;
            let _ = writeln!(s, "fix ({:.3}, {:.3}, {:.3}) m, bias {:.6e} s, error {:.3e} m", p.x, p.y, p.z, fix.clock_bias, err);
        }
        _ => {
            let _ = writeln!(s, "no fix ({} certified rounds)", r.certified_rounds);
        }
    }
    let _ = writeln!(s, "detection events {}", r.detection_events.len());
    s
}

/// Pauli letter parsing shared with the examples.
pub fn parse_pauli_error(label: &str) -> Result<PauliError> {
    let mut chars = label.chars();
    let letter = match chars.next() {
        Some('X' | 'x') => Pauli::X,
        Some('Y' | 'y') => Pauli::Y,
        Some('Z' | 'z') => Pauli::Z,
        _ => return Err(Error::InvalidAttack(format!("bad Pauli label {label:?}"))),
    };
    let qubit = chars
        .as_str()
        .parse()
        .map_err(|_| Error::InvalidAttack(format!("bad Pauli label {label:?}")))?;
    PauliError::new(qubit, letter)
}
