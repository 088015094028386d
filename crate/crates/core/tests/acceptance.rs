//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use std::f64::consts::SQRT_2;
use std::time::{Duration, Instant};

use qsgps::adversary::{apply_attack, detection_probability, exact_i5, AttackModel, AttackSpec};
use qsgps::bell::{
    bell_pair, builtin_functional, classical_maximum, evaluate, optimal_strategy, sos_residual, FunctionalKind,
    MeasurementStrategy,
};
use qsgps::code5::{
    decode_syndrome, encoder_input, encoding_circuit, logical_state, measure_and_correct, random_amplitudes,
    stabilizer_expectations, syndrome_of_error, LogicalBasis, PauliError, StabilizerSet, Syndrome,
};
use qsgps::geoposition::{forward_pseudoranges, jacobian, random_scenario, residuals, solve_fix, EcefPoint, SolverConfig};
use qsgps::protocol::{demo_config, run_task};
use qsgps::qsim::{apply_circuit, fidelity, LocalOp, Pauli};
use qsgps::resource::{circuit_cost, fidelity_bound, superconducting, total_time, trapped_ion, CircuitCost};

use common::rng;

const QUANTUM_I5: f64 = 4.0 * SQRT_2 + 1.0;

type Criterion = (&'static str, Option<Duration>, fn() -> Check);

struct Check {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Check {
    Check { ok, detail: detail.into() }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Check) -> Check {
    let start = Instant::now();
    let mut c = f();
    let elapsed = start.elapsed();
    if let Some(limit) = limit {
        if elapsed > limit {
            c.ok = false;
        }
        c.detail = format!("{}; {:.3} s (limit {} s)", c.detail, elapsed.as_secs_f64(), limit.as_secs_f64());
    } else {
        c.detail = format!("{}; {:.3} s", c.detail, elapsed.as_secs_f64());
    }
    c
}

fn chsh() -> Check {
    let f = builtin_functional(FunctionalKind::Chsh);
    let (classical, _) = classical_maximum(&f).unwrap();
    let quantum = evaluate(&f, &optimal_strategy(FunctionalKind::Chsh), &bell_pair()).unwrap();
    check(
        classical == 2.0 && (quantum - 2.0 * SQRT_2).abs() < 1e-10,
        format!("classical {classical}, quantum {quantum:.12}"),
    )
}

fn i5_classical() -> Check {
    let f = builtin_functional(FunctionalKind::I5);
    let (bound, argmax) = classical_maximum(&f).unwrap();
    check(bound == 5.0, format!("max over 1024 strategies = {bound} at {argmax}"))
}

fn i5_quantum() -> Check {
    let f = builtin_functional(FunctionalKind::I5);
    let strat = optimal_strategy(FunctionalKind::I5);
    let mut r = rng(3);
    let worst = (0..20)
        .map(|_| {
            let (a, b) = random_amplitudes(&mut r);
            (evaluate(&f, &strat, &logical_state(a, b).unwrap()).unwrap() - QUANTUM_I5).abs()
        })
        .fold(0.0, f64::max);
    check(worst < 1e-10, format!("max |I5 - (4 sqrt2 + 1)| = {worst:.2e} over 20 logical states"))
}

fn sos() -> Check {
    let mut r = rng(4);
    let mut worst5 = sos_residual(&optimal_strategy(FunctionalKind::I5), FunctionalKind::I5).unwrap();
    let mut worst2 = sos_residual(&optimal_strategy(FunctionalKind::Chsh), FunctionalKind::Chsh).unwrap();
    for _ in 0..20 {
        worst5 = worst5.max(sos_residual(&MeasurementStrategy::random(5, &mut r).unwrap(), FunctionalKind::I5).unwrap());
        worst2 = worst2.max(sos_residual(&MeasurementStrategy::random(2, &mut r).unwrap(), FunctionalKind::Chsh).unwrap());
    }
    check(worst5 < 1e-10 && worst2 < 1e-10, format!("residual I5 {worst5:.2e}, CHSH {worst2:.2e}"))
}

fn code() -> Check {
    let basis = LogicalBasis::five_qubit();
    let eig = stabilizer_expectations(&basis.zero)
        .unwrap()
        .into_iter()
        .chain(stabilizer_expectations(&basis.one).unwrap())
        .map(|v| (v - 1.0).abs())
        .fold(0.0, f64::max);
    let circuit = encoding_circuit();
    let (h, cx, other) = circuit.census();
    let mut r = rng(5);
    let worst = (0..20)
        .map(|_| {
            let (a, b) = random_amplitudes(&mut r);
            let out = apply_circuit(&encoder_input(a, b).unwrap(), &circuit).unwrap();
            fidelity(&out, &logical_state(a, b).unwrap()).unwrap()
        })
        .fold(1.0, f64::min);
    check(
        eig < 1e-12 && (h, cx, other) == (4, 8, 0) && worst >= 1.0 - 1e-10,
        format!("stabilizer deviation {eig:.1e}, {h} H + {cx} CNOT, min fidelity {worst:.12}"),
    )
}

fn correction() -> Check {
    let errors = PauliError::all();
    let mut syndromes: Vec<Syndrome> = errors.iter().map(|e| syndrome_of_error(*e)).collect();
    let decodes = errors.iter().all(|e| decode_syndrome(syndrome_of_error(*e)) == Some(*e));
    syndromes.sort_by_key(|s| s.bits());
    syndromes.dedup();
    let bijective = syndromes.len() == 15 && !syndromes.contains(&Syndrome::TRIVIAL) && decodes;
    let mut r = rng(6);
    let (a, b) = random_amplitudes(&mut r);
    let psi = logical_state(a, b).unwrap();
    let mut worst_fid = 1.0f64;
    let mut worst_i5 = 0.0f64;
    for e in &errors {
        let mut hit = psi.clone();
        hit.apply_local(&LocalOp::new(e.letter().matrix(), vec![e.index()]).unwrap()).unwrap();
        let rec = measure_and_correct(&hit.to_density(), &mut r).unwrap();
        worst_fid = worst_fid.min(fidelity(&rec.state, &psi).unwrap());
        worst_i5 = worst_i5.max((exact_i5(&rec.state).unwrap() - QUANTUM_I5).abs());
    }
    check(
        bijective && 1.0 - worst_fid < 1e-10 && worst_i5 < 1e-10,
        format!("bijective {bijective}, min fidelity {worst_fid:.12}, max I5 deviation {worst_i5:.1e}"),
    )
}

/// `I5` at the optimum is `sqrt2 (S1 + S3) + S2 + 2 sqrt2 S4` in terms of
/// the code generators; an error flips the sign of each generator it
/// anticommutes with.
fn sign_flip_oracle(err: PauliError) -> f64 {
    let weights = [SQRT_2, 1.0, SQRT_2, 2.0 * SQRT_2];
    let e = err.as_pauli_string();
    StabilizerSet::five_qubit()
        .generators()
        .iter()
        .zip(weights)
        .map(|(g, w)| if g.commutes_with(&e) { w } else { -w })
        .sum()
}

fn detectability() -> Check {
    let zero = LogicalBasis::five_qubit().zero.to_density();
    let mut max = f64::NEG_INFINITY;
    let mut oracle_gap = 0.0f64;
    for e in PauliError::all() {
        let v = exact_i5(&apply_attack(&zero, &AttackModel::Pauli(vec![e])).unwrap()).unwrap();
        oracle_gap = oracle_gap.max((v - sign_flip_oracle(e)).abs());
        max = max.max(v);
    }
    check(
        max <= 4.0 * SQRT_2 - 1.0 + 1e-10 && oracle_gap < 1e-10,
        format!("max attacked I5 {max:.6}, oracle disagreement {oracle_gap:.1e}"),
    )
}

fn depolarizing() -> Check {
    let zero = LogicalBasis::five_qubit().zero.to_density();
    let worst = (0..=10)
        .map(|k| {
            let p = k as f64 / 10.0;
            let v = exact_i5(&apply_attack(&zero, &AttackModel::global_depolarizing(p)).unwrap()).unwrap();
            (v - (1.0 - p) * QUANTUM_I5).abs()
        })
        .fold(0.0, f64::max);
    check(worst < 1e-10, format!("max deviation from (1-p)(4 sqrt2 + 1) = {worst:.1e}"))
}

fn table() -> Check {
    let cost = circuit_cost(&encoding_circuit()).unwrap();
    let sc = superconducting();
    let ti = trapped_ion();
    let (t_sc, f_sc) = (total_time(&sc, &cost), fidelity_bound(&sc, &cost));
    let (t_ti, f_ti) = (total_time(&ti, &cost), fidelity_bound(&ti, &cost));
    let ok = cost == CircuitCost { n_1q: 4, n_2q: 8, d_1q: 2, d_2q: 8 }
        && (t_sc - 216.4e-9).abs() <= 1e-12 * 216.4e-9
        && (f_sc - 0.9840).abs() <= 5e-4
        && (t_ti - 482.64e-6).abs() <= 1e-12 * 482.64e-6
        && (f_ti - 0.9976).abs() <= 5e-4;
    check(
        ok,
        format!(
            "superconducting {:.1} ns / {:.4}, trapped-ion {:.2} us / {:.4}, cost {:?}",
            t_sc * 1e9,
            f_sc,
            t_ti * 1e6,
            f_ti,
            cost
        ),
    )
}

fn positioning() -> Check {
    let mut r = rng(10);
    let (mut pos_err, mut bias_err, mut jac_err) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let (sats, truth) = random_scenario(4, &mut r);
        let ranges = forward_pseudoranges(truth.position, truth.clock_bias_s, &sats).unwrap();
        let fix = match solve_fix(&sats, &ranges, &SolverConfig::default()) {
            Ok(f) => f,
            Err(e) => return check(false, format!("solver error {e}")),
        };
        pos_err = pos_err.max(fix.position.distance(&truth.position));
        bias_err = bias_err.max((fix.clock_bias - truth.clock_bias_s).abs());

        let rho: Vec<f64> = ranges.iter().map(|p| p.rho).collect();
        let p = truth.position;
        let jac = jacobian(&sats, p).unwrap();
        let h = 1e-2;
        let at = |d: [f64; 3]| residuals(&sats, &rho, EcefPoint::new(p.x + d[0], p.y + d[1], p.z + d[2]), truth.clock_bias_s);
        let mut fd = vec![[0.0; 3]; sats.len()];
        for axis in 0..3 {
            let mut d = [0.0; 3];
            d[axis] = h;
            let plus = at(d);
            d[axis] = -h;
            let minus = at(d);
            for k in 0..sats.len() {
                fd[k][axis] = (plus[k] - minus[k]) / (2.0 * h);
            }
        }
        for (row, approx) in jac.iter().zip(&fd) {
            let diff = (0..3).map(|i| (row[i] - approx[i]).powi(2)).sum::<f64>().sqrt();
            let scale = (0..3).map(|i| row[i].powi(2)).sum::<f64>().sqrt();
            jac_err = jac_err.max(diff / scale);
        }
    }
    check(
        pos_err < 1e-3 && bias_err < 1e-11 && jac_err < 1e-6,
        format!("max position error {pos_err:.2e} m, bias error {bias_err:.2e} s, Jacobian relative error {jac_err:.2e}"),
    )
}

fn protocol() -> Check {
    let mut cfg = demo_config();
    cfg.shots_per_term = 10_000;
    let clean = run_task(&cfg).unwrap();
    let repeat = run_task(&cfg).unwrap();
    let attack = AttackSpec::Pauli { errors: vec![PauliError::new(1, Pauli::X).unwrap()] };
    cfg.round_attacks.insert("SV2".into(), attack);
    let attacked = run_task(&cfg).unwrap();
    cfg.correction_enabled = true;
    let corrected = run_task(&cfg).unwrap();
    let ok = clean.certified_rounds == 4
        && clean.fix_error_m.is_some_and(|e| e < 1e-3)
        && clean == repeat
        && attacked.certified_rounds <= 3
        && attacked.fix.is_none()
        && corrected.certified_rounds == 4
        && !corrected.detection_events.is_empty();
    check(
        ok,
        format!(
            "clean {}/4 (error {:.1e} m), attacked {}/4 fix {}, corrected {}/4 with {} detection event(s), deterministic {}",
            clean.certified_rounds,
            clean.fix_error_m.unwrap_or(f64::NAN),
            attacked.certified_rounds,
            attacked.fix.is_some(),
            corrected.certified_rounds,
            corrected.detection_events.len(),
            clean == repeat
        ),
    )
}

fn soundness() -> Check {
    let mut r = rng(12);
    let clean = detection_probability(&AttackModel::NoAttack, 10_000, 5.0, 200, &mut r).unwrap();
    let x1 = detection_probability(&AttackModel::single_pauli(1, Pauli::X).unwrap(), 10_000, 5.0, 200, &mut r).unwrap();
    let false_reject = clean.probability;
    let false_accept = 1.0 - x1.probability;
    check(
        false_reject <= 0.05 && false_accept <= 0.05,
        format!("false rejection {false_reject:.3}, false acceptance under X1 {false_accept:.3} (200 trials)"),
    )
}

fn main() {
    let secs = |s: u64| Some(Duration::from_secs(s));
    let criteria: [Criterion; 12] = [
        ("CHSH classical and quantum values", secs(1), chsh),
        ("I5 classical bound", secs(1), i5_classical),
        ("I5 quantum saturation", secs(1), i5_quantum),
        ("sum-of-squares certificates", secs(5), sos),
        ("code states and encoder", None, code),
        ("error correction", None, correction),
        ("attack detectability", secs(1), detectability),
        ("depolarizing linearity", None, depolarizing),
        ("hardware table", None, table),
        ("positioning roundtrip", secs(5), positioning),
        ("end-to-end protocol", secs(30), protocol),
        ("statistical soundness", None, soundness),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let c = timed(*limit, f);
        if !c.ok {
            failed += 1;
        }
        println!("{} {:>2} {name}: {}", if c.ok { "PASS" } else { "FAIL" }, i + 1, c.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
