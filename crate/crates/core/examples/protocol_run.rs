//! A full positioning task, first clean and then with one satellite's
//! broadcast tampered with, with and without syndrome correction.

use qsgps::adversary::AttackSpec;
use qsgps::protocol::{demo_config, run_task, TaskStatus};
use qsgps::qsim::Pauli;

/// Returns the status of the clean, attacked and corrected runs.
pub fn run() -> qsgps::Result<[TaskStatus; 3]> {
    let mut cfg = demo_config();
    cfg.shots_per_term = 2_000;
    let clean = run_task(&cfg)?;

    let x1 = qsgps::code5::PauliError::new(1, Pauli::X)?;
    cfg.round_attacks.insert("SV3".into(), AttackSpec::Pauli { errors: vec![x1] });
    let attacked = run_task(&cfg)?;
    cfg.correction_enabled = true;
    let corrected = run_task(&cfg)?;

    for (name, report) in [("clean", &clean), ("attacked", &attacked), ("corrected", &corrected)] {
        let estimates: Vec<String> = report
            .rounds
            .iter()
            .map(|r| r.i5_estimate.map_or("jammed".into(), |v| format!("{v:.3}")))
            .collect();
        println!(
            "{name:<9} certified {}/{}  I5 [{}]  fix error {:?}  detections {}",
            report.certified_rounds,
            report.rounds.len(),
            estimates.join(", "),
            report.fix_error_m,
            report.detection_events.len()
        );
    }
    Ok([clean.status, attacked.status, corrected.status])
}

#[allow(dead_code)]
fn main() -> qsgps::Result<()> {
    run().map(|_| ())
}
