//! Runs every example under `cargo test`.

use std::f64::consts::SQRT_2;

#[path = "../examples/attack_detection.rs"]
mod attack_detection;
#[path = "../examples/bell_certification.rs"]
mod bell_certification;
#[path = "../examples/classical_bound.rs"]
mod classical_bound;
#[path = "../examples/code_verification.rs"]
mod code_verification;
#[path = "../examples/hardware_costs.rs"]
mod hardware_costs;
#[path = "../examples/positioning.rs"]
mod positioning;
#[path = "../examples/protocol_run.rs"]
mod protocol_run;

use qsgps::protocol::TaskStatus;

#[test]
fn code_verification_example() {
    assert!(code_verification::run().unwrap() > 1.0 - 1e-12);
}

#[test]
fn bell_certification_example() {
    let (chsh, i5) = bell_certification::run().unwrap();
    assert!((chsh - 2.0 * SQRT_2).abs() < 1e-12);
    assert!((i5 - (4.0 * SQRT_2 + 1.0)).abs() < 1e-12);
}

#[test]
fn classical_bound_example() {
    assert_eq!(classical_bound::run().unwrap(), (2.0, 5.0));
}

#[test]
fn attack_detection_example() {
    assert!((attack_detection::run().unwrap() - (4.0 * SQRT_2 - 1.0)).abs() < 1e-10);
}

#[test]
fn hardware_costs_example() {
    for (_, estimate, simulated) in hardware_costs::run().unwrap() {
        assert!(simulated > estimate - 0.01 && simulated <= 1.0);
    }
}

#[test]
fn positioning_example() {
    assert!(positioning::run().unwrap() < 1e-3);
}

#[test]
fn protocol_run_example() {
    assert_eq!(
        protocol_run::run().unwrap(),
        [TaskStatus::Fix, TaskStatus::NoFix, TaskStatus::FixWithDetections]
    );
}
