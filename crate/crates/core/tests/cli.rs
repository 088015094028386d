use std::process::Command;

use qsgps::adversary::AttackOutcome;
use qsgps::cli::{invoke, SweepReport, EXIT_CONFIG, EXIT_NO_FIX, EXIT_OK, EXIT_SOLVER, EXIT_USAGE};
use qsgps::protocol::{ProtocolConfig, ProtocolReport};
use qsgps::resource::HardwareReport;

fn config(name: &str) -> String {
    format!("{}/configs/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn binary(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qsgps")).args(args).output().unwrap()
}

fn run(args: &[&str]) -> qsgps::cli::Invocation {
    invoke(std::iter::once("qsgps").chain(args.iter().copied()))
}

#[test]
fn binary_output_is_byte_identical() {
    let args = ["--seed", "5", "bell", "--shots", "2000"];
    let a = binary(&args);
    let b = binary(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = binary(&["--seed", "6", "bell", "--shots", "2000"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn attack_sweep_csv_and_json() {
    let out = run(&["attack-sweep", "--attacks", "all-single-pauli", "--threshold", "5"]);
    assert_eq!(out.code, EXIT_OK);
    let mut reader = csv::Reader::from_reader(out.stdout.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 15);
    let max = rows.iter().map(|r| r[1].parse::<f64>().unwrap()).fold(f64::NEG_INFINITY, f64::max);
    assert!((max - (4.0 * 2f64.sqrt() - 1.0)).abs() < 1e-12);
    assert!(rows.iter().all(|r| &r[2] == "false"));

    let out = run(&["--format", "json", "attack-sweep", "--attacks", "all-two-qubit", "--correct"]);
    let report: SweepReport = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(report.rows.len(), 90);
    let again: Vec<AttackOutcome> = serde_json::from_str(&serde_json::to_string(&report.rows).unwrap()).unwrap();
    assert_eq!(again, report.rows);
}

#[test]
fn hardware_from_file_and_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hw.json");
    let out = run(&["hardware", "--profile-file", &config("profile.json"), "--output", path.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert!(out.stdout.is_empty());
    let reports: Vec<HardwareReport> = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(reports[0].profile.name, "custom");
    assert_eq!(reports[0].cost.n_2q, 8);
    let figure = run(&["hardware", "--profile", "superconducting", "--circuit", "figure"]);
    let reports: Vec<HardwareReport> = serde_json::from_str(&figure.stdout).unwrap();
    assert_eq!(reports[0].cost.d_2q, 7);
}

#[test]
fn protocol_run_exit_codes() {
    let clean = run(&["protocol-run", "--config", &config("protocol_clean.json"), "--shots", "2000"]);
    assert_eq!(clean.code, EXIT_OK, "{}", clean.stderr);
    let report: ProtocolReport = serde_json::from_str(&clean.stdout).unwrap();
    assert_eq!(report.certified_rounds, 4);
    assert!(report.fix_error_m.unwrap() < 1e-3);

    let attacked = run(&["protocol-run", "--config", &config("protocol_attacked.json"), "--shots", "2000"]);
    assert_eq!(attacked.code, EXIT_NO_FIX);
    let report: ProtocolReport = serde_json::from_str(&attacked.stdout).unwrap();
    assert_eq!(report.certified_rounds, 3);

    let corrected = run(&["protocol-run", "--config", &config("protocol_corrected.json"), "--shots", "2000"]);
    assert_eq!(corrected.code, EXIT_OK);

    let forged = run(&["protocol-run", "--config", &config("protocol_forgery.json"), "--shots", "2000"]);
    assert_eq!(forged.code, EXIT_NO_FIX);
    let report: ProtocolReport = serde_json::from_str(&forged.stdout).unwrap();
    assert_eq!(report.certified_rounds, 0);
}

#[test]
fn config_files_parse() {
    for name in ["protocol_clean.json", "protocol_attacked.json", "protocol_corrected.json", "protocol_forgery.json"] {
        let cfg = ProtocolConfig::from_file(std::path::Path::new(&config(name))).unwrap();
        let back = ProtocolConfig::from_json(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }
    let out = run(&["position", "--scenario", &config("scenario.json")]);
    assert_eq!(out.code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert!(v["position_error_m"].as_f64().unwrap() < 1e-3);
}

#[test]
fn failures_are_machine_readable() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = run(&["protocol-run", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_CONFIG);
    let err: serde_json::Value = serde_json::from_str(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "malformed_json");
    assert_eq!(err["exit_code"], EXIT_CONFIG);

    // four satellites in a plane through the receiver
    let sat = |id: &str, x: f64, y: f64| {
        serde_json::json!({"id": id, "position": {"x": x, "y": y, "z": 0.0}, "transmit_time": 0.0})
    };
    let scenario = serde_json::json!({
        "satellites": [sat("A", 2e7, 0.0), sat("B", 0.0, 2e7), sat("C", -2e7, 0.0), sat("D", 0.0, -2e7)],
        "pseudoranges": [
            {"satellite_id": "A", "rho": 2e7}, {"satellite_id": "B", "rho": 2e7},
            {"satellite_id": "C", "rho": 2e7}, {"satellite_id": "D", "rho": 2e7}
        ]
    });
    let path = dir.path().join("flat.json");
    std::fs::write(&path, scenario.to_string()).unwrap();
    let out = run(&["position", "--scenario", path.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_SOLVER, "{}", out.stdout);

    let out = binary(&["classical-bound", "--functional", "i6"]);
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
    assert!(out.stdout.is_empty());
}

#[test]
fn every_subcommand_has_json_and_table() {
    let scenario = config("scenario.json");
    let protocol = config("protocol_clean.json");
    let commands: [&[&str]; 7] = [
        &["verify-code"],
        &["bell", "--shots", "100"],
        &["classical-bound"],
        &["attack-sweep"],
        &["hardware"],
        &["position", "--scenario", &scenario],
        &["protocol-run", "--config", &protocol, "--shots", "100"],
    ];
    for cmd in commands {
        for format in ["json", "table"] {
            let mut args = vec!["--format", format];
            args.extend_from_slice(cmd);
            let out = run(&args);
            assert!(out.code == EXIT_OK || out.code == EXIT_NO_FIX, "{args:?}: {}", out.stderr);
            assert!(!out.stdout.is_empty());
            if format == "json" {
                serde_json::from_str::<serde_json::Value>(&out.stdout).unwrap();
            }
        }
    }
}
