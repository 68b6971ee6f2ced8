use std::process::{Command, Output};

fn reachbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reachbound")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn circuit_bound_prints_log_value() {
    let out = reachbound(&["bounds", "circuit", "--d", "2", "--k", "2", "--L", "10", "--ng", "100", "--eps", "0.001"]);
    assert!(out.status.success());
    let v = json(&out);
    let expected = 2.0 * 100.0 * 10f64.ln() + 16.0 * 100.0 * (14.0 * 100.0 / 0.001f64).ln();
    assert!((v["ln_value"].as_f64().unwrap() - expected).abs() < 1e-9 * expected);
}

#[test]
fn bound_outside_validity_is_usage_error() {
    let out = reachbound(&["bounds", "circuit", "--d", "2", "--k", "2", "--L", "4", "--ng", "1", "--eps", "1.0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_flag_exits_one_and_help_exits_zero() {
    assert_eq!(reachbound(&["bounds", "grassmann", "--n", "2"]).status.code(), Some(1));
    assert_eq!(reachbound(&["--help"]).status.code(), Some(0));
    assert_eq!(reachbound(&["verify", "lemmas", "--which", "nope"]).status.code(), Some(1));
}

#[test]
fn tevol_and_grassmann() {
    let out = reachbound(&[
        "bounds", "tevol", "--d", "2", "--k", "2", "--L", "8", "--K", "7", "--z", "3", "--h", "1", "--T", "0.5", "--eps", "0.001",
    ]);
    assert!(out.status.success());
    assert!(json(&out)["ln_value"].as_f64().unwrap() > 0.0);
    let out = reachbound(&["bounds", "grassmann", "--n", "2", "--m", "4", "--eps", "0.01"]);
    let v = json(&out);
    assert_eq!(v["lower_valid"], true);
    assert!(v["lower_log"].as_f64().unwrap() < v["upper_log"].as_f64().unwrap());
}

#[test]
fn crossover_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.csv");
    let out = reachbound(&[
        "crossover", "--d", "2", "--k", "2", "--eps", "0.001", "--lmin", "8", "--lmax", "10", "--resource", "circuit",
        "--format", "csv", "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "L,m,n,grassmann_lower_log,minimal,bound_log");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("8,256,128,"));
}

#[test]
fn crossover_json_parses_back() {
    let out = reachbound(&["crossover", "--d", "2", "--k", "2", "--lmin", "8", "--lmax", "9", "--resource", "time"]);
    assert!(out.status.success());
    let report = reachbound::limits::parse_report_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(report.rows.len(), 2);
}

#[test]
fn verify_subcommands_pass() {
    for args in [
        vec!["verify", "lipschitz", "--n", "2", "--radius", "0.5", "--trials", "200", "--seed", "1"],
        vec!["verify", "kato", "--n", "1", "--m", "3", "--trials", "50", "--seed", "2"],
        vec!["verify", "trotter", "--T", "1", "--nt", "8", "--seed", "5"],
        vec!["verify", "lemmas", "--which", "quotient"],
    ] {
        let out = reachbound(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
    }
}

#[test]
fn trotter_from_file_and_saved_net_discretize() {
    let dir = tempfile::tempdir().unwrap();
    let h = reachbound::trotter::random_chain_hamiltonian_seeded(3, 2, 4).unwrap();
    let hpath = dir.path().join("h.json");
    std::fs::write(&hpath, serde_json::to_string(&h.to_json()).unwrap()).unwrap();
    let out = reachbound(&["verify", "trotter", "--hamiltonian", hpath.to_str().unwrap(), "--T", "0.7", "--nt", "16"]);
    assert!(out.status.success());
    let cert = json(&out);
    assert!(cert["measured"].as_f64().unwrap() <= cert["bound"].as_f64().unwrap());

    let net = dir.path().join("net.bin");
    let out = reachbound(&[
        "verify", "nets", "--n", "2", "--eps", "0.7", "--samples", "100", "--save", net.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let register = reachbound::circuit::QuditRegister::new(3, 2).unwrap();
    let c = reachbound::circuit::random_circuit_seeded(register, 1, 5, 8).unwrap();
    let cpath = dir.path().join("c.json");
    std::fs::write(&cpath, serde_json::to_string(&c.to_json()).unwrap()).unwrap();
    let out = reachbound(&[
        "circuit", "discretize", "--circuit", cpath.to_str().unwrap(), "--eps", "0.7", "--net", net.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["per_gate"].as_array().unwrap().len(), 5);
    assert!(v["unitary_deviation"].as_f64().unwrap() <= v["gate_error_bound"].as_f64().unwrap() + 1e-12);
}

#[test]
fn unreadable_input_is_usage_error() {
    let out = reachbound(&["verify", "trotter", "--hamiltonian", "/definitely/missing.json", "--T", "1", "--nt", "4"]);
    assert_eq!(out.status.code(), Some(1));
}
