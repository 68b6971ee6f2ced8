use reachbound::circuit::{circuit_unitary, random_circuit_seeded, Circuit, CircuitJson, QuditRegister};
use reachbound::limits::{crossover_analysis, parse_report_json, render_report, ReportFormat, Resource};
use reachbound::linalg::op_distance;
use reachbound::trotter::{random_chain_hamiltonian_seeded, trotter_propagator, HamiltonianJson, TimeDependentHamiltonian};
use reachbound::unitary_nets::{build_unitary_net, UnitaryNet};

#[test]
fn circuit_json() {
    let c = random_circuit_seeded(QuditRegister::new(3, 2).unwrap(), 2, 6, 1).unwrap();
    let text = serde_json::to_string(&c.to_json()).unwrap();
    let back = Circuit::from_json(&serde_json::from_str::<CircuitJson>(&text).unwrap()).unwrap();
    let (a, b) = (circuit_unitary(&c).unwrap(), circuit_unitary(&back).unwrap());
    assert_eq!(op_distance(a.matrix(), b.matrix()), 0.0);
}

#[test]
fn hamiltonian_json() {
    let h = random_chain_hamiltonian_seeded(3, 2, 2).unwrap();
    let text = serde_json::to_string(&h.to_json()).unwrap();
    let back = TimeDependentHamiltonian::from_json(&serde_json::from_str::<HamiltonianJson>(&text).unwrap()).unwrap();
    let (a, b) = (trotter_propagator(&h, 1.0, 8).unwrap(), trotter_propagator(&back, 1.0, 8).unwrap());
    assert_eq!(op_distance(a.matrix(), b.matrix()), 0.0);
}

#[test]
fn report_json_is_bit_exact() {
    let r = crossover_analysis(2, 2, 1e-3, 8, 10, Resource::Time).unwrap();
    let text = render_report(&r, ReportFormat::Json);
    let back = parse_report_json(&text).unwrap();
    assert_eq!(back, r);
    assert_eq!(render_report(&back, ReportFormat::Json), text);
}

#[test]
fn net_file() {
    let net = build_unitary_net(1, 0.1, 1000).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("n.bin");
    net.save(&path).unwrap();
    let back = UnitaryNet::load(&path).unwrap();
    assert_eq!(back.len(), net.len());
    for (a, b) in net.elements().iter().zip(back.elements()) {
        assert_eq!(a.matrix(), b.matrix());
    }
}
