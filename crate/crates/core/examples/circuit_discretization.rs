//! Round every gate of a random two-local circuit to a net and compare the
//! resulting error with the per-gate budget.

use reachbound::circuit::{check_discretization, discretize_circuit, embed_operator, random_circuit_seeded, QuditRegister};
use reachbound::linalg::pauli_z;
use reachbound::unitary_nets::LatticeNet;

fn main() -> reachbound::Result<()> {
    let register = QuditRegister::new(4, 2)?;
    let circuit = random_circuit_seeded(register.clone(), 2, 12, 9)?;
    let net = LatticeNet::new(4, 0.3)?;
    let disc = discretize_circuit(&circuit, &net)?;
    let o = embed_operator(&register, &[0], &pauli_z())?;
    let check = check_discretization(&circuit, &disc, &o)?;
    println!("{} gates, budget {:.4}", circuit.len(), disc.gate_error_bound);
    println!("|U - U'| = {:.4}", check.unitary_deviation);
    println!("|U*OU - U'*OU'| = {:.4} <= {:.4}", check.conjugation_error, check.conjugation_bound);
    println!("holds: {}", check.holds(1e-9));
    Ok(())
}
