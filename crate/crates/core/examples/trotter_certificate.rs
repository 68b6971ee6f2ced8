use reachbound::trotter::{certify_trotter, random_chain_hamiltonian_seeded};

fn main() -> reachbound::Result<()> {
    let h = random_chain_hamiltonian_seeded(4, 3, 11)?;
    println!("N_t   measured     bound");
    for steps in [4, 8, 16, 32, 64] {
        let cert = certify_trotter(&h, 1.5, steps)?;
        println!("{steps:<5} {:.4e}  {:.4e}", cert.measured, cert.bound);
    }
    Ok(())
}
