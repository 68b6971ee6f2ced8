//! Coarse-grain total Z magnetization on six qubits around two target
//! eigenvalues.

use reachbound::limits::{coarse_grain_spectrum, degeneracy_profile_extensive_z};

fn main() -> reachbound::Result<()> {
    let profile = degeneracy_profile_extensive_z(6)?;
    for (w, g) in profile.eigenvalues.iter().zip(&profile.degeneracies) {
        println!("{w:+.0}: {g}");
    }
    let cg = coarse_grain_spectrum(&profile, 0.0, 2.0, 1.0)?;
    println!("degeneracies near 0 and 2: {} and {}, shift <= {}", cg.degeneracy_1, cg.degeneracy_2, cg.shift_bound);
    Ok(())
}
