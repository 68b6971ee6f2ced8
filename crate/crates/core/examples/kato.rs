//! Kato's unitary between two nearby rank-2 projectors in C^5.

use reachbound::grassmann::{kato_unitary, projector_distance, projector_from_subspace, quotient_distance_bounds, Subspace};
use reachbound::linalg::{op_distance, random_skew_in_ball, unitarity_deviation};

fn main() -> reachbound::Result<()> {
    let p = projector_from_subspace(&Subspace::random(5, 2, &mut reachbound::linalg::rng_from_seed(3))?)?;
    let w = random_skew_in_ball(5, 0.3, 4)?.exp();
    let q = p.conjugated(&w)?;
    let v = kato_unitary(&p, &q)?;
    let moved = v.matrix() * p.matrix() * v.dagger().matrix();
    println!("|P - Q| = {:.4}", projector_distance(&p, &q)?);
    println!("V unitary to {:.1e}, |V P V* - Q| = {:.1e}", unitarity_deviation(v.matrix()), op_distance(&moved, q.matrix()));
    let b = quotient_distance_bounds(&p, &q)?;
    println!("quotient distance in [{:.4}, {:.4}]", b.lower, b.upper);
    Ok(())
}
