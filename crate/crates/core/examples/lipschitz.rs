//! Distances between exponentials of skew-Hermitian matrices against the
//! distance of the generators.

use reachbound::linalg::{check_exp_lipschitz, random_skew_in_ball};

fn main() -> reachbound::Result<()> {
    for (i, radius) in [0.2, 0.5, 1.0, 3.0].into_iter().enumerate() {
        let x = random_skew_in_ball(3, radius, 10 + i as u64)?;
        let y = random_skew_in_ball(3, radius, 20 + i as u64)?;
        let t = check_exp_lipschitz(&x, &y)?;
        let lower = t.lower_lhs.map_or("n/a".to_string(), |v| format!("{v:.4}"));
        println!("r = {radius}: {lower} <= |e^X - e^Y| = {:.4} <= {:.4}", t.mid, t.upper_rhs);
    }
    Ok(())
}
