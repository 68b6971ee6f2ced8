//! Greedy nets versus exact covering and packing numbers on a small cycle.

use reachbound::metric::{brute_force_covering_number, brute_force_packing_number, greedy_maximal_packing, FiniteMetricSpace};

fn main() -> reachbound::Result<()> {
    let space = FiniteMetricSpace::cycle(12)?;
    println!("eps  N(eps)  P(eps)  P(2eps)  greedy");
    for eps in [1.0, 1.5, 2.0, 3.0] {
        let cover = brute_force_covering_number(&space, eps)?;
        let pack = brute_force_packing_number(&space, eps)?;
        let pack2 = brute_force_packing_number(&space, 2.0 * eps)?;
        let greedy = greedy_maximal_packing(&space, eps, 7)?;
        assert!(pack2 <= cover && cover <= pack);
        println!(
            "{eps:<4} {cover:<7} {pack:<7} {pack2:<8} {} (covering: {})",
            greedy.selected.len(),
            greedy.is_covering
        );
    }
    Ok(())
}
