use reachbound::unitary_nets::{
    build_unitary_net, circle_covering_number, empirical_covering_check, unitary_covering_bounds, DEFAULT_MAX_ELEMENTS,
};

fn main() -> reachbound::Result<()> {
    for eps in [0.02, 0.05, 0.1] {
        let b = unitary_covering_bounds(1, eps)?;
        println!(
            "U(1) at {eps}: {} arcs, bounds [{:.1}, {:.1}]",
            circle_covering_number(eps)?,
            b.lower.map_or(f64::NAN, f64::exp),
            b.upper.map_or(f64::NAN, f64::exp)
        );
    }
    // a materialized net on U(2), probed with Haar samples
    let net = build_unitary_net(2, 0.5, DEFAULT_MAX_ELEMENTS)?;
    let check = empirical_covering_check(&net, 2000, 1)?;
    println!("U(2) net at 0.5: {} elements, worst sample gap {:.4}", net.len(), check.max_gap);
    Ok(())
}
