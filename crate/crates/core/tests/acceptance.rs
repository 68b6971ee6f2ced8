//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//! Runs with `harness = false`, so `cargo test --test acceptance` prints the
//! lines directly.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use reachbound::circuit::{embed_operator, QuditRegister};
use reachbound::limits::{
    coarse_grain_observable, coarse_grain_spectrum, crossover_analysis, degeneracy_profile_extensive_z, Resource,
    SpectrumProfile,
};
use reachbound::linalg::{pauli_z, ComplexMatrix};
use reachbound::unitary_nets::{circle_covering_number, unitary_covering_bounds};
use reachbound::verify::{
    discretization_sweep, kato_sweep, lipschitz_sweep, net_report, product_suite, quotient_suite, sandwich_sweep,
    trotter_suite, QUOTIENT_CASES,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn run(id: usize, name: &str, budget: Option<Duration>, f: impl FnOnce() -> reachbound::Result<Outcome>) -> bool {
    let start = Instant::now();
    let outcome = f().unwrap_or_else(|e| Outcome { pass: false, detail: format!("error: {e}") });
    let elapsed = start.elapsed();
    let in_time = budget.is_none_or(|b| elapsed <= b);
    let pass = outcome.pass && in_time;
    let budget_note = budget.map(|b| format!(" / budget {:.0}s", b.as_secs_f64())).unwrap_or_default();
    println!(
        "{} [{id}] {name}: {} ({:.2}s{budget_note})",
        if pass { "PASS" } else { "FAIL" },
        outcome.detail,
        elapsed.as_secs_f64()
    );
    pass
}

fn trotter() -> reachbound::Result<Outcome> {
    let suite = trotter_suite(60, 5, 2.0, 2024)?;
    let range = |f: fn(&reachbound::verify::TrotterInstance) -> Option<f64>| {
        let v: Vec<f64> = suite.instances.iter().filter_map(f).collect();
        let (lo, hi) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &s| (a.min(s), b.max(s)));
        (v.len(), lo, hi)
    };
    let (count, lo, hi) = range(|i| i.tail_slope);
    let (_, full_lo, full_hi) = range(|i| i.slope);
    Ok(Outcome {
        pass: suite.pass,
        detail: format!(
            "{} instances x 5 step counts, {} violations, max measured/bound {:.3e}; {count} non-commuting slopes on N_t 16..64 in [{lo:.3}, {hi:.3}], {} outside -1 +/- 0.15 (over 4..64: [{full_lo:.3}, {full_hi:.3}], {} outside)",
            suite.instances.len(),
            suite.violations,
            suite.max_measured_over_bound,
            suite.slopes_outside,
            suite.full_slopes_outside
        ),
    })
}

fn lipschitz() -> reachbound::Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for n in [2, 3, 4, 6] {
        let wide = lipschitz_sweep(n, PI, 10_000, 100 + n as u64)?;
        let narrow = lipschitz_sweep(n, 0.4, 10_000, 200 + n as u64)?;
        pass &= wide.pass && narrow.pass && narrow.lower_checked == 10_000;
        parts.push(format!(
            "n={n}: upper viol {}+{}, lower viol {}/{}",
            wide.upper_violations, narrow.upper_violations, narrow.lower_violations, narrow.lower_checked
        ));
    }
    Ok(Outcome { pass, detail: parts.join("; ") })
}

fn kato() -> reachbound::Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for (n, m) in [(1, 2), (2, 4), (3, 8)] {
        let s = kato_sweep(n, m, 1000, 300 + m as u64)?;
        pass &= s.pass;
        parts.push(format!(
            "({n},{m}): {} failures, unitarity {:.1e}, conjugation {:.1e}, max |1-V|/|P-Q| {:.3}",
            s.failures, s.max_unitarity_deviation, s.max_conjugation_error, s.max_upper_ratio
        ));
    }
    Ok(Outcome { pass, detail: parts.join("; ") })
}

fn sandwich() -> reachbound::Result<Outcome> {
    let s = sandwich_sweep(200, 12, 5, 400)?;
    Ok(Outcome {
        pass: s.pass && s.checks == 1000,
        detail: format!(
            "{} spaces, {} checks, {} sandwich failures, {} greedy failures",
            s.spaces, s.checks, s.sandwich_failures, s.greedy_failures
        ),
    })
}

fn unitary_sanity() -> reachbound::Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for (eps, expected) in [(0.02, 158), (0.05, 63), (0.1, 32)] {
        let n = circle_covering_number(eps)?;
        let b = unitary_covering_bounds(1, eps)?;
        let (lo, hi) = (b.lower.unwrap_or(f64::NAN).exp(), b.upper.unwrap_or(f64::NAN).exp());
        let ok = n == expected && lo <= n as f64 && n as f64 <= hi;
        pass &= ok;
        parts.push(format!("N(U(1), {eps}) = {n} in [{lo:.1}, {hi:.1}]"));
    }
    let (report, _) = net_report(2, 0.5, 10_000, 500)?;
    pass &= report.covering.pass && report.covering.max_gap <= 0.5;
    parts.push(format!(
        "U(2) net at 0.5: {} elements, max gap {:.4} over {} samples",
        report.elements, report.covering.max_gap, report.covering.samples
    ));
    Ok(Outcome { pass, detail: parts.join("; ") })
}

fn discretization() -> reachbound::Result<Outcome> {
    let s = discretization_sweep(100, &[0.3, 0.5], 600)?;
    Ok(Outcome {
        pass: s.pass,
        detail: format!(
            "{} circuits, {} violations; max deviation/bound {:.3}, max conjugation/bound {:.3}, max bound/(N_G eps) {:.3}",
            s.circuits, s.violations, s.max_deviation_ratio, s.max_conjugation_ratio, s.max_budget_ratio
        ),
    })
}

fn products_quotients() -> reachbound::Result<Outcome> {
    let eps = [0.5, 1.0, 1.5, 2.0, 3.0];
    let p = product_suite(8, &eps)?;
    let q = quotient_suite(&QUOTIENT_CASES, &eps)?;
    let bad_p = p.reports.iter().filter(|r| !r.holds).count();
    let bad_q = q.reports.iter().filter(|r| !r.holds).count();
    Ok(Outcome {
        pass: p.pass && q.pass,
        detail: format!(
            "{} product instances ({bad_p} violations), {} quotient instances ({bad_q} violations)",
            p.reports.len(),
            q.reports.len()
        ),
    })
}

fn crossover() -> reachbound::Result<Outcome> {
    let gates = crossover_analysis(2, 2, 1e-3, 8, 14, Resource::Circuit)?;
    let time = crossover_analysis(2, 2, 1e-3, 8, 14, Resource::Time)?;
    let gfit = gates.fit.as_ref().expect("several rows");
    let tfit = time.fit.as_ref().expect("several rows");
    let ratios_ok = gfit.ratios.iter().all(|r| (3.5..=4.5).contains(r));
    let increasing = |r: &reachbound::limits::CrossoverReport| r.rows.windows(2).all(|w| w[1].minimal > w[0].minimal);
    let (lo, hi) = gfit.ratios.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
    Ok(Outcome {
        pass: ratios_ok && tfit.r_squared >= 0.99 && increasing(&gates) && increasing(&time),
        detail: format!(
            "minimal N_G {:.0} -> {:.0}, per-site ratios in [{lo:.3}, {hi:.3}]; minimal T {:.4e} -> {:.4e}, log T vs L R^2 = {:.5}",
            gates.rows[0].minimal,
            gates.rows[gates.rows.len() - 1].minimal,
            time.rows[0].minimal,
            time.rows[time.rows.len() - 1].minimal,
            tfit.r_squared
        ),
    })
}

fn coarse_graining() -> reachbound::Result<Outcome> {
    let profile = degeneracy_profile_extensive_z(4)?;
    let cg = coarse_grain_spectrum(&profile, 0.0, 2.0, 1.0)?;
    let register = QuditRegister::new(4, 2)?;
    let mut o = ComplexMatrix::zeros(16, 16);
    for s in 0..4 {
        o += embed_operator(&register, &[s], &pauli_z())?;
    }
    // degeneracies straight from the matrix
    let direct = SpectrumProfile::from_hermitian(&o)?;
    let count = |w: f64| {
        direct
            .eigenvalues
            .iter()
            .zip(&direct.degeneracies)
            .filter(|(x, _)| (*x - w).abs() <= 0.5)
            .map(|(_, g)| *g)
            .sum::<u64>()
    };
    let (_, shift) = coarse_grain_observable(&o, 0.0, 2.0, 1.0)?;
    let pass = (cg.degeneracy_1, cg.degeneracy_2) == (6, 4)
        && (count(0.0), count(2.0)) == (6, 4)
        && shift <= 0.5 + 1e-12;
    Ok(Outcome {
        pass,
        detail: format!(
            "degeneracies ({}, {}), enumeration ({}, {}), |O - O'| = {shift:.3e}",
            cg.degeneracy_1,
            cg.degeneracy_2,
            count(0.0),
            count(2.0)
        ),
    })
}

fn main() {
    let results = [
        run(1, "product-formula certificates", Some(Duration::from_secs(300)), trotter),
        run(2, "exponential map Lipschitz sandwich", Some(Duration::from_secs(120)), lipschitz),
        run(3, "Kato unitary", None, kato),
        run(4, "covering/packing sandwich", None, sandwich),
        run(5, "unitary group covering sanity", None, unitary_sanity),
        run(6, "circuit discretization", None, discretization),
        run(7, "products and quotients", None, products_quotients),
        run(8, "crossover growth", Some(Duration::from_secs(10)), crossover),
        run(9, "spectrum coarse graining", None, coarse_graining),
    ];
    let failed = results.iter().filter(|p| !**p).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
