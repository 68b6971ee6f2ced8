//! Seeded randomized and exhaustive sweeps over the library's inequalities.
//! Each sweep returns a serializable summary with a `pass` flag; the command
//! line front end and the acceptance tests both call into here.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{check_discretization, discretize_circuit, random_circuit, QuditRegister};
use crate::error::{Error, Result};
use crate::grassmann::{
    kato_unitary, product_covering_check, projector_from_subspace, quotient_covering_check, Projector, ProductReport,
    QuotientReport, Subspace,
};
use crate::limits::least_squares;
use crate::linalg::{
    check_exp_lipschitz, derive_seed, haar_unitary_with, identity, op_distance, random_hermitian,
    random_skew_in_ball_with, rng_from_seed, unitarity_deviation, ComplexMatrix, LipschitzTriple, SkewHermitian,
    UnitaryMatrix, C64,
};
use crate::metric::{
    brute_force_covering_number, brute_force_packing_number, greedy_maximal_packing, FiniteMetricSpace,
};
use crate::trotter::{
    commutation_degree, exact_propagator, random_chain_hamiltonian, trotter_error_bound, trotter_propagator,
    TimeDependentHamiltonian, TrotterCertificate, CERTIFY_SLACK, CERTIFY_TOL,
};
use crate::unitary_nets::{
    build_unitary_net, empirical_covering_check, unitary_covering_bounds, CoveringCheck, LatticeNet,
    UnitaryCoveringBounds, DEFAULT_MAX_ELEMENTS,
};

/// Slack for the exponential-map inequalities.
pub const LIPSCHITZ_SLACK: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LipschitzSweep {
    pub n: usize,
    pub radius: f64,
    pub trials: u64,
    pub upper_violations: u64,
    /// Pairs where `2 - e^r > 0`, so the lower inequality says something.
    pub lower_checked: u64,
    pub lower_violations: u64,
    /// Pair with the smallest `|X - Y| - |e^X - e^Y|`.
    pub worst_upper: Option<LipschitzTriple>,
    /// Pair with the smallest `|e^X - e^Y| - (2 - e^r)|X - Y|`.
    pub worst_lower: Option<LipschitzTriple>,
    pub pass: bool,
}

fn clamp_to_ball(x: ComplexMatrix, radius: f64) -> SkewHermitian {
    let s = SkewHermitian::from_projection(&x);
    let norm = s.norm();
    if norm > radius {
        SkewHermitian::from_projection(&(s.matrix() * C64::new(radius / norm, 0.0)))
    } else {
        s
    }
}

/// Random pairs in the radius-`radius` ball of u(n). Odd trials pair X with a
/// small perturbation of itself so that the lower bound sees close pairs.
pub fn lipschitz_sweep(n: usize, radius: f64, trials: u64, seed: u64) -> Result<LipschitzSweep> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    let triples = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(derive_seed(seed, i));
            let x = random_skew_in_ball_with(n, radius, &mut rng)?;
            let y = if i % 2 == 1 {
                let delta = random_skew_in_ball_with(n, 0.05 * radius, &mut rng)?;
                clamp_to_ball(x.matrix() + delta.matrix(), radius)
            } else {
                random_skew_in_ball_with(n, radius, &mut rng)?
            };
            check_exp_lipschitz(&x, &y)
        })
        .collect::<Result<Vec<_>>>()?;
    let upper_violations = triples.iter().filter(|t| !t.upper_holds(LIPSCHITZ_SLACK)).count() as u64;
    let lower: Vec<&LipschitzTriple> = triples.iter().filter(|t| t.lower_lhs.is_some()).collect();
    let lower_violations = lower.iter().filter(|t| !t.lower_holds(LIPSCHITZ_SLACK)).count() as u64;
    let worst_upper = triples
        .iter()
        .min_by(|a, b| (a.upper_rhs - a.mid).total_cmp(&(b.upper_rhs - b.mid)))
        .copied();
    let lower_margin = |t: &LipschitzTriple| t.mid - t.lower_lhs.unwrap_or(0.0);
    let worst_lower = lower.iter().min_by(|a, b| lower_margin(a).total_cmp(&lower_margin(b))).map(|t| **t);
    Ok(LipschitzSweep {
        n,
        radius,
        trials,
        upper_violations,
        lower_checked: lower.len() as u64,
        lower_violations,
        worst_upper,
        worst_lower,
        pass: upper_violations == 0 && lower_violations == 0,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KatoSweep {
    pub n: usize,
    pub m: usize,
    pub trials: u64,
    pub failures: u64,
    pub max_unitarity_deviation: f64,
    pub max_conjugation_error: f64,
    /// Largest `|1 - V| / |P - Q|`; the guarantee is `5/√2`.
    pub max_upper_ratio: f64,
    /// Smallest `|1 - W| / |P - Q|` over alternative unitaries W mapping P to
    /// Q; the guarantee is `1/2`.
    pub min_lower_ratio: f64,
    pub pass: bool,
}

pub const KATO_UNITARITY_TOL: f64 = 1e-10;
pub const KATO_CONJUGATION_TOL: f64 = 1e-8;
pub const KATO_RATIO_SLACK: f64 = 1e-9;

struct KatoTrial {
    unitarity: f64,
    conjugation: f64,
    distance: f64,
    upper: f64,
    alternative: f64,
    ok: bool,
}

/// A unitary that fixes the range of `p`: independent Haar blocks on the
/// range and on its complement.
fn block_unitary(p: &Projector, rng: &mut impl Rng) -> Result<UnitaryMatrix> {
    let (vals, vecs) = crate::linalg::hermitian_eigen(p.matrix());
    let m = vals.len();
    let r = p.rank();
    // eigenvalues ascending: complement first, then range
    let a = haar_unitary_with(m - r, rng);
    let b = haar_unitary_with(r, rng);
    let mut block = ComplexMatrix::zeros(m, m);
    block.view_mut((0, 0), (m - r, m - r)).copy_from(a.matrix());
    block.view_mut((m - r, m - r), (r, r)).copy_from(b.matrix());
    UnitaryMatrix::new(&vecs * block * vecs.adjoint())
}

fn kato_trial(n: usize, m: usize, seed: u64) -> Result<KatoTrial> {
    let mut rng = rng_from_seed(seed);
    let p = projector_from_subspace(&Subspace::random(m, n, &mut rng)?)?;
    let (q, distance) = loop {
        let radius = rng.random_range(0.01..0.9);
        let w = random_skew_in_ball_with(m, radius, &mut rng)?.exp();
        let q = p.conjugated(&w)?;
        let distance = op_distance(p.matrix(), q.matrix());
        if distance <= std::f64::consts::FRAC_1_SQRT_2 && distance > 0.0 {
            break (q, distance);
        }
    };
    let v = kato_unitary(&p, &q)?;
    let unitarity = unitarity_deviation(v.matrix());
    let conjugation = op_distance(&(v.matrix() * p.matrix() * v.matrix().adjoint()), q.matrix());
    let upper = op_distance(&identity(m), v.matrix());
    let alt = v.matrix() * block_unitary(&p, &mut rng)?.matrix();
    let alternative = op_distance(&identity(m), &alt);
    let ok = unitarity <= KATO_UNITARITY_TOL
        && conjugation <= KATO_CONJUGATION_TOL
        && upper <= 5.0 / 2f64.sqrt() * distance + KATO_RATIO_SLACK
        && alternative >= distance / 2.0 - KATO_RATIO_SLACK;
    Ok(KatoTrial { unitarity, conjugation, distance, upper, alternative, ok })
}

/// Random rank-n projector pairs in C^m within `1/√2` of each other.
pub fn kato_sweep(n: usize, m: usize, trials: u64, seed: u64) -> Result<KatoSweep> {
    if n == 0 || n >= m {
        return Err(Error::invalid("need 1 <= n < m"));
    }
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    let results: Vec<Option<KatoTrial>> = (0..trials)
        .into_par_iter()
        .map(|i| kato_trial(n, m, derive_seed(seed, i)).ok())
        .collect();
    let done: Vec<&KatoTrial> = results.iter().flatten().collect();
    let failures = results.iter().filter(|r| r.as_ref().is_none_or(|t| !t.ok)).count() as u64;
    let fold_max = |f: fn(&KatoTrial) -> f64| done.iter().map(|t| f(t)).fold(0.0, f64::max);
    Ok(KatoSweep {
        n,
        m,
        trials,
        failures,
        max_unitarity_deviation: fold_max(|t| t.unitarity),
        max_conjugation_error: fold_max(|t| t.conjugation),
        max_upper_ratio: fold_max(|t| t.upper / t.distance),
        min_lower_ratio: done.iter().map(|t| t.alternative / t.distance).fold(f64::INFINITY, f64::min),
        pass: failures == 0,
    })
}

/// Random metric: points in the unit square (even index) or shortest paths
/// in a random weighted complete graph (odd index).
pub fn random_metric_space(points: usize, index: u64, rng: &mut impl Rng) -> Result<FiniteMetricSpace> {
    if index % 2 == 0 {
        let pts: Vec<(f64, f64)> = (0..points).map(|_| (rng.random(), rng.random())).collect();
        FiniteMetricSpace::from_points(&pts, |a, b| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt())
    } else {
        let mut d = vec![vec![0.0; points]; points];
        for i in 0..points {
            for j in i + 1..points {
                let w = rng.random_range(0.1..2.0);
                d[i][j] = w;
                d[j][i] = w;
            }
        }
        for k in 0..points {
            for i in 0..points {
                for j in 0..points {
                    let via = d[i][k] + d[k][j];
                    if via < d[i][j] {
                        d[i][j] = via;
                    }
                }
            }
        }
        FiniteMetricSpace::from_fn(points, |i, j| d[i][j])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SandwichSweep {
    pub spaces: u64,
    pub checks: u64,
    pub sandwich_failures: u64,
    pub greedy_failures: u64,
    pub first_failure: Option<String>,
    pub pass: bool,
}

/// Packing at 2ε ≤ covering at ε ≤ packing at ε on random spaces, plus the
/// net certificates of seeded greedy packings.
pub fn sandwich_sweep(spaces: u64, max_points: usize, eps_per_space: usize, seed: u64) -> Result<SandwichSweep> {
    if max_points < 1 || max_points > crate::metric::DEFAULT_EXACT_LIMIT {
        return Err(Error::invalid(format!(
            "max_points must be in 1..={}",
            crate::metric::DEFAULT_EXACT_LIMIT
        )));
    }
    let outcomes = (0..spaces)
        .into_par_iter()
        .map(|s| -> Result<(u64, u64, u64, Option<String>)> {
            let mut rng = rng_from_seed(derive_seed(seed, s));
            let size = rng.random_range(1..=max_points);
            let space = random_metric_space(size, s, &mut rng)?;
            // ε values at realized distances (boundary cases) and in between
            let mut dists: Vec<f64> = (0..size)
                .flat_map(|i| (i + 1..size).map(move |j| (i, j)))
                .map(|(i, j)| space.distance(i, j))
                .collect();
            dists.sort_by(f64::total_cmp);
            let mut epsilons = Vec::with_capacity(eps_per_space);
            for e in 0..eps_per_space {
                let eps = if dists.is_empty() || e % 2 == 1 {
                    rng.random_range(0.01..1.5)
                } else {
                    dists[rng.random_range(0..dists.len())]
                };
                epsilons.push(eps);
            }
            let (mut checks, mut sandwich_bad, mut greedy_bad, mut first) = (0, 0, 0, None);
            for eps in epsilons {
                checks += 1;
                let cover = brute_force_covering_number(&space, eps)?;
                let pack = brute_force_packing_number(&space, eps)?;
                let pack2 = brute_force_packing_number(&space, 2.0 * eps)?;
                if !(pack2 <= cover && cover <= pack) {
                    sandwich_bad += 1;
                    first.get_or_insert(format!("space {s}, eps {eps}: {pack2} <= {cover} <= {pack} fails"));
                }
                for g in 0..3 {
                    let net = greedy_maximal_packing(&space, eps, derive_seed(seed ^ 0x5eed, s * 3 + g))?;
                    let len = net.selected.len();
                    if !(net.is_covering && net.is_packing && cover <= len && len <= pack) {
                        greedy_bad += 1;
                        first.get_or_insert(format!("space {s}, eps {eps}: greedy net of size {len} not certified"));
                    }
                }
            }
            Ok((checks, sandwich_bad, greedy_bad, first))
        })
        .collect::<Result<Vec<_>>>()?;
    let checks = outcomes.iter().map(|o| o.0).sum();
    let sandwich_failures = outcomes.iter().map(|o| o.1).sum();
    let greedy_failures = outcomes.iter().map(|o| o.2).sum();
    let first_failure = outcomes.into_iter().find_map(|o| o.3);
    Ok(SandwichSweep {
        spaces,
        checks,
        sandwich_failures,
        greedy_failures,
        first_failure,
        pass: sandwich_failures == 0 && greedy_failures == 0,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductSuite {
    pub reports: Vec<ProductReport>,
    pub pass: bool,
}

/// Products of cycles `C_a × C_b` with `2 <= a <= b <= max_side`.
pub fn product_suite(max_side: usize, epsilons: &[f64]) -> Result<ProductSuite> {
    let pairs: Vec<(usize, usize, f64)> = (2..=max_side)
        .flat_map(|a| (a..=max_side).flat_map(move |b| epsilons.iter().map(move |&e| (a, b, e))))
        .collect();
    let reports = pairs
        .par_iter()
        .map(|&(a, b, e)| product_covering_check(&FiniteMetricSpace::cycle(a)?, &FiniteMetricSpace::cycle(b)?, e))
        .collect::<Result<Vec<_>>>()?;
    let pass = reports.iter().all(|r| r.holds);
    Ok(ProductSuite { reports, pass })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuotientSuite {
    pub reports: Vec<QuotientReport>,
    pub pass: bool,
}

pub const QUOTIENT_CASES: [(usize, usize); 3] = [(8, 2), (12, 3), (12, 4)];

pub fn quotient_suite(cases: &[(usize, usize)], epsilons: &[f64]) -> Result<QuotientSuite> {
    let reports = cases
        .iter()
        .flat_map(|&(g, h)| epsilons.iter().map(move |&e| quotient_covering_check(g, h, e)))
        .collect::<Result<Vec<_>>>()?;
    let pass = reports.iter().all(|r| r.holds);
    Ok(QuotientSuite { reports, pass })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetReport {
    pub n: usize,
    pub epsilon: f64,
    pub elements: usize,
    pub bounds: UnitaryCoveringBounds,
    pub covering: CoveringCheck,
}

/// Builds the grid net for U(n) and checks it against Haar samples.
pub fn net_report(n: usize, epsilon: f64, samples: u64, seed: u64) -> Result<(NetReport, crate::unitary_nets::UnitaryNet)> {
    let net = build_unitary_net(n, epsilon, DEFAULT_MAX_ELEMENTS)?;
    let covering = empirical_covering_check(&net, samples, seed)?;
    let report = NetReport { n, epsilon, elements: net.len(), bounds: unitary_covering_bounds(n, epsilon)?, covering };
    Ok((report, net))
}

/// One random product-formula instance with its certificates at several
/// step counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrotterInstance {
    pub sites: usize,
    pub terms: usize,
    pub total_time: f64,
    pub certificates: Vec<TrotterCertificate>,
    /// Log-log slope of measured error against step count over all step
    /// counts; absent for a single term, where the product formula is exact.
    pub slope: Option<f64>,
    /// The same slope over the three finest step counts, which estimates the
    /// asymptotic order once coarse-step transients have died out.
    pub tail_slope: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrotterSuite {
    pub instances: Vec<TrotterInstance>,
    pub violations: u64,
    pub max_measured_over_bound: f64,
    /// Instances whose full-range slope misses `-1 ± SLOPE_TOL`.
    pub full_slopes_outside: u64,
    /// Instances whose tail slope misses `-1 ± SLOPE_TOL`; this decides `pass`.
    pub slopes_outside: u64,
    pub pass: bool,
}

pub const TROTTER_STEPS: [usize; 5] = [4, 8, 16, 32, 64];
pub const SLOPE_TOL: f64 = 0.15;

/// Certificates for one Hamiltonian at several step counts, sharing one
/// reference propagator.
pub fn certify_steps(h: &TimeDependentHamiltonian, total_time: f64, steps: &[usize]) -> Result<Vec<TrotterCertificate>> {
    let exact = exact_propagator(h, total_time, CERTIFY_TOL)?;
    let z = commutation_degree(h);
    let h_max = h.h_max(total_time)?;
    steps
        .iter()
        .map(|&n| {
            let approx = trotter_propagator(h, total_time, n)?;
            Ok(TrotterCertificate {
                total_time,
                steps: n,
                delta_t: total_time / n as f64,
                terms: h.num_terms(),
                z,
                h_max,
                bound: trotter_error_bound(total_time, n, h.num_terms(), z, h_max),
                measured: op_distance(exact.matrix(), approx.matrix()),
            })
        })
        .collect()
}

/// Random qubit chains with `2 <= L <= max_sites`, `1 <= K <= L - 1` bonds
/// and `T` in `(0, max_time]`.
pub fn trotter_suite(instances: u64, max_sites: usize, max_time: f64, seed: u64) -> Result<TrotterSuite> {
    if !(2..=6).contains(&max_sites) {
        return Err(Error::invalid("max_sites must be in 2..=6"));
    }
    let list = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(derive_seed(seed, i));
            let sites = rng.random_range(2..=max_sites);
            let terms = rng.random_range(1..sites);
            let total_time = max_time * (1.0 - rng.random::<f64>());
            let h = random_chain_hamiltonian(sites, terms, &mut rng)?;
            let certificates = certify_steps(&h, total_time, &TROTTER_STEPS)?;
            let pts: Vec<(f64, f64)> = certificates
                .iter()
                .map(|c| ((c.steps as f64).ln(), c.measured.ln()))
                .collect();
            let slope = (terms >= 2).then(|| least_squares(&pts).slope);
            let tail_slope = (terms >= 2).then(|| least_squares(&pts[pts.len() - 3..]).slope);
            Ok(TrotterInstance { sites, terms, total_time, certificates, slope, tail_slope })
        })
        .collect::<Result<Vec<_>>>()?;
    let all = list.iter().flat_map(|i| &i.certificates);
    let violations = all.clone().filter(|c| c.measured > c.bound + CERTIFY_SLACK).count() as u64;
    let max_measured_over_bound = all.map(|c| c.measured / c.bound).fold(0.0, f64::max);
    let outside = |f: fn(&TrotterInstance) -> Option<f64>| {
        list.iter().filter_map(f).filter(|s| !((s + 1.0).abs() <= SLOPE_TOL)).count() as u64
    };
    let full_slopes_outside = outside(|i| i.slope);
    let slopes_outside = outside(|i| i.tail_slope);
    Ok(TrotterSuite {
        instances: list,
        violations,
        max_measured_over_bound,
        full_slopes_outside,
        slopes_outside,
        pass: violations == 0 && slopes_outside == 0,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscretizationSweep {
    pub circuits: u64,
    pub violations: u64,
    /// Largest `deviation / bound`.
    pub max_deviation_ratio: f64,
    /// Largest `conjugation error / (2 bound w(O))`.
    pub max_conjugation_ratio: f64,
    /// Largest `bound / (N_G ε)`.
    pub max_budget_ratio: f64,
    pub pass: bool,
}

/// Random circuits on up to four qubits with 1 to 8 gates of locality
/// `k <= 2`, discretized against a materialized U(2) net (k = 1) or the
/// implicit U(4) lattice net (k = 2).
pub fn discretization_sweep(circuits: u64, epsilons: &[f64], seed: u64) -> Result<DiscretizationSweep> {
    let single_nets = epsilons
        .iter()
        .map(|&e| build_unitary_net(2, e, DEFAULT_MAX_ELEMENTS))
        .collect::<Result<Vec<_>>>()?;
    let pair_nets = epsilons.iter().map(|&e| LatticeNet::new(4, e)).collect::<Result<Vec<_>>>()?;
    let rows = (0..circuits)
        .into_par_iter()
        .map(|i| -> Result<(f64, f64, f64, bool)> {
            let mut rng = rng_from_seed(derive_seed(seed, i));
            let sites = rng.random_range(1..=4);
            let k = if sites == 1 { 1 } else { rng.random_range(1..=2) };
            let gates = rng.random_range(1..=8);
            let which = i as usize % epsilons.len();
            let eps = epsilons[which];
            let register = QuditRegister::new(sites, 2)?;
            let circuit = random_circuit(register, k, gates, &mut rng)?;
            let disc = if k == 1 {
                discretize_circuit(&circuit, &single_nets[which])?
            } else {
                discretize_circuit(&circuit, &pair_nets[which])?
            };
            let o = random_hermitian(1 << sites, rng.random_range(0.5..3.0), &mut rng);
            let check = check_discretization(&circuit, &disc, &o)?;
            let budget = gates as f64 * eps;
            let ok = check.holds(1e-12) && disc.gate_error_bound <= budget + 1e-12;
            let ratio = |a: f64, b: f64| if b > 0.0 { a / b } else if a > 1e-12 { f64::INFINITY } else { 0.0 };
            Ok((
                ratio(check.unitary_deviation, check.gate_error_bound),
                ratio(check.conjugation_error, check.conjugation_bound),
                disc.gate_error_bound / budget,
                ok,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let violations = rows.iter().filter(|r| !r.3).count() as u64;
    let max = |f: fn(&(f64, f64, f64, bool)) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    Ok(DiscretizationSweep {
        circuits,
        violations,
        max_deviation_ratio: max(|r| r.0),
        max_conjugation_ratio: max(|r| r.1),
        max_budget_ratio: max(|r| r.2),
        pass: violations == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweeps_pass() {
        assert!(lipschitz_sweep(2, std::f64::consts::PI, 200, 1).unwrap().pass);
        let low = lipschitz_sweep(3, 0.4, 200, 2).unwrap();
        assert!(low.pass && low.lower_checked == 200);
        let k = kato_sweep(1, 2, 50, 3).unwrap();
        assert!(k.pass, "{k:?}");
        assert!(k.min_lower_ratio >= 0.5 - 1e-9 && k.max_upper_ratio <= 5.0 / 2f64.sqrt());
        let s = sandwich_sweep(20, 8, 5, 4).unwrap();
        assert!(s.pass, "{s:?}");
        assert_eq!(s.checks, 100);
    }

    #[test]
    fn metric_suites_pass() {
        assert!(product_suite(4, &[0.5, 1.0, 2.0]).unwrap().pass);
        let q = quotient_suite(&QUOTIENT_CASES, &[0.5, 1.0, 2.0, 3.0]).unwrap();
        assert!(q.pass && q.reports.len() == 12);
    }

    #[test]
    fn random_spaces_are_metrics() {
        let mut rng = rng_from_seed(8);
        for i in 0..10 {
            assert_eq!(random_metric_space(7, i, &mut rng).unwrap().len(), 7);
        }
    }

    #[test]
    fn small_trotter_suite() {
        let s = trotter_suite(4, 3, 1.0, 5).unwrap();
        assert_eq!(s.violations, 0);
        assert!(s.instances.iter().all(|i| i.certificates.len() == 5));
    }

    #[test]
    fn small_discretization_sweep() {
        let s = discretization_sweep(6, &[0.5], 6).unwrap();
        assert!(s.pass, "{s:?}");
        assert!(s.max_budget_ratio <= 1.0);
    }
}
