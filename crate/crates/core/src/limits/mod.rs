//! Log-domain bound values, spectrum coarse graining, and the crossover
//! between reachable-set coverings and the Grassmannian packing requirement.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::circuit_count_bound;
use crate::error::{Error, Result};
use crate::grassmann::grassmann_covering_bounds;
use crate::linalg::{check_hermitian, hermitian_eigen, op_distance, spectral_apply, ComplexMatrix, Spectrum, C64};
use crate::trotter::evolution_count_bound;

mod report;

pub use report::{emit_report, parse_report_json, render_report, ReportFormat};

/// Where a log-domain value came from: a label plus the parameters it was
/// evaluated at.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundContext {
    pub label: String,
    pub params: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

/// Natural logarithm of a count too large to hold directly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogBound {
    pub ln_value: f64,
    pub context: BoundContext,
}

impl LogBound {
    pub(crate) fn new(ln_value: f64, label: &str, params: &[(&str, f64)]) -> Self {
        LogBound {
            ln_value,
            context: BoundContext {
                label: label.to_string(),
                params: params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
                notes: Vec::new(),
            },
        }
    }

    pub(crate) fn note(mut self, note: impl Into<String>) -> Self {
        self.context.notes.push(note.into());
        self
    }

    pub fn log10(&self) -> f64 {
        self.ln_value / std::f64::consts::LN_10
    }
}

/// Ordinary least-squares line through `(x, y)` points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn least_squares(points: &[(f64, f64)]) -> LineFit {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    LineFit { slope, intercept: my - slope * mx, r_squared }
}

/// Distinct eigenvalues of an observable (ascending) with multiplicities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumProfile {
    pub eigenvalues: Vec<f64>,
    pub degeneracies: Vec<u64>,
    /// Half the spread between extreme eigenvalues.
    pub width: f64,
}

/// Eigenvalues closer than this (relative to the spectral scale) are merged.
const MERGE_TOL: f64 = 1e-9;

impl SpectrumProfile {
    pub fn new(eigenvalues: Vec<f64>, degeneracies: Vec<u64>) -> Result<Self> {
        if eigenvalues.is_empty() || eigenvalues.len() != degeneracies.len() {
            return Err(Error::invalid("need equally many (>= 1) eigenvalues and degeneracies"));
        }
        if eigenvalues.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        if eigenvalues.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("eigenvalues must be strictly increasing"));
        }
        if degeneracies.contains(&0) {
            return Err(Error::invalid("degeneracies must be positive"));
        }
        let width = (eigenvalues[eigenvalues.len() - 1] - eigenvalues[0]) / 2.0;
        Ok(SpectrumProfile { eigenvalues, degeneracies, width })
    }

    pub fn from_hermitian(o: &ComplexMatrix) -> Result<Self> {
        let spectrum = Spectrum::of(o)?;
        let scale = spectrum.eigenvalues.iter().fold(1.0f64, |a, x| a.max(x.abs()));
        let mut values: Vec<f64> = Vec::new();
        let mut counts: Vec<u64> = Vec::new();
        for &x in &spectrum.eigenvalues {
            match values.last() {
                Some(&last) if x - last <= MERGE_TOL * scale => *counts.last_mut().expect("paired") += 1,
                _ => {
                    values.push(x);
                    counts.push(1);
                }
            }
        }
        SpectrumProfile::new(values, counts)
    }

    /// Total multiplicity, i.e. the Hilbert-space dimension.
    pub fn dimension(&self) -> u64 {
        self.degeneracies.iter().sum()
    }
}

/// Spectrum after moving every eigenvalue within ε/2 of either target onto it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoarseGrained {
    pub profile: SpectrumProfile,
    /// Largest eigenvalue shift allowed by construction; bounds `|O - O'|`.
    pub shift_bound: f64,
    pub degeneracy_1: u64,
    pub degeneracy_2: u64,
}

fn check_targets(omega_1: f64, omega_2: f64, epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::invalid("epsilon must be positive"));
    }
    if !(omega_1 < omega_2) {
        return Err(Error::invalid("need omega_1 < omega_2"));
    }
    if omega_2 - omega_1 <= epsilon {
        return Err(Error::invalid(format!(
            "neighbourhoods of radius epsilon/2 around {omega_1} and {omega_2} overlap"
        )));
    }
    Ok(())
}

fn snap(x: f64, omega_1: f64, omega_2: f64, half: f64) -> (f64, u8) {
    if (x - omega_1).abs() <= half {
        (omega_1, 1)
    } else if (x - omega_2).abs() <= half {
        (omega_2, 2)
    } else {
        (x, 0)
    }
}

pub fn coarse_grain_spectrum(profile: &SpectrumProfile, omega_1: f64, omega_2: f64, epsilon: f64) -> Result<CoarseGrained> {
    check_targets(omega_1, omega_2, epsilon)?;
    let half = epsilon / 2.0;
    let mut merged: BTreeMap<u64, (f64, u64)> = BTreeMap::new();
    let (mut deg_1, mut deg_2) = (0, 0);
    for (&x, &g) in profile.eigenvalues.iter().zip(&profile.degeneracies) {
        let (y, which) = snap(x, omega_1, omega_2, half);
        match which {
            1 => deg_1 += g,
            2 => deg_2 += g,
            _ => {}
        }
        // order-preserving key for finite floats
        let key = if y >= 0.0 { y.to_bits() ^ (1 << 63) } else { !y.to_bits() };
        merged.entry(key).or_insert((y, 0)).1 += g;
    }
    let (values, counts) = merged.into_values().unzip();
    Ok(CoarseGrained {
        profile: SpectrumProfile::new(values, counts)?,
        shift_bound: half,
        degeneracy_1: deg_1,
        degeneracy_2: deg_2,
    })
}

/// Explicit `O'` with the same eigenvectors as `O` and coarse-grained
/// eigenvalues, together with the measured `|O - O'|`.
pub fn coarse_grain_observable(o: &ComplexMatrix, omega_1: f64, omega_2: f64, epsilon: f64) -> Result<(ComplexMatrix, f64)> {
    check_targets(omega_1, omega_2, epsilon)?;
    check_hermitian(o)?;
    let (vals, vecs) = hermitian_eigen(o);
    let snapped: Vec<C64> = vals.iter().map(|&x| C64::new(snap(x, omega_1, omega_2, epsilon / 2.0).0, 0.0)).collect();
    let out = spectral_apply(&vecs, &snapped);
    let shift = op_distance(o, &out);
    Ok((out, shift))
}

/// Spectrum of `Σ_i σ_z^(i)` on L qubits: eigenvalue `L - 2j` with
/// multiplicity `C(L, j)`, listed in ascending order.
pub fn degeneracy_profile_extensive_z(sites: usize) -> Result<SpectrumProfile> {
    if sites == 0 || sites > 30 {
        return Err(Error::invalid(format!("L must be in 1..=30, got {sites}")));
    }
    let mut binom = vec![1u64; sites + 1];
    for j in 1..=sites {
        binom[j] = binom[j - 1] * (sites - j + 1) as u64 / j as u64;
    }
    let values = (0..=sites).rev().map(|j| sites as f64 - 2.0 * j as f64).collect();
    let counts = (0..=sites).rev().map(|j| binom[j]).collect();
    SpectrumProfile::new(values, counts)
}

/// Below this ε the Grassmannian lower bound at n = m/2 is positive for every m.
pub const NONTRIVIAL_EPSILON: f64 = 9.0 / 1805.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Resource {
    Circuit,
    Time,
}

impl Resource {
    pub fn as_str(&self) -> &'static str {
        match self {
            Resource::Circuit => "circuit",
            Resource::Time => "time",
        }
    }
}

impl std::str::FromStr for Resource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "circuit" => Ok(Resource::Circuit),
            "time" => Ok(Resource::Time),
            other => Err(Error::invalid(format!("unknown resource {other:?}; expected circuit or time"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossoverRow {
    #[serde(rename = "L")]
    pub sites: usize,
    pub m: u64,
    pub n: u64,
    pub grassmann_lower_log: f64,
    /// Smallest gate count (integer) or evolution time reaching the lower bound.
    pub minimal: f64,
    /// Reachable-set log bound at `minimal`.
    pub bound_log: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossoverFit {
    /// `minimal(L + 1) / minimal(L)` for consecutive rows.
    pub ratios: Vec<f64>,
    pub mean_ratio: f64,
    /// Slope of `ln minimal` against L.
    pub log_slope: f64,
    pub r_squared: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossoverReport {
    pub d: usize,
    pub k: usize,
    pub epsilon: f64,
    pub resource: Resource,
    pub family: String,
    pub notes: Vec<String>,
    pub rows: Vec<CrossoverRow>,
    pub fit: Option<CrossoverFit>,
}

/// Canonical Hamiltonian family for the time resource.
pub const CHAIN_Z: usize = 3;
pub const CHAIN_H: f64 = 1.0;

fn chain_bound(d: usize, k: usize, sites: usize, epsilon: f64, total_time: f64) -> Option<f64> {
    let terms = sites.saturating_sub(1).max(1);
    evolution_count_bound(sites, d, k, terms, CHAIN_Z, CHAIN_H, total_time, epsilon)
        .ok()
        .map(|b| b.ln_value)
}

fn minimal_gates(d: usize, k: usize, sites: usize, epsilon: f64, target: f64) -> Result<(f64, f64)> {
    let value = |g: u64| circuit_count_bound(d, k, sites, g as usize, epsilon).ok().map(|b| b.ln_value);
    let reaches = |g: u64| value(g).is_some_and(|v| v >= target);
    let mut hi = 1u64;
    while !reaches(hi) {
        hi = hi.checked_mul(2).ok_or_else(|| Error::invalid("gate count search overflowed"))?;
    }
    let mut lo = hi / 2;
    // invariant: !reaches(lo) or lo == 0, reaches(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if reaches(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((hi as f64, value(hi).expect("reached")))
}

fn minimal_time(d: usize, k: usize, sites: usize, epsilon: f64, target: f64) -> Result<(f64, f64)> {
    let reaches = |t: f64| chain_bound(d, k, sites, epsilon, t).is_some_and(|v| v >= target);
    let mut hi = 1.0f64;
    while !reaches(hi) {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::invalid("time search overflowed"));
        }
    }
    let mut lo = 0.0f64;
    while hi - lo > 1e-13 * hi {
        let mid = 0.5 * (lo + hi);
        if reaches(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((hi, chain_bound(d, k, sites, epsilon, hi).expect("reached")))
}

/// For each L, the smallest circuit size (or evolution time) whose
/// reachable-set covering bound reaches the half-filling Grassmannian lower
/// bound with m = d^L.
pub fn crossover_analysis(
    d: usize,
    k: usize,
    epsilon: f64,
    l_min: usize,
    l_max: usize,
    resource: Resource,
) -> Result<CrossoverReport> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::invalid("epsilon must be positive"));
    }
    if epsilon >= NONTRIVIAL_EPSILON {
        return Err(Error::VacuousLowerBound { epsilon, threshold: NONTRIVIAL_EPSILON });
    }
    if d < 2 || k == 0 || l_min == 0 || l_min > l_max {
        return Err(Error::invalid("need d >= 2, k >= 1 and 1 <= lmin <= lmax"));
    }
    if resource == Resource::Time && l_min < 2 {
        return Err(Error::invalid("the chain family needs L >= 2"));
    }
    let rows = (l_min..=l_max)
        .into_par_iter()
        .map(|sites| {
            let m = u32::try_from(sites)
                .ok()
                .and_then(|l| (d as u64).checked_pow(l))
                .ok_or_else(|| Error::invalid(format!("d^L overflows at L = {sites}")))?;
            let n = m / 2;
            let lower = grassmann_covering_bounds(n as usize, m as usize, epsilon)?;
            let (minimal, bound_log) = match resource {
                Resource::Circuit => minimal_gates(d, k, sites, epsilon, lower.lower_log)?,
                Resource::Time => minimal_time(d, k, sites, epsilon, lower.lower_log)?,
            };
            Ok(CrossoverRow { sites, m, n, grassmann_lower_log: lower.lower_log, minimal, bound_log })
        })
        .collect::<Result<Vec<_>>>()?;
    let fit = (rows.len() >= 2).then(|| {
        let ratios: Vec<f64> = rows.windows(2).map(|w| w[1].minimal / w[0].minimal).collect();
        let mean_ratio = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.sites as f64, r.minimal.ln())).collect();
        let line = least_squares(&pts);
        CrossoverFit { ratios, mean_ratio, log_slope: line.slope, r_squared: line.r_squared }
    });
    let family = match resource {
        Resource::Circuit => format!("circuits of {k}-local gates on L qudits of dimension {d}"),
        Resource::Time => format!("nearest-neighbour chain: K = L - 1 terms, z = {CHAIN_Z}, |h| = {CHAIN_H}"),
    };
    Ok(CrossoverReport {
        d,
        k,
        epsilon,
        resource,
        family,
        notes: vec![
            "subspace dimension n = m/2 with m = d^L".to_string(),
            "finite-L trend only; asymptotic growth is not established by these rows".to_string(),
        ],
        rows,
        fit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{embed_operator, QuditRegister};
    use crate::grassmann::grassmann_covering_bounds;
    use crate::linalg::{pauli_z, random_hermitian, rng_from_seed};

    fn sum_z(sites: usize) -> ComplexMatrix {
        let r = QuditRegister::new(sites, 2).unwrap();
        let dim = 1 << sites;
        (0..sites).fold(ComplexMatrix::zeros(dim, dim), |acc, s| acc + embed_operator(&r, &[s], &pauli_z()).unwrap())
    }

    #[test]
    fn spot_values_match_high_precision_reference() {
        // references evaluated with 50-digit arithmetic
        let eps = 1e-3;
        let cases = [
            (circuit_count_bound(2, 2, 4, 5, 0.1).unwrap().ln_value, 537.9493704146712800396515),
            (circuit_count_bound(2, 2, 10, 1000, eps).unwrap().ln_value, 267878.2563872606148661245),
            (circuit_count_bound(3, 1, 7, 12, 0.05).unwrap().ln_value, 900.2781171080467508255162),
            (evolution_count_bound(4, 2, 2, 3, 3, 1.0, 1.0, 0.1).unwrap().ln_value, 218073.3801205749782844439),
            (evolution_count_bound(12, 2, 2, 11, 3, 1.0, 2.5, eps).unwrap().ln_value, 3813096343.867917586978781),
            (evolution_count_bound(6, 3, 2, 5, 3, 0.7, 0.3, 0.01).unwrap().ln_value, 1620861.706837690489930987),
            (grassmann_covering_bounds(2, 4, 0.01).unwrap().lower_log, -5.567368859541364350338727),
            (grassmann_covering_bounds(512, 1024, eps).unwrap().lower_log, 842354.6476567593695186259),
            (grassmann_covering_bounds(2, 4, 0.01).unwrap().upper_log, 92.74128346391265583559426),
            (grassmann_covering_bounds(3, 10, 0.001).unwrap().upper_log, 641.8016906469135341764457),
        ];
        for (i, (got, want)) in cases.iter().enumerate() {
            assert!(((got - want) / want).abs() < 1e-12, "case {i}: {got} vs {want}");
        }
    }

    #[test]
    fn log_bound_log10() {
        let b = LogBound::new(std::f64::consts::LN_10 * 3.0, "x", &[]);
        assert!((b.log10() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn extensive_z_profiles() {
        let p = degeneracy_profile_extensive_z(1).unwrap();
        assert_eq!((p.eigenvalues.clone(), p.degeneracies.clone()), (vec![-1.0, 1.0], vec![1, 1]));
        let p = degeneracy_profile_extensive_z(4).unwrap();
        assert_eq!(p.degeneracies, vec![1, 4, 6, 4, 1]);
        assert_eq!(p.width, 4.0);
        assert_eq!(p.dimension(), 16);
        for l in 10..=28 {
            let a = degeneracy_profile_extensive_z(l).unwrap();
            let b = degeneracy_profile_extensive_z(l + 1).unwrap();
            let ratio = *b.degeneracies.iter().max().unwrap() as f64 / *a.degeneracies.iter().max().unwrap() as f64;
            assert!((1.8..=2.0).contains(&ratio), "L = {l}: {ratio}");
        }
        assert_eq!(degeneracy_profile_extensive_z(30).unwrap().dimension(), 1 << 30);
        assert!(degeneracy_profile_extensive_z(31).is_err());
        // the explicit matrix agrees
        assert_eq!(SpectrumProfile::from_hermitian(&sum_z(4)).unwrap(), degeneracy_profile_extensive_z(4).unwrap());
    }

    #[test]
    fn coarse_graining_examples() {
        let p = degeneracy_profile_extensive_z(4).unwrap();
        let cg = coarse_grain_spectrum(&p, 0.0, 2.0, 1.0).unwrap();
        assert_eq!((cg.degeneracy_1, cg.degeneracy_2), (6, 4));
        assert_eq!(cg.profile, p);
        assert_eq!(cg.shift_bound, 0.5);

        let none = coarse_grain_spectrum(&p, 0.9, 3.1, 0.2).unwrap();
        assert_eq!(none.profile, p);
        assert_eq!((none.degeneracy_1, none.degeneracy_2), (0, 0));

        // everything within ε/2 moves, by at most ε/2
        let q = SpectrumProfile::new(vec![-0.3, 0.1, 1.7, 2.4, 5.0], vec![1, 2, 3, 4, 5]).unwrap();
        let cg = coarse_grain_spectrum(&q, 0.0, 2.0, 1.0).unwrap();
        assert_eq!(cg.profile.eigenvalues, vec![0.0, 2.0, 5.0]);
        assert_eq!(cg.profile.degeneracies, vec![3, 7, 5]);
        assert_eq!(cg.profile.dimension(), q.dimension());

        assert!(coarse_grain_spectrum(&p, 0.0, 1.0, 1.0).is_err());
        assert!(coarse_grain_spectrum(&p, 2.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn coarse_grained_observable_stays_close() {
        let (o2, shift) = coarse_grain_observable(&sum_z(4), 0.0, 2.0, 1.0).unwrap();
        assert!(shift <= 0.5 + 1e-12);
        assert!(SpectrumProfile::from_hermitian(&o2).unwrap().degeneracies.len() == 5);
        let mut rng = rng_from_seed(6);
        for _ in 0..20 {
            let o = random_hermitian(8, 2.0, &mut rng);
            let (_, shift) = coarse_grain_observable(&o, -0.5, 0.9, 1.2).unwrap();
            assert!(shift <= 0.6 + 1e-12);
        }
    }

    #[test]
    fn crossover_gate_counts() {
        let r = crossover_analysis(2, 2, 1e-3, 8, 14, Resource::Circuit).unwrap();
        let minimal: Vec<f64> = r.rows.iter().map(|row| row.minimal).collect();
        // independent 50-digit evaluation of the same search
        assert_eq!(minimal, vec![217.0, 798.0, 2954.0, 10996.0, 41127.0, 154454.0, 582159.0]);
        assert!((r.rows[2].grassmann_lower_log - 842354.64765675936952).abs() < 1e-6);
        // ~0.804 4^L
        for row in &r.rows {
            let approx = (row.m as f64).powi(2) * (1800f64.ln() / 2.0 - 19f64.ln());
            assert!((row.grassmann_lower_log / approx - 1.0).abs() < 1e-3);
        }
        let fit = r.fit.unwrap();
        assert!(fit.ratios.iter().all(|&x| (3.5..=4.5).contains(&x)));
        assert!(((fit.log_slope - 4f64.ln()) / 4f64.ln()).abs() < 0.15);
        assert!(r.rows.iter().all(|row| row.bound_log >= row.grassmann_lower_log));
    }

    #[test]
    fn crossover_times() {
        let r = crossover_analysis(2, 2, 1e-3, 8, 14, Resource::Time).unwrap();
        assert!(r.rows.windows(2).all(|w| w[1].minimal > w[0].minimal));
        let fit = r.fit.unwrap();
        assert!(fit.r_squared >= 0.99, "{fit:?}");
        for row in &r.rows {
            let below = chain_bound(2, 2, row.sites, 1e-3, row.minimal * (1.0 - 1e-9)).unwrap();
            assert!(below < row.grassmann_lower_log);
        }
    }

    #[test]
    fn crossover_edge_cases() {
        let r = crossover_analysis(2, 2, 1e-3, 9, 9, Resource::Circuit).unwrap();
        assert_eq!(r.rows.len(), 1);
        assert!(r.fit.is_none());
        assert!(matches!(
            crossover_analysis(2, 2, 0.01, 8, 9, Resource::Circuit),
            Err(Error::VacuousLowerBound { .. })
        ));
        assert!(crossover_analysis(2, 2, 1e-3, 9, 8, Resource::Time).is_err());
    }

    #[test]
    fn report_rendering() {
        let r = crossover_analysis(2, 2, 1e-3, 8, 11, Resource::Time).unwrap();
        let a = render_report(&r, ReportFormat::Json);
        assert_eq!(a, render_report(&r, ReportFormat::Json));
        assert_eq!(parse_report_json(&a).unwrap(), r);
        let csv = render_report(&r, ReportFormat::Csv);
        assert_eq!(csv.lines().count(), 4 + 1);
        assert!(csv.starts_with("L,m,n,"));

        let single = crossover_analysis(2, 2, 1e-3, 8, 8, Resource::Circuit).unwrap();
        assert_eq!(parse_report_json(&render_report(&single, ReportFormat::Json)).unwrap(), single);
        assert!("xml".parse::<ReportFormat>().is_err());
        assert_eq!("time".parse::<Resource>().unwrap(), Resource::Time);
    }

    #[test]
    fn least_squares_line() {
        let fit = least_squares(&[(0.0, 1.0), (1.0, 3.0), (2.0, 5.0)]);
        assert!((fit.slope - 2.0).abs() < 1e-15 && (fit.intercept - 1.0).abs() < 1e-15);
        assert!((fit.r_squared - 1.0).abs() < 1e-15);
    }
}
