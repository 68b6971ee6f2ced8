//! Time-dependent local Hamiltonians, a reference propagator, first-order
//! product-formula propagators, and certificates comparing the two against
//! the `Δt T K z |h|²` error bound.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{apply_local, embed_operator, matrix_from_pairs, matrix_to_pairs, QuditRegister};
use crate::error::{Error, Result};
use crate::limits::LogBound;
use crate::linalg::{
    check_hermitian, commutator, exp_i_hermitian, frobenius_norm, identity, op_distance, operator_norm,
    random_hermitian, rng_from_seed, ComplexMatrix, SkewHermitian, UnitaryMatrix, C64,
};

/// Largest dimension accepted by [`exact_propagator`].
pub const PROPAGATOR_DIM_LIMIT: usize = 64;
/// Tolerance of the reference propagator used by [`certify_trotter`].
pub const CERTIFY_TOL: f64 = 1e-11;
/// Allowed excess of measured error over the bound before a certificate is refused.
pub const CERTIFY_SLACK: f64 = 1e-9;
const SUP_GRID: usize = 1024;

/// Scalar time profile multiplying a fixed Hermitian base matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Envelope {
    Constant { value: f64 },
    /// `amplitude cos(omega t + phase)`
    Cosine { amplitude: f64, omega: f64, phase: f64 },
    /// Linear interpolation between samples, held constant outside them.
    Pwl { times: Vec<f64>, values: Vec<f64> },
}

impl Envelope {
    pub fn validate(&self) -> Result<()> {
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        let ok = match self {
            Envelope::Constant { value } => value.is_finite(),
            Envelope::Cosine { amplitude, omega, phase } => finite(&[*amplitude, *omega, *phase]),
            Envelope::Pwl { times, values } => {
                if times.is_empty() || times.len() != values.len() {
                    return Err(Error::invalid("pwl envelope needs equally many (>= 1) times and values"));
                }
                if times.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::invalid("pwl envelope times must be strictly increasing"));
                }
                finite(times) && finite(values)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid("envelope is unbounded (non-finite parameter)"))
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Envelope::Constant { value } => *value,
            Envelope::Cosine { amplitude, omega, phase } => amplitude * (omega * t + phase).cos(),
            Envelope::Pwl { times, values } => {
                let last = times.len() - 1;
                if t <= times[0] {
                    return values[0];
                }
                if t >= times[last] {
                    return values[last];
                }
                let i = times.partition_point(|&x| x <= t) - 1;
                let w = (t - times[i]) / (times[i + 1] - times[i]);
                values[i] + w * (values[i + 1] - values[i])
            }
        }
    }

    /// Exact `∫_a^b f(t) dt`.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        match self {
            Envelope::Constant { value } => value * (b - a),
            Envelope::Cosine { amplitude, omega, phase } => {
                if *omega == 0.0 {
                    amplitude * phase.cos() * (b - a)
                } else {
                    amplitude / omega * ((omega * b + phase).sin() - (omega * a + phase).sin())
                }
            }
            Envelope::Pwl { times, .. } => {
                // linear between consecutive knots inside [a, b]
                let mut knots = vec![a];
                knots.extend(times.iter().copied().filter(|&x| x > a && x < b));
                knots.push(b);
                knots
                    .windows(2)
                    .map(|w| 0.5 * (w[1] - w[0]) * (self.eval(w[0]) + self.eval(w[1])))
                    .sum()
            }
        }
    }

    /// `sup |f|` on `[a, b]`: a uniform grid plus endpoints and the exact
    /// extrema of the closed forms.
    pub fn sup_abs(&self, a: f64, b: f64) -> f64 {
        let mut best = (0..=SUP_GRID)
            .map(|i| self.eval(a + (b - a) * i as f64 / SUP_GRID as f64).abs())
            .fold(0.0, f64::max);
        match self {
            Envelope::Constant { value } => best = best.max(value.abs()),
            Envelope::Cosine { amplitude, omega, phase } => {
                if *omega != 0.0 {
                    // extrema where omega t + phase = j pi
                    let (lo, hi) = {
                        let x = (omega * a + phase) / std::f64::consts::PI;
                        let y = (omega * b + phase) / std::f64::consts::PI;
                        (x.min(y), x.max(y))
                    };
                    if hi.floor() >= lo.ceil() {
                        best = best.max(amplitude.abs());
                    }
                }
            }
            Envelope::Pwl { times, .. } => {
                for &x in times.iter().filter(|&&x| x >= a && x <= b) {
                    best = best.max(self.eval(x).abs());
                }
            }
        }
        best
    }
}

/// `f(t) B` acting on `support`.
#[derive(Clone, Debug)]
pub struct HamiltonianTerm {
    support: Vec<usize>,
    base: ComplexMatrix,
    envelope: Envelope,
}

impl HamiltonianTerm {
    pub fn new(support: Vec<usize>, base: ComplexMatrix, envelope: Envelope) -> Result<Self> {
        if support.is_empty() || support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid(format!("term support {support:?} must be strictly increasing")));
        }
        check_hermitian(&base)?;
        envelope.validate()?;
        Ok(HamiltonianTerm { support, base, envelope })
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn base(&self) -> &ComplexMatrix {
        &self.base
    }

    pub fn envelope(&self) -> &Envelope {
        &self.envelope
    }

    /// Exact propagator of this term alone from `t0` to `t1`, on its support.
    /// The term commutes with itself at all times, so this is
    /// `exp(-i B ∫ f)`.
    pub fn local_propagator(&self, t0: f64, t1: f64) -> UnitaryMatrix {
        exp_i_hermitian(&self.base, self.envelope.integral(t0, t1))
    }
}

#[derive(Clone, Debug)]
pub struct TimeDependentHamiltonian {
    register: QuditRegister,
    terms: Vec<HamiltonianTerm>,
}

impl TimeDependentHamiltonian {
    pub fn new(register: QuditRegister, terms: Vec<HamiltonianTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::invalid("a Hamiltonian needs at least one term"));
        }
        for t in &terms {
            register.check_support(&t.support)?;
            let sub = register
                .local_dim()
                .checked_pow(t.support.len() as u32)
                .ok_or_else(|| Error::invalid("term support too large"))?;
            if t.base.nrows() != sub {
                return Err(Error::mismatch(format!("term on {:?} needs a {sub}x{sub} base", t.support)));
            }
        }
        Ok(TimeDependentHamiltonian { register, terms })
    }

    pub fn register(&self) -> &QuditRegister {
        &self.register
    }

    pub fn terms(&self) -> &[HamiltonianTerm] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `|h| = max_i sup_{[0, T]} |h_i(t)|`.
    pub fn h_max(&self, total_time: f64) -> Result<f64> {
        self.terms
            .iter()
            .map(|t| term_norm_sup(t, total_time))
            .try_fold(0.0, |acc, x| x.map(|v| f64::max(acc, v)))
    }

    pub fn to_json(&self) -> HamiltonianJson {
        HamiltonianJson {
            sites: self.register.sites(),
            local_dim: self.register.local_dim(),
            terms: self
                .terms
                .iter()
                .map(|t| TermJson {
                    support: t.support.clone(),
                    base: matrix_to_pairs(&t.base),
                    envelope: t.envelope.clone(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &HamiltonianJson) -> Result<Self> {
        let register = QuditRegister::new(json.sites, json.local_dim)?;
        let terms = json
            .terms
            .iter()
            .map(|t| {
                let dim = json.local_dim.pow(t.support.len() as u32);
                HamiltonianTerm::new(t.support.clone(), matrix_from_pairs(dim, &t.base)?, t.envelope.clone())
            })
            .collect::<Result<Vec<_>>>()?;
        TimeDependentHamiltonian::new(register, terms)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianJson {
    #[serde(rename = "L")]
    pub sites: usize,
    #[serde(rename = "d")]
    pub local_dim: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub support: Vec<usize>,
    pub base: Vec<[f64; 2]>,
    pub envelope: Envelope,
}

/// `sup_{t in [0, T]} |f(t) B|`.
pub fn term_norm_sup(term: &HamiltonianTerm, total_time: f64) -> Result<f64> {
    if !(total_time > 0.0) || !total_time.is_finite() {
        return Err(Error::invalid("T must be positive"));
    }
    let sup = term.envelope.sup_abs(0.0, total_time);
    if !sup.is_finite() {
        return Err(Error::invalid("envelope is unbounded on [0, T]"));
    }
    Ok(sup * operator_norm(&term.base)?)
}

/// Largest number of terms (counting the term itself) whose support meets
/// the support of a single term. Overlap is necessary for a nonzero
/// commutator, so this bounds the commutation degree from above.
pub fn commutation_degree(h: &TimeDependentHamiltonian) -> usize {
    let meets = |a: &[usize], b: &[usize]| a.iter().any(|s| b.contains(s));
    h.terms
        .iter()
        .map(|ti| h.terms.iter().filter(|tj| meets(&ti.support, &tj.support)).count())
        .max()
        .unwrap_or(0)
}

struct DenseTerms {
    embedded: Vec<ComplexMatrix>,
    envelopes: Vec<Envelope>,
    dim: usize,
}

impl DenseTerms {
    fn new(h: &TimeDependentHamiltonian) -> Result<Self> {
        let dim = h.register.dim_within(PROPAGATOR_DIM_LIMIT)?;
        let embedded = h
            .terms
            .iter()
            .map(|t| embed_operator(&h.register, &t.support, &t.base))
            .collect::<Result<Vec<_>>>()?;
        Ok(DenseTerms { embedded, envelopes: h.terms.iter().map(|t| t.envelope.clone()).collect(), dim })
    }

    fn at(&self, t: f64) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for (e, f) in self.embedded.iter().zip(&self.envelopes) {
            out += e * C64::new(f.eval(t), 0.0);
        }
        out
    }

    /// One fourth-order Magnus step from `t` to `t + h`.
    fn magnus_step(&self, t: f64, h: f64) -> ComplexMatrix {
        let off = 3f64.sqrt() / 6.0;
        let h1 = self.at(t + (0.5 - off) * h);
        let h2 = self.at(t + (0.5 + off) * h);
        // Ω = (h/2)(A1 + A2) + (√3 h²/12)[A2, A1] with A = -iH
        let omega = (&h1 + &h2) * C64::new(0.0, -0.5 * h) - commutator(&h2, &h1) * C64::new(3f64.sqrt() * h * h / 12.0, 0.0);
        SkewHermitian::from_projection(&omega).exp().into_inner()
    }
}

/// Propagator from `t0` to `t1` solving `i dU/dt = H(t) U` with a step-doubled
/// fourth-order Magnus integrator. The local error per step is kept below
/// `tol · h / (t1 - t0)`.
pub fn exact_propagator_between(h: &TimeDependentHamiltonian, t0: f64, t1: f64, tol: f64) -> Result<UnitaryMatrix> {
    if !(tol >= 1e-12) {
        return Err(Error::invalid(format!("tolerance must be at least 1e-12, got {tol}")));
    }
    if !(t1 >= t0) || !t0.is_finite() || !t1.is_finite() {
        return Err(Error::invalid("need finite t0 <= t1"));
    }
    let dense = DenseTerms::new(h)?;
    let span = t1 - t0;
    let mut u = identity(dense.dim);
    if span == 0.0 {
        return UnitaryMatrix::new(u);
    }
    let mut t = t0;
    let mut step = span / 8.0;
    let min_step = span * 1e-12;
    while t < t1 {
        let step_now = step.min(t1 - t);
        let big = dense.magnus_step(t, step_now);
        let half = step_now / 2.0;
        let small = dense.magnus_step(t + half, half) * dense.magnus_step(t, half);
        let err = frobenius_norm(&(&big - &small)) / 15.0;
        let allowed = tol * step_now / span;
        if err <= allowed {
            u = small * u;
            t += step_now;
            if t1 - t < min_step {
                t = t1;
            }
        }
        let factor = if err == 0.0 { 2.0 } else { (0.9 * (allowed / err).powf(0.2)).clamp(0.2, 2.0) };
        step = step_now * factor;
        if step < min_step && t < t1 {
            return Err(Error::StepUnderflow { t });
        }
    }
    UnitaryMatrix::new(u)
}

pub fn exact_propagator(h: &TimeDependentHamiltonian, total_time: f64, tol: f64) -> Result<UnitaryMatrix> {
    exact_propagator_between(h, 0.0, total_time, tol)
}

/// First-order product formula: for each of the `steps` slices in time order,
/// apply every term's exact single-term propagator in storage order.
pub fn trotter_propagator(h: &TimeDependentHamiltonian, total_time: f64, steps: usize) -> Result<UnitaryMatrix> {
    if steps == 0 {
        return Err(Error::invalid("need at least one time step"));
    }
    let dim = h.register.dim_within(crate::circuit::DENSE_LIMIT)?;
    let dt = total_time / steps as f64;
    let mut u = identity(dim);
    for n in 0..steps {
        let (a, b) = (n as f64 * dt, (n + 1) as f64 * dt);
        for term in &h.terms {
            apply_local(&h.register, &term.support, term.local_propagator(a, b).matrix(), &mut u);
        }
    }
    UnitaryMatrix::new(u)
}

/// Measured product-formula error next to its certified bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrotterCertificate {
    #[serde(rename = "T")]
    pub total_time: f64,
    #[serde(rename = "N_t")]
    pub steps: usize,
    pub delta_t: f64,
    #[serde(rename = "K")]
    pub terms: usize,
    pub z: usize,
    pub h_max: f64,
    pub bound: f64,
    pub measured: f64,
}

/// `Δt T K z |h|²`.
pub fn trotter_error_bound(total_time: f64, steps: usize, terms: usize, z: usize, h_max: f64) -> f64 {
    (total_time / steps as f64) * total_time * terms as f64 * z as f64 * h_max * h_max
}

/// Runs both propagators and refuses to certify if the measured error
/// exceeds the bound.
pub fn certify_trotter(h: &TimeDependentHamiltonian, total_time: f64, steps: usize) -> Result<TrotterCertificate> {
    let z = commutation_degree(h);
    let h_max = h.h_max(total_time)?;
    let bound = trotter_error_bound(total_time, steps, h.num_terms(), z, h_max);
    let exact = exact_propagator(h, total_time, CERTIFY_TOL)?;
    let approx = trotter_propagator(h, total_time, steps)?;
    let measured = op_distance(exact.matrix(), approx.matrix());
    if measured > bound + CERTIFY_SLACK {
        return Err(Error::TrotterBoundViolated { measured, bound });
    }
    Ok(TrotterCertificate {
        total_time,
        steps,
        delta_t: total_time / steps as f64,
        terms: h.num_terms(),
        z,
        h_max,
        bound,
        measured,
    })
}

/// One splitting step over `[q, t]`: `|U_H - Π_i U_{h_i}|` against
/// `(t - q)² K z |h|²` with `|h|` taken over the same window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplittingCheck {
    pub measured: f64,
    pub bound: f64,
}

pub fn splitting_check(h: &TimeDependentHamiltonian, q: f64, t: f64) -> Result<SplittingCheck> {
    let exact = exact_propagator_between(h, q, t, CERTIFY_TOL)?;
    let dim = exact.dim();
    let mut product = identity(dim);
    // Π_{i=1}^K U_{h_i}: term 0 leftmost
    for term in h.terms.iter().rev() {
        apply_local(&h.register, &term.support, term.local_propagator(q, t).matrix(), &mut product);
    }
    let sup = h
        .terms
        .iter()
        .map(|x| Ok(x.envelope.sup_abs(q, t) * operator_norm(&x.base)?))
        .try_fold(0.0, |acc: f64, v: Result<f64>| v.map(|v| acc.max(v)))?;
    let bound = (t - q).powi(2) * h.num_terms() as f64 * commutation_degree(h) as f64 * sup * sup;
    Ok(SplittingCheck { measured: op_distance(exact.matrix(), &product), bound })
}

/// Qubit chain with `terms` nearest-neighbour bonds (0,1), (1,2), ...; each
/// bond a random Hermitian of unit norm under a cosine envelope with
/// amplitude in [0.5, 1.5], frequency in [0, 4] and random phase.
pub fn random_chain_hamiltonian(sites: usize, terms: usize, rng: &mut impl Rng) -> Result<TimeDependentHamiltonian> {
    if sites < 2 || terms == 0 || terms > sites - 1 {
        return Err(Error::invalid(format!("need 1 <= K <= L - 1 bonds, got K = {terms}, L = {sites}")));
    }
    let register = QuditRegister::new(sites, 2)?;
    let list = (0..terms)
        .map(|i| {
            let base = random_hermitian(4, 1.0, rng);
            let envelope = Envelope::Cosine {
                amplitude: rng.random_range(0.5..1.5),
                omega: rng.random_range(0.0..4.0),
                phase: rng.random_range(0.0..std::f64::consts::TAU),
            };
            HamiltonianTerm::new(vec![i, i + 1], base, envelope)
        })
        .collect::<Result<Vec<_>>>()?;
    TimeDependentHamiltonian::new(register, list)
}

pub fn random_chain_hamiltonian_seeded(sites: usize, terms: usize, seed: u64) -> Result<TimeDependentHamiltonian> {
    random_chain_hamiltonian(sites, terms, &mut rng_from_seed(seed))
}

/// Log of the number of balls of radius ε w(O) covering all observables
/// reachable by evolving for time T:
/// `k K ln L + (4 d^{2k} T² K² z h² / ε) ln(112 T² K² z h² / ε²)`.
///
/// The proof runs a product formula with `N_t = 4 T² K z h² / ε` steps and a
/// gate net at `ε / (4 K N_t)`, which must not exceed 1/10.
#[allow(clippy::too_many_arguments)]
pub fn evolution_count_bound(
    sites: usize,
    d: usize,
    k: usize,
    terms: usize,
    z: usize,
    h_max: f64,
    total_time: f64,
    epsilon: f64,
) -> Result<LogBound> {
    if sites == 0 || d < 2 || k == 0 || terms == 0 || z == 0 {
        return Err(Error::invalid("need positive L, k, K, z and d >= 2"));
    }
    for (name, v) in [("h", h_max), ("T", total_time), ("epsilon", epsilon)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::invalid(format!("{name} must be positive")));
        }
    }
    let (kk, zz) = (terms as f64, z as f64);
    let s = total_time * total_time * kk * zz * h_max * h_max;
    let steps = 4.0 * s / epsilon;
    let inner = epsilon / (4.0 * kk * steps);
    if inner > 0.1 {
        return Err(Error::OutOfValidity {
            epsilon,
            requirement: format!("epsilon / (4 K N_t) <= 1/10 with N_t = {steps}"),
        });
    }
    let local = (d as f64).powi(2 * k as i32);
    let ln_value = (k * terms) as f64 * (sites as f64).ln()
        + 4.0 * local * kk * s / epsilon * (112.0 * kk * s / (epsilon * epsilon)).ln();
    Ok(LogBound::new(
        ln_value,
        "time-evolution reachable-set covering",
        &[
            ("L", sites as f64),
            ("d", d as f64),
            ("k", k as f64),
            ("K", kk),
            ("z", zz),
            ("h", h_max),
            ("T", total_time),
            ("epsilon", epsilon),
            ("N_t", steps),
        ],
    ))
}
