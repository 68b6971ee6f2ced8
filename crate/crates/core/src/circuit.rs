//! Dense simulation of circuits made of few-site gates on a chain of qudits,
//! replacement of each gate by a nearby net element, and the log-domain count
//! of distinguishable circuit outputs.
//!
//! Conventions: site 0 is the leftmost tensor factor, and gate 0 acts first,
//! so the circuit unitary is `u_{N-1} ... u_1 u_0`.

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::LogBound;
use crate::linalg::{
    check_hermitian, haar_unitary_with, identity, op_distance, rng_from_seed, spectral_width, ComplexMatrix,
    UnitaryMatrix, C64,
};
use crate::unitary_nets::GateCovering;

/// Largest Hilbert-space dimension simulated densely.
pub const DENSE_LIMIT: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuditRegister {
    sites: usize,
    local_dim: usize,
}

impl QuditRegister {
    pub fn new(sites: usize, local_dim: usize) -> Result<Self> {
        if sites == 0 {
            return Err(Error::invalid("register needs at least one site"));
        }
        if local_dim < 2 {
            return Err(Error::invalid(format!("local dimension must be >= 2, got {local_dim}")));
        }
        Ok(QuditRegister { sites, local_dim })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    /// `d^L`, or `None` on overflow.
    pub fn checked_dim(&self) -> Option<usize> {
        u32::try_from(self.sites).ok().and_then(|l| self.local_dim.checked_pow(l))
    }

    /// `d^L`, erroring when above `limit`.
    pub fn dim_within(&self, limit: usize) -> Result<usize> {
        match self.checked_dim() {
            Some(dim) if dim <= limit => Ok(dim),
            Some(dim) => Err(Error::DenseLimit { dim, limit }),
            None => Err(Error::DenseLimit { dim: usize::MAX, limit }),
        }
    }

    pub fn dense_dim(&self) -> Result<usize> {
        self.dim_within(DENSE_LIMIT)
    }

    pub(crate) fn check_support(&self, support: &[usize]) -> Result<()> {
        if support.is_empty() {
            return Err(Error::invalid("support must be non-empty"));
        }
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid(format!("support {support:?} must be strictly increasing")));
        }
        if let Some(&last) = support.last() {
            if last >= self.sites {
                return Err(Error::invalid(format!("site {last} outside register of {} sites", self.sites)));
            }
        }
        Ok(())
    }
}

/// Left-multiplies `target` (rows indexed by register basis states) by
/// `local` acting on `support`, in place. Nothing `d^L × d^L` is formed.
pub(crate) fn apply_local(register: &QuditRegister, support: &[usize], local: &ComplexMatrix, target: &mut ComplexMatrix) {
    let d = register.local_dim;
    let l = register.sites;
    let k = support.len();
    let sub = local.nrows();
    // stride of each site: site 0 is most significant
    let stride = |site: usize| d.pow((l - 1 - site) as u32);
    let offsets: Vec<usize> = (0..sub)
        .map(|s| {
            let mut rem = s;
            let mut off = 0;
            for pos in (0..k).rev() {
                off += (rem % d) * stride(support[pos]);
                rem /= d;
            }
            off
        })
        .collect();
    let rest: Vec<usize> = (0..l).filter(|s| !support.contains(s)).collect();
    let rest_count = d.pow(rest.len() as u32);
    let mut rows = vec![0usize; sub];
    let mut buf = vec![C64::new(0.0, 0.0); sub];
    for r in 0..rest_count {
        let mut rem = r;
        let mut base = 0;
        for &site in rest.iter().rev() {
            base += (rem % d) * stride(site);
            rem /= d;
        }
        for (row, off) in rows.iter_mut().zip(&offsets) {
            *row = base + off;
        }
        for col in 0..target.ncols() {
            for (i, b) in buf.iter_mut().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for (j, &rj) in rows.iter().enumerate() {
                    acc += local[(i, j)] * target[(rj, col)];
                }
                *b = acc;
            }
            for (i, &ri) in rows.iter().enumerate() {
                target[(ri, col)] = buf[i];
            }
        }
    }
}

/// `local` on `support`, identity elsewhere, as a dense `d^L` matrix.
pub fn embed_operator(register: &QuditRegister, support: &[usize], local: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dim = register.dense_dim()?;
    register.check_support(support)?;
    let sub = register.local_dim.pow(support.len() as u32);
    if local.nrows() != sub || local.ncols() != sub {
        return Err(Error::mismatch(format!("operator on {} sites must be {sub}x{sub}", support.len())));
    }
    let mut out = identity(dim);
    apply_local(register, support, local, &mut out);
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct Gate {
    support: Vec<usize>,
    matrix: UnitaryMatrix,
}

impl Gate {
    pub fn new(support: Vec<usize>, matrix: UnitaryMatrix) -> Result<Self> {
        if support.is_empty() || support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid(format!("gate support {support:?} must be strictly increasing")));
        }
        Ok(Gate { support, matrix })
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn matrix(&self) -> &UnitaryMatrix {
        &self.matrix
    }
}

#[derive(Clone, Debug)]
pub struct Circuit {
    register: QuditRegister,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(register: QuditRegister, gates: Vec<Gate>) -> Result<Self> {
        for g in &gates {
            register.check_support(&g.support)?;
            let sub = register
                .local_dim
                .checked_pow(g.support.len() as u32)
                .ok_or_else(|| Error::invalid("gate support too large"))?;
            if g.matrix.dim() != sub {
                return Err(Error::mismatch(format!(
                    "gate on {:?} must be {sub}x{sub}, got {}",
                    g.support,
                    g.matrix.dim()
                )));
            }
        }
        Ok(Circuit { register, gates })
    }

    pub fn register(&self) -> &QuditRegister {
        &self.register
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Circuit) -> Result<Circuit> {
        if self.register != other.register {
            return Err(Error::mismatch("circuits act on different registers"));
        }
        let mut gates = self.gates.clone();
        gates.extend(other.gates.iter().cloned());
        Ok(Circuit { register: self.register, gates })
    }

    pub fn to_json(&self) -> CircuitJson {
        CircuitJson {
            sites: self.register.sites,
            local_dim: self.register.local_dim,
            gates: self
                .gates
                .iter()
                .map(|g| GateJson { support: g.support.clone(), matrix: matrix_to_pairs(g.matrix.matrix()) })
                .collect(),
        }
    }

    pub fn from_json(json: &CircuitJson) -> Result<Circuit> {
        let register = QuditRegister::new(json.sites, json.local_dim)?;
        let gates = json
            .gates
            .iter()
            .map(|g| {
                let dim = json.local_dim.pow(g.support.len() as u32);
                Gate::new(g.support.clone(), UnitaryMatrix::new(matrix_from_pairs(dim, &g.matrix)?)?)
            })
            .collect::<Result<Vec<_>>>()?;
        Circuit::new(register, gates)
    }
}

/// On-disk circuit layout; matrices are row-major `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitJson {
    #[serde(rename = "L")]
    pub sites: usize,
    #[serde(rename = "d")]
    pub local_dim: usize,
    pub gates: Vec<GateJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateJson {
    pub support: Vec<usize>,
    pub matrix: Vec<[f64; 2]>,
}

pub fn matrix_to_pairs(m: &ComplexMatrix) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(m.len());
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            out.push([m[(r, c)].re, m[(r, c)].im]);
        }
    }
    out
}

pub fn matrix_from_pairs(dim: usize, pairs: &[[f64; 2]]) -> Result<ComplexMatrix> {
    if pairs.len() != dim * dim {
        return Err(Error::mismatch(format!("expected {} entries for a {dim}x{dim} matrix, got {}", dim * dim, pairs.len())));
    }
    Ok(ComplexMatrix::from_row_iterator(dim, dim, pairs.iter().map(|p| C64::new(p[0], p[1]))))
}

pub fn circuit_unitary(c: &Circuit) -> Result<UnitaryMatrix> {
    let dim = c.register.dense_dim()?;
    let mut u = identity(dim);
    for g in &c.gates {
        apply_local(&c.register, &g.support, g.matrix.matrix(), &mut u);
    }
    UnitaryMatrix::new(u)
}

/// `U^dag O U` for the circuit unitary U.
pub fn conjugate_observable(c: &Circuit, o: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dim = c.register.dense_dim()?;
    if o.nrows() != dim || o.ncols() != dim {
        return Err(Error::mismatch(format!("observable must be {dim}x{dim}")));
    }
    check_hermitian(o)?;
    let u = circuit_unitary(c)?;
    Ok(u.matrix().adjoint() * o * u.matrix())
}

/// Extends a gate to exactly `k` sites by tensoring identities onto the
/// lowest-numbered sites it does not touch.
pub fn pad_gate(register: &QuditRegister, gate: &Gate, k: usize) -> Result<Gate> {
    let have = gate.support.len();
    if have > k {
        return Err(Error::mismatch(format!("gate acts on {have} sites, more than {k}")));
    }
    if k > register.sites {
        return Err(Error::mismatch(format!("cannot pad to {k} sites on a register of {}", register.sites)));
    }
    if have == k {
        return Ok(gate.clone());
    }
    let mut support = gate.support.clone();
    support.extend((0..register.sites).filter(|s| !gate.support.contains(s)).take(k - have));
    support.sort_unstable();
    let positions: Vec<usize> = gate
        .support
        .iter()
        .map(|s| support.iter().position(|t| t == s).expect("original site kept"))
        .collect();
    let small = QuditRegister::new(k, register.local_dim)?;
    let mut m = identity(register.local_dim.pow(k as u32));
    apply_local(&small, &positions, gate.matrix.matrix(), &mut m);
    Gate::new(support, UnitaryMatrix::new(m)?)
}

/// A circuit with every gate swapped for a net element, plus the certified
/// sum of per-gate replacement distances.
#[derive(Clone, Debug)]
pub struct Discretization {
    pub circuit: Circuit,
    pub gate_error_bound: f64,
    pub per_gate: Vec<f64>,
}

pub fn discretize_circuit<N: GateCovering + Sync>(c: &Circuit, net: &N) -> Result<Discretization> {
    let d = c.register.local_dim;
    let net_dim = net.dim();
    let mut k = 0;
    let mut dim = 1usize;
    while dim < net_dim {
        dim *= d;
        k += 1;
    }
    if dim != net_dim {
        return Err(Error::mismatch(format!("net dimension {net_dim} is not a power of d = {d}")));
    }
    let padded = c
        .gates
        .iter()
        .map(|g| pad_gate(&c.register, g, k))
        .collect::<Result<Vec<_>>>()?;
    let replaced: Vec<(Gate, f64)> = padded
        .par_iter()
        .map(|g| {
            let (u, dist) = net.nearest(&g.matrix);
            (Gate { support: g.support.clone(), matrix: u }, dist)
        })
        .collect();
    let per_gate: Vec<f64> = replaced.iter().map(|(_, e)| *e).collect();
    let gates = replaced.into_iter().map(|(g, _)| g).collect();
    Ok(Discretization {
        circuit: Circuit { register: c.register, gates },
        gate_error_bound: per_gate.iter().sum(),
        per_gate,
    })
}

/// Measured deviations of a discretized circuit from the original.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscretizationCheck {
    pub unitary_deviation: f64,
    pub gate_error_bound: f64,
    pub conjugation_error: f64,
    pub conjugation_bound: f64,
}

impl DiscretizationCheck {
    pub fn holds(&self, slack: f64) -> bool {
        self.unitary_deviation <= self.gate_error_bound + slack
            && self.conjugation_error <= self.conjugation_bound + slack
    }
}

/// Compares `original` and `discretized` on the full unitary and on the
/// evolved observable `o`, against `bound` and `2 bound w(o)`.
pub fn check_discretization(
    original: &Circuit,
    discretized: &Discretization,
    o: &ComplexMatrix,
) -> Result<DiscretizationCheck> {
    let u = circuit_unitary(original)?;
    let v = circuit_unitary(&discretized.circuit)?;
    let evolved = u.matrix().adjoint() * o * u.matrix();
    let evolved_net = v.matrix().adjoint() * o * v.matrix();
    Ok(DiscretizationCheck {
        unitary_deviation: op_distance(u.matrix(), v.matrix()),
        gate_error_bound: discretized.gate_error_bound,
        conjugation_error: op_distance(&evolved, &evolved_net),
        conjugation_bound: 2.0 * discretized.gate_error_bound * spectral_width(o)?,
    })
}

/// Random circuit of `gates` Haar gates, each on a uniformly random set of
/// 1..=k sites.
pub fn random_circuit(register: QuditRegister, k: usize, gates: usize, rng: &mut impl Rng) -> Result<Circuit> {
    if k == 0 || k > register.sites {
        return Err(Error::invalid(format!("gate locality {k} must be in 1..={}", register.sites)));
    }
    let list = (0..gates)
        .map(|_| {
            let size = rng.random_range(1..=k);
            let mut support = sample(rng, register.sites, size).into_vec();
            support.sort_unstable();
            let u = haar_unitary_with(register.local_dim.pow(size as u32), rng);
            Gate::new(support, u)
        })
        .collect::<Result<Vec<_>>>()?;
    Circuit::new(register, list)
}

pub fn random_circuit_seeded(register: QuditRegister, k: usize, gates: usize, seed: u64) -> Result<Circuit> {
    random_circuit(register, k, gates, &mut rng_from_seed(seed))
}

/// `k N_G ln L`, the log of the number of ways to place N_G gates of
/// locality k on L sites.
pub fn topology_count_log(sites: usize, k: usize, gates: usize) -> f64 {
    (k * gates) as f64 * (sites as f64).ln()
}

/// Log of the number of balls of radius ε w(O) needed to cover all evolved
/// observables reachable with `gates` k-local gates:
/// `k N_G ln L + d^{2k} N_G ln(14 N_G / ε)`.
///
/// The inner gate net runs at ε / (2 N_G), which must not exceed 1/10.
pub fn circuit_count_bound(d: usize, k: usize, sites: usize, gates: usize, epsilon: f64) -> Result<LogBound> {
    if d < 2 || k == 0 || sites == 0 || gates == 0 {
        return Err(Error::invalid("need d >= 2 and positive k, L, N_G"));
    }
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::invalid("epsilon must be positive"));
    }
    let inner = epsilon / (2.0 * gates as f64);
    if inner > 0.1 {
        return Err(Error::OutOfValidity {
            epsilon,
            requirement: format!("epsilon / (2 N_G) <= 1/10, i.e. epsilon <= {}", 0.2 * gates as f64),
        });
    }
    let ng = gates as f64;
    let local = (d as f64).powi(2 * k as i32);
    let ln_value = topology_count_log(sites, k, gates) + local * ng * (14.0 * ng / epsilon).ln();
    let bound = LogBound::new(
        ln_value,
        "circuit reachable-set covering",
        &[("d", d as f64), ("k", k as f64), ("L", sites as f64), ("N_G", ng), ("epsilon", epsilon)],
    );
    Ok(if gates <= sites {
        bound.note("N_G <= L: outside the stated hypothesis N_G > L; value still evaluated")
    } else {
        bound
    })
}
