//! ε-coverings of the unitary group U(n).
//!
//! Every unitary is `exp(X)` for some skew-Hermitian `X` with `|X| <= π`, and
//! the exponential map is 1-Lipschitz in the operator norm. A cubic lattice
//! over a Frobenius-orthonormal coordinatization of u(n) with spacing
//! `2ε/n` puts every point of u(n) within Frobenius distance ε of a lattice
//! point; exponentiating the lattice points that can be nearest to some
//! element of the π-ball gives an ε-covering of U(n).

use std::f64::consts::PI;
use std::io::{Read, Write};
use std::path::Path;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    derive_seed, haar_unitary, haar_unitary_with, norm_unchecked, op_distance, principal_log,
    rng_from_seed, ComplexMatrix, SkewHermitian, UnitaryMatrix, C64,
};

/// Default cap on the number of materialized net elements.
pub const DEFAULT_MAX_ELEMENTS: u64 = 5_000_000;
/// Largest n for which grid nets are materialized.
pub const MAX_GRID_DIM: usize = 3;

/// Natural-log values of the unitary-group covering bounds `(3/(4ε))^{n²} <= N(U(n), ε) <= (7/ε)^{n²}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitaryCoveringBounds {
    pub n: usize,
    pub epsilon: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub valid: bool,
}

/// Evaluates the unitary-group covering bounds; valid only for `0 < ε <= 1/10`.
pub fn unitary_covering_bounds(n: usize, epsilon: f64) -> Result<UnitaryCoveringBounds> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::invalid(format!("epsilon must be positive, got {epsilon}")));
    }
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let valid = epsilon <= 0.1;
    let d = (n * n) as f64;
    Ok(UnitaryCoveringBounds {
        n,
        epsilon,
        lower: valid.then(|| d * (3.0 / (4.0 * epsilon)).ln()),
        upper: valid.then(|| d * (7.0 / epsilon).ln()),
        valid,
    })
}

/// Frobenius-orthonormal basis of u(n): `i E_kk`, `(E_kl - E_lk)/√2` and
/// `i (E_kl + E_lk)/√2` for `k < l`.
pub fn skew_basis(n: usize) -> Vec<ComplexMatrix> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut basis = Vec::with_capacity(n * n);
    for k in 0..n {
        let mut m = ComplexMatrix::zeros(n, n);
        m[(k, k)] = C64::new(0.0, 1.0);
        basis.push(m);
    }
    for k in 0..n {
        for l in k + 1..n {
            let mut a = ComplexMatrix::zeros(n, n);
            a[(k, l)] = C64::new(s, 0.0);
            a[(l, k)] = C64::new(-s, 0.0);
            basis.push(a);
            let mut b = ComplexMatrix::zeros(n, n);
            b[(k, l)] = C64::new(0.0, s);
            b[(l, k)] = C64::new(0.0, s);
            basis.push(b);
        }
    }
    basis
}

fn coordinates(x: &ComplexMatrix, basis: &[ComplexMatrix]) -> Vec<f64> {
    basis
        .iter()
        .map(|b| b.iter().zip(x.iter()).map(|(p, q)| (p.conj() * q).re).sum())
        .collect()
}

fn from_coordinates(coords: &[f64], basis: &[ComplexMatrix]) -> ComplexMatrix {
    let n = basis[0].nrows();
    let mut m = ComplexMatrix::zeros(n, n);
    for (c, b) in coords.iter().zip(basis) {
        if *c != 0.0 {
            m += b * C64::new(*c, 0.0);
        }
    }
    m
}

/// Operator norm of a skew-Hermitian matrix.
fn skew_norm(x: &ComplexMatrix) -> f64 {
    norm_unchecked(x)
}

/// Anything that can replace a gate by a nearby element of a fixed finite set.
pub trait GateCovering {
    fn dim(&self) -> usize;
    fn epsilon(&self) -> f64;
    /// A net element close to `u` and its operator-norm distance.
    fn nearest(&self, u: &UnitaryMatrix) -> (UnitaryMatrix, f64);
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetConstructionLog {
    pub spacing: f64,
    pub source_radius: f64,
    pub retain_radius: f64,
    pub lattice_points_visited: u64,
}

/// A materialized ε-covering of U(n).
#[derive(Clone, Debug)]
pub struct UnitaryNet {
    n: usize,
    epsilon: f64,
    elements: Vec<UnitaryMatrix>,
    construction_log: Option<NetConstructionLog>,
}

impl UnitaryNet {
    /// Wraps an explicit element list; `epsilon` is the radius the caller claims.
    pub fn from_elements(n: usize, epsilon: f64, elements: Vec<UnitaryMatrix>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::invalid("a net needs at least one element"));
        }
        if elements.iter().any(|e| e.dim() != n) {
            return Err(Error::mismatch(format!("net elements must be {n}x{n}")));
        }
        Ok(UnitaryNet { n, epsilon, elements, construction_log: None })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[UnitaryMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn construction_log(&self) -> Option<&NetConstructionLog> {
        self.construction_log.as_ref()
    }

    /// Exhaustive nearest-element search; returns (index, distance).
    pub fn nearest_index(&self, u: &ComplexMatrix) -> (usize, f64) {
        self.elements
            .iter()
            .enumerate()
            .map(|(i, e)| (i, op_distance(e.matrix(), u)))
            .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
    }

    /// Binary layout, little-endian: `n: u64`, `epsilon: f64`, `count: u64`,
    /// then each element's entries row-major as `(re: f64, im: f64)`.
    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        w.write_all(&(self.n as u64).to_le_bytes())?;
        w.write_all(&self.epsilon.to_le_bytes())?;
        w.write_all(&(self.elements.len() as u64).to_le_bytes())?;
        for e in &self.elements {
            for r in 0..self.n {
                for c in 0..self.n {
                    let z = e[(r, c)];
                    w.write_all(&z.re.to_le_bytes())?;
                    w.write_all(&z.im.to_le_bytes())?;
                }
            }
        }
        Ok(())
    }

    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let mut buf = [0u8; 8];
        let mut next = |r: &mut dyn Read| -> Result<[u8; 8]> {
            r.read_exact(&mut buf)?;
            Ok(buf)
        };
        let n = u64::from_le_bytes(next(&mut r)?) as usize;
        let epsilon = f64::from_le_bytes(next(&mut r)?);
        let count = u64::from_le_bytes(next(&mut r)?) as usize;
        if n == 0 || n > 64 {
            return Err(Error::invalid(format!("bad net header: n = {n}")));
        }
        let mut elements = Vec::with_capacity(count.min(1 << 20));
        for _ in 0..count {
            let mut m = ComplexMatrix::zeros(n, n);
            for row in 0..n {
                for col in 0..n {
                    let re = f64::from_le_bytes(next(&mut r)?);
                    let im = f64::from_le_bytes(next(&mut r)?);
                    m[(row, col)] = C64::new(re, im);
                }
            }
            elements.push(UnitaryMatrix::new(m)?);
        }
        UnitaryNet::from_elements(n, epsilon, elements)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let f = std::fs::File::create(path)?;
        let mut w = std::io::BufWriter::new(f);
        self.write_to(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Self::read_from(std::io::BufReader::new(f))
    }
}

impl GateCovering for UnitaryNet {
    fn dim(&self) -> usize {
        self.n
    }

    fn epsilon(&self) -> f64 {
        self.epsilon
    }

    fn nearest(&self, u: &UnitaryMatrix) -> (UnitaryMatrix, f64) {
        let (i, d) = self.nearest_index(u.matrix());
        (self.elements[i].clone(), d)
    }
}

/// Lattice spacing and the radius of lattice points worth keeping.
fn lattice_geometry(n: usize, epsilon: f64) -> (f64, f64) {
    let spacing = 2.0 * epsilon / n as f64;
    (spacing, PI + epsilon + RETAIN_SLACK)
}

/// Absorbs rounding in the retention test, so the lattice point nearest to
/// any element of the π-ball is always kept.
const RETAIN_SLACK: f64 = 1e-9;

fn projected_element_count(n: usize, epsilon: f64) -> f64 {
    let (spacing, keep) = lattice_geometry(n, epsilon);
    let d = n * n;
    let frob_radius = (n as f64).sqrt() * keep;
    // unit-ball volume in d dimensions: pi^{d/2} / Gamma(d/2 + 1)
    let half = d as f64 / 2.0;
    let ln_unit = half * PI.ln() - ln_gamma(half + 1.0);
    let ln_ball = ln_unit + d as f64 * frob_radius.ln();
    // fraction of the Frobenius ball inside the operator-norm ball
    let mut rng = rng_from_seed(0x6e65_7473);
    let basis = skew_basis(n);
    let trials = 4000;
    let hits = (0..trials)
        .filter(|_| {
            let mut v: Vec<f64> = (0..d).map(|_| rng.sample(rand_distr::StandardNormal)).collect();
            let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let r = frob_radius * rng.random::<f64>().powf(1.0 / d as f64);
            v.iter_mut().for_each(|x| *x *= r / len);
            skew_norm(&from_coordinates(&v, &basis)) <= keep
        })
        .count();
    let frac = (hits.max(1)) as f64 / trials as f64;
    (ln_ball - d as f64 * spacing.ln()).exp() * frac
}

/// Lanczos approximation of ln Γ(x), x > 0.
fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = COEF[0];
    let t = x + G + 0.5;
    for (i, c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Builds the lattice ε-covering of U(n) for `n <= 3`.
///
/// Fails fast with [`Error::NetTooLarge`] when the projected element count
/// exceeds `max_elements`.
pub fn build_unitary_net(n: usize, epsilon: f64, max_elements: u64) -> Result<UnitaryNet> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::invalid(format!("epsilon must be positive, got {epsilon}")));
    }
    if n == 0 || n > MAX_GRID_DIM {
        return Err(Error::invalid(format!(
            "grid nets are built for 1 <= n <= {MAX_GRID_DIM}, got n = {n}"
        )));
    }
    let projected = projected_element_count(n, epsilon);
    if projected > max_elements as f64 {
        return Err(Error::NetTooLarge { projected: projected.ceil() as u64, limit: max_elements });
    }
    let (spacing, keep) = lattice_geometry(n, epsilon);
    let basis = skew_basis(n);
    let d = n * n;
    let frob_keep_sq = n as f64 * keep * keep;
    let max_index = ((n as f64).sqrt() * keep / spacing).floor() as i64;

    // depth-first walk over lattice points inside the Frobenius ball
    let mut points: Vec<Vec<f64>> = Vec::new();
    let mut visited = 0u64;
    let mut coords = vec![0.0; d];
    let mut stack: Vec<(usize, i64, f64)> = vec![(0, -max_index, 0.0)];
    while let Some((axis, idx, partial)) = stack.pop() {
        if idx > max_index {
            continue;
        }
        stack.push((axis, idx + 1, partial));
        let c = idx as f64 * spacing;
        let sq = partial + c * c;
        if sq > frob_keep_sq {
            continue;
        }
        coords[axis] = c;
        if axis + 1 < d {
            stack.push((axis + 1, -max_index, sq));
        } else {
            visited += 1;
            let frob = sq.sqrt();
            let keep_point = frob <= keep || skew_norm(&from_coordinates(&coords, &basis)) <= keep;
            if keep_point {
                points.push(coords.clone());
                if points.len() as u64 > max_elements {
                    return Err(Error::NetTooLarge {
                        projected: (projected.ceil() as u64).max(points.len() as u64),
                        limit: max_elements,
                    });
                }
            }
        }
    }
    let elements: Vec<UnitaryMatrix> = points
        .par_iter()
        .map(|c| SkewHermitian::from_projection(&from_coordinates(c, &basis)).exp())
        .collect();
    Ok(UnitaryNet {
        n,
        epsilon,
        elements,
        construction_log: Some(NetConstructionLog {
            spacing,
            source_radius: PI,
            retain_radius: keep,
            lattice_points_visited: visited,
        }),
    })
}

/// The same lattice net, never materialized: lookups round the principal
/// logarithm's coordinates to the lattice and compare against the axis
/// neighbours of that point. The rounded point alone is within ε, so the
/// returned element always is.
#[derive(Clone, Debug)]
pub struct LatticeNet {
    n: usize,
    epsilon: f64,
    spacing: f64,
    retain_radius: f64,
    basis: Vec<ComplexMatrix>,
}

impl LatticeNet {
    pub fn new(n: usize, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::invalid(format!("epsilon must be positive, got {epsilon}")));
        }
        if n == 0 {
            return Err(Error::invalid("n must be at least 1"));
        }
        let (spacing, retain_radius) = lattice_geometry(n, epsilon);
        Ok(LatticeNet { n, epsilon, spacing, retain_radius, basis: skew_basis(n) })
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    fn element(&self, idx: &[i64]) -> Option<UnitaryMatrix> {
        let coords: Vec<f64> = idx.iter().map(|&k| k as f64 * self.spacing).collect();
        let x = from_coordinates(&coords, &self.basis);
        (skew_norm(&x) <= self.retain_radius).then(|| SkewHermitian::from_projection(&x).exp())
    }
}

impl GateCovering for LatticeNet {
    fn dim(&self) -> usize {
        self.n
    }

    fn epsilon(&self) -> f64 {
        self.epsilon
    }

    fn nearest(&self, u: &UnitaryMatrix) -> (UnitaryMatrix, f64) {
        let x = principal_log(u);
        let rounded: Vec<i64> = coordinates(x.matrix(), &self.basis)
            .iter()
            .map(|c| (c / self.spacing).round() as i64)
            .collect();
        let mut best = self.element(&rounded).expect("rounded log lies in the retained ball");
        let mut best_d = op_distance(best.matrix(), u.matrix());
        for axis in 0..rounded.len() {
            for step in [-1i64, 1] {
                let mut idx = rounded.clone();
                idx[axis] += step;
                if let Some(e) = self.element(&idx) {
                    let d = op_distance(e.matrix(), u.matrix());
                    if d < best_d {
                        best = e;
                        best_d = d;
                    }
                }
            }
        }
        (best, best_d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringCheck {
    pub samples: u64,
    pub max_gap: f64,
    pub pass: bool,
}

/// Monte Carlo covering certificate: the largest distance from a Haar sample
/// to its nearest net element.
pub fn empirical_covering_check(net: &UnitaryNet, samples: u64, seed: u64) -> Result<CoveringCheck> {
    if samples == 0 {
        return Err(Error::invalid("samples must be at least 1"));
    }
    let max_gap = (0..samples)
        .into_par_iter()
        .map(|i| {
            let u = haar_unitary(net.n, derive_seed(seed, i));
            net.nearest_index(u.matrix()).1
        })
        .reduce(|| 0.0, f64::max);
    Ok(CoveringCheck { samples, max_gap, pass: max_gap <= net.epsilon })
}

/// Size of a greedy ε-packing of Haar samples: each sample is kept when it is
/// more than ε from every kept sample. A lower bound on the packing number.
pub fn empirical_packing_lower_bound(n: usize, epsilon: f64, trials: u64, seed: u64) -> Result<usize> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    if !(epsilon > 0.0) {
        return Err(Error::invalid("epsilon must be positive"));
    }
    let mut rng = rng_from_seed(seed);
    let mut kept: Vec<UnitaryMatrix> = Vec::new();
    for _ in 0..trials {
        let u = haar_unitary_with(n, &mut rng);
        if kept.iter().all(|k| op_distance(k.matrix(), u.matrix()) > epsilon) {
            kept.push(u);
        }
    }
    Ok(kept.len())
}

/// Exact ε-covering number of U(1) under the chordal metric: a ball of
/// chordal radius ε covers an arc of half-angle 2 asin(ε/2).
pub fn circle_covering_number(epsilon: f64) -> Result<u64> {
    if !(epsilon > 0.0) {
        return Err(Error::invalid("epsilon must be positive"));
    }
    if epsilon >= 2.0 {
        return Ok(1);
    }
    Ok((PI / (2.0 * (epsilon / 2.0).asin())).ceil() as u64)
}
