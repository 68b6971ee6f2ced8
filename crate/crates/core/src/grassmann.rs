//! Rank-n projectors on an m-dimensional space, their operator-norm geometry,
//! the Kato unitary between nearby subspaces, and exhaustive checks of the
//! product and quotient covering inequalities on small spaces.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    check_hermitian, haar_unitary_with, hermitian_eigen, identity, norm_unchecked, op_distance,
    rng_from_seed, spectral_apply, ComplexMatrix, UnitaryMatrix, C64,
};
use crate::metric::{
    brute_force_covering_number, brute_force_covering_number_with_limit, FiniteMetricSpace,
    DEFAULT_EXACT_LIMIT,
};

const ORTHONORMAL_TOL: f64 = 1e-10;
const IDEMPOTENT_TOL: f64 = 1e-9;
const RANK_TOL: f64 = 1e-6;
/// Eigenvalues of `1 - R` below this are treated as singular.
const KATO_EIGEN_FLOOR: f64 = 1e-8;

/// An n-dimensional subspace of C^m, stored as an m×n orthonormal basis.
#[derive(Clone, Debug)]
pub struct Subspace {
    basis: ComplexMatrix,
}

impl Subspace {
    pub fn new(basis: ComplexMatrix) -> Result<Self> {
        let (m, n) = basis.shape();
        if n == 0 || n > m {
            return Err(Error::invalid(format!("subspace rank must satisfy 1 <= n <= m, got n={n}, m={m}")));
        }
        let dev = norm_unchecked(&(basis.adjoint() * &basis - identity(n)));
        if dev > ORTHONORMAL_TOL {
            return Err(Error::NotOrthonormal { deviation: dev });
        }
        Ok(Subspace { basis })
    }

    /// Span of the first n columns of a Haar unitary.
    pub fn random(m: usize, n: usize, rng: &mut impl Rng) -> Result<Self> {
        if n == 0 || n > m {
            return Err(Error::invalid("subspace rank must satisfy 1 <= n <= m"));
        }
        let u = haar_unitary_with(m, rng);
        Subspace::new(u.columns(0, n).into_owned())
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }
}

/// A Hermitian idempotent m×m matrix of integer trace.
#[derive(Clone, Debug)]
pub struct Projector {
    matrix: ComplexMatrix,
    rank: usize,
}

impl Projector {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        check_hermitian(&matrix).map_err(|e| Error::NotProjector(e.to_string()))?;
        let dev = norm_unchecked(&(&matrix * &matrix - &matrix));
        if dev > IDEMPOTENT_TOL {
            return Err(Error::NotProjector(format!("|P^2 - P| = {dev:.3e}")));
        }
        let trace = matrix.trace().re;
        let rank = trace.round();
        if (trace - rank).abs() > RANK_TOL || rank < 0.0 {
            return Err(Error::NotProjector(format!("trace {trace} is not an integer")));
        }
        Ok(Projector { matrix, rank: rank as usize })
    }

    pub fn ambient_dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `V P V^dag`.
    pub fn conjugated(&self, v: &UnitaryMatrix) -> Result<Projector> {
        Projector::new(v.matrix() * &self.matrix * v.matrix().adjoint())
    }
}

pub fn projector_from_subspace(s: &Subspace) -> Result<Projector> {
    Projector::new(s.basis() * s.basis().adjoint())
}

fn check_same_shape(p: &Projector, q: &Projector) -> Result<()> {
    if p.ambient_dim() != q.ambient_dim() {
        return Err(Error::mismatch(format!(
            "ambient dimensions differ: {} vs {}",
            p.ambient_dim(),
            q.ambient_dim()
        )));
    }
    if p.rank() != q.rank() {
        return Err(Error::mismatch(format!("ranks differ: {} vs {}", p.rank(), q.rank())));
    }
    Ok(())
}

/// `|P - Q|`, the sine of the largest principal angle between the ranges.
pub fn projector_distance(p: &Projector, q: &Projector) -> Result<f64> {
    check_same_shape(p, q)?;
    Ok(op_distance(p.matrix(), q.matrix()))
}

/// Principal angles in ascending order: arccos of the singular values of
/// `B1^dag B2`.
pub fn principal_angles(a: &Subspace, b: &Subspace) -> Result<Vec<f64>> {
    if a.ambient_dim() != b.ambient_dim() || a.rank() != b.rank() {
        return Err(Error::mismatch("principal angles need equal m and n"));
    }
    let overlap = a.basis().adjoint() * b.basis();
    let mut angles: Vec<f64> = overlap
        .singular_values()
        .iter()
        .map(|&s| s.clamp(0.0, 1.0).acos())
        .collect();
    angles.sort_by(f64::total_cmp);
    Ok(angles)
}

/// The Kato unitary `V = (1 - R)^{-1/2} (QP + (1 - Q)(1 - P))`, `R = (P - Q)^2`,
/// which maps the range of P onto the range of Q. Requires `|P - Q| <= 1/√2`.
pub fn kato_unitary(p: &Projector, q: &Projector) -> Result<UnitaryMatrix> {
    check_same_shape(p, q)?;
    let distance = op_distance(p.matrix(), q.matrix());
    if distance > std::f64::consts::FRAC_1_SQRT_2 + 1e-12 {
        return Err(Error::KatoPrecondition { distance });
    }
    let m = p.ambient_dim();
    let id = identity(m);
    let diff = p.matrix() - q.matrix();
    let r = &diff * &diff;
    let (vals, vecs) = hermitian_eigen(&(&id - &r));
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    if min < KATO_EIGEN_FLOOR {
        return Err(Error::Singular { min_eigenvalue: min });
    }
    let inv_sqrt: Vec<C64> = vals.iter().map(|&l| C64::new(1.0 / l.sqrt(), 0.0)).collect();
    let scale = spectral_apply(&vecs, &inv_sqrt);
    let v_prime = q.matrix() * p.matrix() + (&id - q.matrix()) * (&id - p.matrix());
    UnitaryMatrix::new(scale * v_prime)
}

/// Certified sandwich on the quotient distance d': `|P - Q|/2 <= d' <= |1 - V_Kato|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuotientBounds {
    pub lower: f64,
    pub upper: f64,
}

pub fn quotient_distance_bounds(p: &Projector, q: &Projector) -> Result<QuotientBounds> {
    let lower = projector_distance(p, q)? / 2.0;
    let v = kato_unitary(p, q)?;
    let upper = op_distance(&identity(p.ambient_dim()), v.matrix());
    Ok(QuotientBounds { lower, upper })
}

/// Log-domain Grassmannian covering bounds
/// `19^{-m²} (9/(5ε))^{2n(m-n)} <= N_G <= 38^{m²} (3/(4ε))^{2n(m-n)}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrassmannCoveringBounds {
    pub n: usize,
    pub m: usize,
    pub epsilon: f64,
    pub lower_log: f64,
    pub upper_log: f64,
    /// ε <= 1/71
    pub lower_valid: bool,
    /// ε <= 1/10
    pub upper_valid: bool,
    /// lower_log > 0
    pub lower_nontrivial: bool,
}

pub fn grassmann_covering_bounds(n: usize, m: usize, epsilon: f64) -> Result<GrassmannCoveringBounds> {
    if n == 0 || n >= m {
        return Err(Error::invalid(format!("need 1 <= n < m, got n={n}, m={m}")));
    }
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::invalid("epsilon must be positive"));
    }
    let (nf, mf) = (n as f64, m as f64);
    let dim = 2.0 * nf * (mf - nf);
    let lower_log = -mf * mf * 19f64.ln() + dim * (9.0 / (5.0 * epsilon)).ln();
    let upper_log = mf * mf * 38f64.ln() + dim * (3.0 / (4.0 * epsilon)).ln();
    Ok(GrassmannCoveringBounds {
        n,
        m,
        epsilon,
        lower_log,
        upper_log,
        lower_valid: epsilon <= 1.0 / 71.0,
        upper_valid: epsilon <= 0.1,
        lower_nontrivial: lower_log > 0.0,
    })
}

/// Exact numbers behind `N(M1,2ε) N(M2,2ε) <= N(M1×M2, ε) <= N(M1,ε) N(M2,ε)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductReport {
    pub epsilon: f64,
    pub first_size: usize,
    pub second_size: usize,
    pub first_eps: usize,
    pub second_eps: usize,
    pub first_2eps: usize,
    pub second_2eps: usize,
    pub product_eps: usize,
    pub holds: bool,
}

/// Largest product space handled by [`product_covering_check`].
pub const PRODUCT_EXACT_LIMIT: usize = 64;

pub fn product_covering_check(
    first: &FiniteMetricSpace,
    second: &FiniteMetricSpace,
    epsilon: f64,
) -> Result<ProductReport> {
    let product = FiniteMetricSpace::product(first, second)?;
    let first_eps = brute_force_covering_number(first, epsilon)?;
    let second_eps = brute_force_covering_number(second, epsilon)?;
    let first_2eps = brute_force_covering_number(first, 2.0 * epsilon)?;
    let second_2eps = brute_force_covering_number(second, 2.0 * epsilon)?;
    let product_eps = brute_force_covering_number_with_limit(&product, epsilon, PRODUCT_EXACT_LIMIT)?;
    let holds = first_2eps * second_2eps <= product_eps && product_eps <= first_eps * second_eps;
    Ok(ProductReport {
        epsilon,
        first_size: first.len(),
        second_size: second.len(),
        first_eps,
        second_eps,
        first_2eps,
        second_2eps,
        product_eps,
        holds,
    })
}

/// Exact numbers behind `N(G,2ε)/N(H,ε) <= N(G/H,ε) <= N(G,ε/2)/N(H,ε)` for
/// G = Z_order with the cyclic metric and H its subgroup of the given order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuotientReport {
    pub order: usize,
    pub subgroup_order: usize,
    pub epsilon: f64,
    pub group_2eps: usize,
    pub group_half_eps: usize,
    pub subgroup_eps: usize,
    pub quotient_eps: usize,
    pub holds: bool,
}

/// Coset space Z_order / H under `d'([x],[y]) = min_{h in H} d(0, y - x + h)`.
pub fn cyclic_quotient_space(order: usize, subgroup_order: usize) -> Result<FiniteMetricSpace> {
    if order == 0 || subgroup_order == 0 || order % subgroup_order != 0 {
        return Err(Error::invalid(format!(
            "subgroup order {subgroup_order} does not divide group order {order}"
        )));
    }
    let step = order / subgroup_order;
    let cyc = |a: usize| a.min(order - a) as f64;
    FiniteMetricSpace::from_fn(step, |x, y| {
        (0..subgroup_order)
            .map(|k| cyc((y + order - x + k * step) % order))
            .fold(f64::INFINITY, f64::min)
    })
}

pub fn quotient_covering_check(order: usize, subgroup_order: usize, epsilon: f64) -> Result<QuotientReport> {
    let quotient = cyclic_quotient_space(order, subgroup_order)?;
    let group = FiniteMetricSpace::cycle(order)?;
    let step = order / subgroup_order;
    let subgroup_points: Vec<usize> = (0..subgroup_order).map(|k| k * step).collect();
    let subgroup = group.restrict(&subgroup_points)?;
    let cover = |s: &FiniteMetricSpace, e: f64| brute_force_covering_number_with_limit(s, e, DEFAULT_EXACT_LIMIT);
    let group_2eps = cover(&group, 2.0 * epsilon)?;
    let group_half_eps = cover(&group, epsilon / 2.0)?;
    let subgroup_eps = cover(&subgroup, epsilon)?;
    let quotient_eps = cover(&quotient, epsilon)?;
    // integer form of the two ratios
    let holds = group_2eps <= quotient_eps * subgroup_eps && quotient_eps * subgroup_eps <= group_half_eps;
    Ok(QuotientReport {
        order,
        subgroup_order,
        epsilon,
        group_2eps,
        group_half_eps,
        subgroup_eps,
        quotient_eps,
        holds,
    })
}

/// Greedy packing of Haar-random rank-n projectors under the operator norm.
pub fn empirical_grassmann_packing(n: usize, m: usize, epsilon: f64, trials: u64, seed: u64) -> Result<usize> {
    if m > 16 {
        return Err(Error::invalid(format!("ambient dimension {m} exceeds 16")));
    }
    if n == 0 || n > m {
        return Err(Error::invalid("need 1 <= n <= m"));
    }
    let mut rng = rng_from_seed(seed);
    let mut kept: Vec<ComplexMatrix> = Vec::new();
    for _ in 0..trials {
        let s = Subspace::random(m, n, &mut rng)?;
        let p = s.basis() * s.basis().adjoint();
        if kept.iter().all(|k| op_distance(k, &p) > epsilon) {
            kept.push(p);
        }
    }
    Ok(kept.len())
}
