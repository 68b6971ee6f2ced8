//! Dense complex linear algebra used by every other module.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>`. The two validated wrappers
//! [`UnitaryMatrix`] and [`SkewHermitian`] carry the invariants the geometry
//! relies on; everything else works on plain [`ComplexMatrix`] values.

use std::ops::Deref;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;

/// Dimensions up to this size use a full SVD for the operator norm.
pub const EXACT_NORM_DIM: usize = 64;

const UNITARY_TOL: f64 = 1e-10;
const SKEW_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-10;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent child seed, so per-sample streams do not depend on
/// iteration order.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    a.adjoint()
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b - b * a
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn frobenius_norm(a: &ComplexMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn is_finite(a: &ComplexMatrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Largest singular value.
pub fn operator_norm(a: &ComplexMatrix) -> Result<f64> {
    if !is_finite(a) {
        return Err(Error::NonFinite);
    }
    Ok(norm_unchecked(a))
}

/// Operator norm without the finiteness check; closed forms for 1x1 and 2x2.
pub(crate) fn norm_unchecked(a: &ComplexMatrix) -> f64 {
    let (r, c) = a.shape();
    if r == 0 || c == 0 {
        return 0.0;
    }
    if r == 1 && c == 1 {
        return a[(0, 0)].norm();
    }
    if r == 2 && c == 2 {
        return norm_2x2(a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]);
    }
    if r.max(c) <= EXACT_NORM_DIM {
        a.singular_values().max()
    } else {
        power_norm(a)
    }
}

#[inline]
pub(crate) fn norm_2x2(a: C64, b: C64, c: C64, d: C64) -> f64 {
    let f = a.norm_sqr() + b.norm_sqr() + c.norm_sqr() + d.norm_sqr();
    let det = (a * d - b * c).norm();
    let disc = ((f - 2.0 * det) * (f + 2.0 * det)).max(0.0).sqrt();
    ((f + disc) / 2.0).sqrt()
}

/// Operator-norm distance between two equally sized matrices.
pub fn op_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    match a.shape() {
        (1, 1) => (a[(0, 0)] - b[(0, 0)]).norm(),
        (2, 2) => norm_2x2(
            a[(0, 0)] - b[(0, 0)],
            a[(0, 1)] - b[(0, 1)],
            a[(1, 0)] - b[(1, 0)],
            a[(1, 1)] - b[(1, 1)],
        ),
        _ => norm_unchecked(&(a - b)),
    }
}

fn power_norm(a: &ComplexMatrix) -> f64 {
    let ata = a.adjoint() * a;
    let n = ata.ncols();
    let mut v = nalgebra::DVector::from_fn(n, |i, _| C64::new(1.0 + (i as f64) * 1e-3, 0.0));
    v /= C64::new(v.norm(), 0.0);
    let mut lambda = 0.0;
    for _ in 0..2000 {
        let w = &ata * &v;
        let nw = w.norm();
        if nw == 0.0 {
            return 0.0;
        }
        let next = nw;
        v = w / C64::new(nw, 0.0);
        if (next - lambda).abs() <= 1e-14 * next {
            lambda = next;
            break;
        }
        lambda = next;
    }
    lambda.sqrt()
}

/// Eigen-decomposition of a Hermitian matrix; eigenvalues ascending, the
/// eigenvectors are the matching columns.
pub fn hermitian_eigen(h: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = h.nrows();
    let sym = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

fn hermitian_deviation(a: &ComplexMatrix) -> f64 {
    norm_unchecked(&(a - a.adjoint()))
}

pub fn check_hermitian(a: &ComplexMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::mismatch("Hermitian matrix must be square"));
    }
    if !is_finite(a) {
        return Err(Error::NonFinite);
    }
    let dev = hermitian_deviation(a);
    if dev > HERMITIAN_TOL * norm_unchecked(a).max(1.0) {
        return Err(Error::NotHermitian { deviation: dev });
    }
    Ok(())
}

/// A matrix with `|U^dag U - 1| <= 1e-10`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix(ComplexMatrix);

impl UnitaryMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::mismatch("unitary matrix must be square"));
        }
        if !is_finite(&m) {
            return Err(Error::NonFinite);
        }
        let dev = unitarity_deviation(&m);
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation: dev });
        }
        Ok(UnitaryMatrix(m))
    }

    pub fn identity(n: usize) -> Self {
        UnitaryMatrix(identity(n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_inner(self) -> ComplexMatrix {
        self.0
    }

    pub fn dagger(&self) -> UnitaryMatrix {
        UnitaryMatrix(self.0.adjoint())
    }

    pub fn compose(&self, other: &UnitaryMatrix) -> UnitaryMatrix {
        UnitaryMatrix(&self.0 * &other.0)
    }
}

impl Deref for UnitaryMatrix {
    type Target = ComplexMatrix;

    fn deref(&self) -> &ComplexMatrix {
        &self.0
    }
}

pub fn unitarity_deviation(m: &ComplexMatrix) -> f64 {
    let n = m.nrows();
    norm_unchecked(&(m.adjoint() * m - identity(n)))
}

/// A matrix with `|X + X^dag| <= 1e-12`, i.e. an element of the Lie algebra u(n).
#[derive(Clone, Debug, PartialEq)]
pub struct SkewHermitian(ComplexMatrix);

impl SkewHermitian {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::mismatch("skew-Hermitian matrix must be square"));
        }
        if !is_finite(&m) {
            return Err(Error::NonFinite);
        }
        let dev = norm_unchecked(&(&m + m.adjoint()));
        if dev > SKEW_TOL {
            return Err(Error::NotSkewHermitian { deviation: dev });
        }
        Ok(SkewHermitian(m))
    }

    /// Projects onto u(n) by taking `(X - X^dag)/2`.
    pub fn from_projection(m: &ComplexMatrix) -> Self {
        SkewHermitian((m - m.adjoint()) * C64::new(0.5, 0.0))
    }

    pub fn zeros(n: usize) -> Self {
        SkewHermitian(ComplexMatrix::zeros(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        norm_unchecked(&self.0)
    }

    /// exp(X) through the eigen-decomposition of the Hermitian matrix -iX.
    pub fn exp(&self) -> UnitaryMatrix {
        let h = &self.0 * C64::new(0.0, -1.0);
        let (vals, vecs) = hermitian_eigen(&h);
        let phases: Vec<C64> = vals.iter().map(|&l| C64::from_polar(1.0, l)).collect();
        UnitaryMatrix(spectral_apply(&vecs, &phases))
    }
}

impl Deref for SkewHermitian {
    type Target = ComplexMatrix;

    fn deref(&self) -> &ComplexMatrix {
        &self.0
    }
}

/// V diag(f) V^dag.
pub(crate) fn spectral_apply(vecs: &ComplexMatrix, diag: &[C64]) -> ComplexMatrix {
    let n = vecs.nrows();
    let scaled = ComplexMatrix::from_fn(n, n, |r, c| vecs[(r, c)] * diag[c]);
    scaled * vecs.adjoint()
}

/// exp(-i t H) for Hermitian H.
pub fn exp_i_hermitian(h: &ComplexMatrix, t: f64) -> UnitaryMatrix {
    let (vals, vecs) = hermitian_eigen(h);
    let phases: Vec<C64> = vals.iter().map(|&l| C64::from_polar(1.0, -t * l)).collect();
    UnitaryMatrix(spectral_apply(&vecs, &phases))
}

/// Matrix exponential. Skew-Hermitian input goes through the eigen route and
/// yields an exactly unitary result; anything else uses scaling and squaring
/// with a degree-13 Padé approximant.
pub fn matrix_exp(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !x.is_square() {
        return Err(Error::mismatch("matrix_exp needs a square matrix"));
    }
    if !is_finite(x) {
        return Err(Error::NonFinite);
    }
    let skew_dev = norm_unchecked(&(x + x.adjoint()));
    if skew_dev <= SKEW_TOL * norm_unchecked(x).max(1.0) {
        return Ok(SkewHermitian::from_projection(x).exp().into_inner());
    }
    Ok(expm_pade13(x))
}

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

pub(crate) fn expm_pade13(x: &ComplexMatrix) -> ComplexMatrix {
    let n = x.nrows();
    let one_norm = (0..n)
        .map(|c| x.column(c).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if one_norm > THETA13 {
        (one_norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = x * C64::new(2f64.powi(-squarings), 0.0);
    let id = identity(n);
    let b = |i: usize| C64::new(PADE13[i], 0.0);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_inner = &a6 * (&a6 * b(13) + &a4 * b(11) + &a2 * b(9))
        + &a6 * b(7)
        + &a4 * b(5)
        + &a2 * b(3)
        + &id * b(1);
    let u = &a * u_inner;
    let v = &a6 * (&a6 * b(12) + &a4 * b(10) + &a2 * b(8))
        + &a6 * b(6)
        + &a4 * b(4)
        + &a2 * b(2)
        + &id * b(0);
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.lu().solve(&p).expect("Pade denominator is nonsingular");
    for _ in 0..squarings {
        r = &r * &r;
    }
    r
}

fn complex_gaussian_matrix(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re * s, im * s)
    })
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of R's diagonal moved into Q.
pub fn haar_unitary(n: usize, seed: u64) -> UnitaryMatrix {
    haar_unitary_with(n, &mut rng_from_seed(seed))
}

pub fn haar_unitary_with(n: usize, rng: &mut impl Rng) -> UnitaryMatrix {
    assert!(n >= 1, "haar_unitary needs n >= 1");
    let g = complex_gaussian_matrix(n, rng);
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let mut u = q;
    for c in 0..n {
        let d = r[(c, c)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for row in 0..n {
            u[(row, c)] *= phase;
        }
    }
    UnitaryMatrix(u)
}

/// Random element of the operator-norm ball of radius `radius` in u(n).
pub fn random_skew_in_ball(n: usize, radius: f64, seed: u64) -> Result<SkewHermitian> {
    random_skew_in_ball_with(n, radius, &mut rng_from_seed(seed))
}

pub fn random_skew_in_ball_with(n: usize, radius: f64, rng: &mut impl Rng) -> Result<SkewHermitian> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::invalid("radius must be positive and finite"));
    }
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    loop {
        let g = complex_gaussian_matrix(n, rng);
        let x = SkewHermitian::from_projection(&g);
        let norm = x.norm();
        if norm == 0.0 {
            continue;
        }
        // u in (0, 1]
        let u: f64 = 1.0 - rng.random::<f64>();
        let scale = u * radius / norm;
        let m = x.matrix() * C64::new(scale, 0.0);
        return Ok(SkewHermitian(m));
    }
}

/// Random Hermitian matrix (GUE-like) normalized to operator norm `norm`.
pub fn random_hermitian(n: usize, norm: f64, rng: &mut impl Rng) -> ComplexMatrix {
    let g = complex_gaussian_matrix(n, rng);
    let h = (&g + g.adjoint()) * C64::new(0.5, 0.0);
    let current = norm_unchecked(&h);
    if current == 0.0 {
        return h;
    }
    h * C64::new(norm / current, 0.0)
}

/// Sorted real eigenvalues of a Hermitian operator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
}

impl Spectrum {
    pub fn of(o: &ComplexMatrix) -> Result<Self> {
        check_hermitian(o)?;
        let (eigenvalues, _) = hermitian_eigen(o);
        Ok(Spectrum { eigenvalues })
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    pub fn width(&self) -> f64 {
        (self.max() - self.min()) / 2.0
    }
}

/// w(O) = (omega_max - omega_min) / 2.
pub fn spectral_width(o: &ComplexMatrix) -> Result<f64> {
    Ok(Spectrum::of(o)?.width())
}

/// The three terms of the exponential-map Lipschitz sandwich
/// `(2 - e^r)|X - Y| <= |e^X - e^Y| <= |X - Y|`, with `r = max(|X|, |Y|)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LipschitzTriple {
    /// Present only when `2 - e^r > 0`.
    pub lower_lhs: Option<f64>,
    pub mid: f64,
    pub upper_rhs: f64,
    pub radius: f64,
}

impl LipschitzTriple {
    pub fn upper_holds(&self, slack: f64) -> bool {
        self.mid <= self.upper_rhs + slack
    }

    pub fn lower_holds(&self, slack: f64) -> bool {
        self.lower_lhs.map_or(true, |l| l <= self.mid + slack)
    }
}

pub fn check_exp_lipschitz(x: &SkewHermitian, y: &SkewHermitian) -> Result<LipschitzTriple> {
    if x.dim() != y.dim() {
        return Err(Error::mismatch("Lipschitz check needs equal dimensions"));
    }
    let r = x.norm().max(y.norm());
    let diff = norm_unchecked(&(x.matrix() - y.matrix()));
    let mid = op_distance(x.exp().matrix(), y.exp().matrix());
    let factor = 2.0 - r.exp();
    Ok(LipschitzTriple {
        lower_lhs: (factor > 0.0).then(|| factor * diff),
        mid,
        upper_rhs: diff,
        radius: r,
    })
}

/// Principal logarithm of a unitary, eigenphases folded into (-pi, pi].
pub fn principal_log(u: &UnitaryMatrix) -> SkewHermitian {
    let n = u.dim();
    let schur = u.matrix().clone().schur();
    let (q, t) = schur.unpack();
    let phases: Vec<C64> = (0..n).map(|i| C64::new(0.0, fold_phase(t[(i, i)].arg()))).collect();
    let x = spectral_apply(&q, &phases);
    SkewHermitian::from_projection(&x)
}

/// Folds an angle into (-pi, pi].
pub fn fold_phase(theta: f64) -> f64 {
    use std::f64::consts::PI;
    let mut t = theta % (2.0 * PI);
    if t <= -PI {
        t += 2.0 * PI;
    } else if t > PI {
        t -= 2.0 * PI;
    }
    t
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(
        2,
        2,
        &[c(0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), c(0.0)],
    )
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)])
}

pub fn hadamard() -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_row_slice(2, 2, &[c(s), c(s), c(s), c(-s)])
}

#[inline]
pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn operator_norm_examples() {
        assert_eq!(operator_norm(&ComplexMatrix::zeros(3, 3)).unwrap(), 0.0);
        let d = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(3.0), c(-4.0)]));
        assert_relative_eq!(operator_norm(&d).unwrap(), 4.0, max_relative = 1e-12);
        let j = ComplexMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]);
        assert_relative_eq!(operator_norm(&j).unwrap(), 1.0, max_relative = 1e-12);
        // same block through the SVD path
        let mut big = ComplexMatrix::zeros(3, 3);
        big[(0, 1)] = c(1.0);
        assert_relative_eq!(operator_norm(&big).unwrap(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn operator_norm_rejects_nan() {
        let mut m = identity(2);
        m[(1, 1)] = C64::new(f64::NAN, 0.0);
        assert!(matches!(operator_norm(&m), Err(Error::NonFinite)));
    }

    #[test]
    fn closed_form_2x2_matches_svd() {
        let mut rng = rng_from_seed(3);
        for _ in 0..200 {
            let m = complex_gaussian_matrix(2, &mut rng);
            let svd = m.singular_values().max();
            assert_relative_eq!(norm_unchecked(&m), svd, max_relative = 1e-10);
        }
    }

    #[test]
    fn power_iteration_agrees_with_svd() {
        let mut rng = rng_from_seed(11);
        let m = complex_gaussian_matrix(70, &mut rng);
        let svd = m.singular_values().max();
        assert_relative_eq!(power_norm(&m), svd, max_relative = 1e-8);
    }

    #[test]
    fn exp_examples() {
        let z = matrix_exp(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert!(op_distance(&z, &identity(3)) < 1e-15);

        let d = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            C64::new(0.0, PI),
            C64::new(0.0, -PI),
        ]));
        let e = matrix_exp(&d).unwrap();
        assert!(op_distance(&e, &(identity(2) * c(-1.0))) < 1e-12);

        let th = PI / 3.0;
        let x = ComplexMatrix::from_row_slice(2, 2, &[c(0.0), c(th), c(-th), c(0.0)]);
        let r = matrix_exp(&x).unwrap();
        let rot = ComplexMatrix::from_row_slice(
            2,
            2,
            &[c(th.cos()), c(th.sin()), c(-th.sin()), c(th.cos())],
        );
        assert!(op_distance(&r, &rot) < 1e-12);
        assert_relative_eq!(op_distance(&r, &identity(2)), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn pade_agrees_with_eigen_route() {
        let mut rng = rng_from_seed(5);
        for n in [2, 3, 5, 8] {
            let x = random_skew_in_ball_with(n, 6.0, &mut rng).unwrap();
            let eig = x.exp();
            let pade = expm_pade13(x.matrix());
            assert!(op_distance(eig.matrix(), &pade) < 1e-12 * 10.0);
        }
    }

    #[test]
    fn pade_on_non_normal_matches_series() {
        // nilpotent: exp(N) = 1 + N + N^2/2 exactly
        let mut n = ComplexMatrix::zeros(3, 3);
        n[(0, 1)] = c(2.0);
        n[(1, 2)] = c(-3.0);
        n[(0, 2)] = C64::new(0.5, 1.0);
        let expected = identity(3) + &n + &n * &n * c(0.5);
        let got = matrix_exp(&n).unwrap();
        assert!(op_distance(&got, &expected) < 1e-12);
    }

    #[test]
    fn skew_exp_is_unitary() {
        let x = random_skew_in_ball(6, 3.0, 1).unwrap();
        assert!(UnitaryMatrix::new(matrix_exp(x.matrix()).unwrap()).is_ok());
    }

    #[test]
    fn haar_is_deterministic_and_unitary() {
        let a = haar_unitary(4, 42);
        let b = haar_unitary(4, 42);
        assert_eq!(a, b);
        assert!(unitarity_deviation(&a) < 1e-12);
        let u1 = haar_unitary(1, 9);
        assert_relative_eq!(u1[(0, 0)].norm(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn haar_first_moment() {
        let samples = 10_000;
        let mean: f64 = (0..samples)
            .map(|i| haar_unitary(2, derive_seed(7, i))[(0, 0)].norm_sqr())
            .sum::<f64>()
            / samples as f64;
        assert!((mean - 0.5).abs() <= 0.02, "mean {mean}");
    }

    #[test]
    fn skew_ball_samples_respect_radius() {
        let mut rng = rng_from_seed(17);
        for _ in 0..1000 {
            let x = random_skew_in_ball_with(3, 1.0, &mut rng).unwrap();
            let nrm = x.norm();
            assert!(nrm > 0.0 && nrm <= 1.0 + 1e-12);
            assert!(SkewHermitian::new(x.matrix().clone()).is_ok());
        }
        assert!(random_skew_in_ball(2, 0.0, 1).is_err());
    }

    #[test]
    fn spectral_width_examples() {
        assert_relative_eq!(spectral_width(&pauli_z()).unwrap(), 1.0, max_relative = 1e-12);
        let u = haar_unitary(5, 2);
        let cols = u.columns(0, 2).into_owned();
        let p = &cols * cols.adjoint();
        assert_relative_eq!(spectral_width(&p).unwrap(), 0.5, max_relative = 1e-10);
        assert!(matches!(
            spectral_width(&ComplexMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)])),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn lipschitz_examples() {
        let x = random_skew_in_ball(3, 0.4, 8).unwrap();
        let t = check_exp_lipschitz(&x, &x).unwrap();
        assert_eq!((t.lower_lhs.unwrap(), t.mid, t.upper_rhs), (0.0, 0.0, 0.0));
        assert_relative_eq!(2.0 - 0.4f64.exp(), 0.5081753023587297, max_relative = 1e-15);
        assert!(2.0 - 0.4f64.exp() > 0.5);
        let big_x = random_skew_in_ball(3, 3.0, 1).unwrap();
        let big_y = random_skew_in_ball(3, 3.0, 2).unwrap();
        let t = check_exp_lipschitz(&big_x, &big_y).unwrap();
        if t.radius > 2f64.ln() {
            assert!(t.lower_lhs.is_none());
        }
        assert!(t.upper_holds(1e-10));
    }

    #[test]
    fn principal_log_round_trip() {
        for seed in 0..50 {
            let u = haar_unitary(4, seed);
            let x = principal_log(&u);
            assert!(x.norm() <= PI + 1e-12);
            assert!(op_distance(x.exp().matrix(), u.matrix()) < 1e-8);
        }
        let minus = UnitaryMatrix::new(identity(2) * c(-1.0)).unwrap();
        let x = principal_log(&minus);
        // -1 folds to +i pi, never -i pi
        assert!((x[(0, 0)].im - PI).abs() < 1e-12);
    }

    #[test]
    fn fold_phase_convention() {
        assert_relative_eq!(fold_phase(PI), PI);
        assert_relative_eq!(fold_phase(-PI), PI);
        assert_relative_eq!(fold_phase(3.0 * PI / 2.0), -PI / 2.0, max_relative = 1e-12);
    }
}
