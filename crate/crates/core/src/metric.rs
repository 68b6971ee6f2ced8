//! Finite metric spaces, ε-coverings, ε-packings and the exact searches behind
//! covering and packing numbers.
//!
//! Coverings use closed balls (`d <= ε`, with a 1e-12 slack for floating-point
//! noise); packings use the strict inequality `d > ε` with no slack. Ties at
//! exactly ε therefore count as covered but not as packed.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::rng_from_seed;

pub type PointId = usize;

/// Slack added to ε in covering checks only.
pub const COVER_SLACK: f64 = 1e-12;
/// Default size cap for the exact searches.
pub const DEFAULT_EXACT_LIMIT: usize = 15;
/// Hard cap imposed by the 128-bit point sets.
pub const MAX_EXACT_POINTS: usize = 128;

const METRIC_TOL: f64 = 1e-12;
const TRIANGLE_SAMPLES: usize = 20_000;

/// Points `0..len` with a precomputed symmetric distance table.
#[derive(Clone, Debug)]
pub struct FiniteMetricSpace {
    len: usize,
    dist: Vec<f64>,
}

impl FiniteMetricSpace {
    /// Builds the table from a distance oracle and validates the metric
    /// axioms: exact zero diagonal and symmetry, triangle inequality on every
    /// triple for small spaces and on a seeded sample of triples otherwise.
    pub fn from_fn(len: usize, mut oracle: impl FnMut(PointId, PointId) -> f64) -> Result<Self> {
        let mut dist = vec![0.0; len * len];
        for i in 0..len {
            for j in 0..len {
                dist[i * len + j] = oracle(i, j);
            }
        }
        let space = FiniteMetricSpace { len, dist };
        space.validate()?;
        Ok(space)
    }

    pub fn from_points<T>(points: &[T], metric: impl Fn(&T, &T) -> f64) -> Result<Self> {
        Self::from_fn(points.len(), |i, j| metric(&points[i], &points[j]))
    }

    /// The cycle graph on `n` vertices, d(x, y) = min(|x - y|, n - |x - y|).
    pub fn cycle(n: usize) -> Result<Self> {
        Self::from_fn(n, |i, j| {
            let a = i.abs_diff(j);
            a.min(n - a) as f64
        })
    }

    /// Direct product under the max metric; point `(i, j)` has id `i * |b| + j`.
    pub fn product(a: &FiniteMetricSpace, b: &FiniteMetricSpace) -> Result<Self> {
        let nb = b.len();
        Self::from_fn(a.len() * nb, |p, q| {
            a.distance(p / nb, q / nb).max(b.distance(p % nb, q % nb))
        })
    }

    /// Subspace induced by a list of points.
    pub fn restrict(&self, points: &[PointId]) -> Result<Self> {
        for &p in points {
            self.check_id(p)?;
        }
        Self::from_fn(points.len(), |i, j| self.distance(points[i], points[j]))
    }

    fn validate(&self) -> Result<()> {
        let n = self.len;
        for i in 0..n {
            for j in 0..n {
                let d = self.dist[i * n + j];
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::InvalidMetric(format!("d({i},{j}) = {d}")));
                }
                if i == j && d != 0.0 {
                    return Err(Error::InvalidMetric(format!("d({i},{i}) = {d} != 0")));
                }
                if (d - self.dist[j * n + i]).abs() > METRIC_TOL {
                    return Err(Error::InvalidMetric(format!("d({i},{j}) is not symmetric")));
                }
            }
        }
        let check = |i: usize, j: usize, k: usize| {
            let lhs = self.dist[i * n + k];
            let rhs = self.dist[i * n + j] + self.dist[j * n + k];
            if lhs > rhs + METRIC_TOL {
                Err(Error::InvalidMetric(format!(
                    "triangle inequality fails on ({i},{j},{k})"
                )))
            } else {
                Ok(())
            }
        };
        if n.pow(3) <= TRIANGLE_SAMPLES {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        check(i, j, k)?;
                    }
                }
            }
        } else {
            let mut rng = rng_from_seed(0x7472_6961);
            for _ in 0..TRIANGLE_SAMPLES {
                let (i, j, k) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
                check(i, j, k)?;
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn distance(&self, a: PointId, b: PointId) -> f64 {
        self.dist[a * self.len + b]
    }

    fn check_id(&self, p: PointId) -> Result<()> {
        if p >= self.len {
            Err(Error::PointNotInSpace { index: p, size: self.len })
        } else {
            Ok(())
        }
    }

    #[inline]
    fn covers(&self, a: PointId, b: PointId, epsilon: f64) -> bool {
        self.distance(a, b) <= epsilon + COVER_SLACK
    }
}

/// A selected subset together with its certificates at `epsilon`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetResult {
    pub selected: Vec<PointId>,
    pub epsilon: f64,
    pub is_covering: bool,
    pub is_packing: bool,
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("epsilon must be positive, got {epsilon}")))
    }
}

/// Greedy maximal ε-packing over a seeded shuffle of the points. A maximal
/// packing cannot be extended, so every point lies within ε of it: the result
/// is an ε-net.
pub fn greedy_maximal_packing(space: &FiniteMetricSpace, epsilon: f64, seed: u64) -> Result<NetResult> {
    check_epsilon(epsilon)?;
    if space.is_empty() {
        return Err(Error::EmptySpace);
    }
    let mut order: Vec<PointId> = (0..space.len()).collect();
    order.shuffle(&mut rng_from_seed(seed));
    let mut selected: Vec<PointId> = Vec::new();
    for p in order {
        if selected.iter().all(|&q| space.distance(p, q) > epsilon) {
            selected.push(p);
        }
    }
    let is_covering = verify_covering(space, &selected, epsilon)?;
    let is_packing = verify_packing(space, &selected, epsilon)?;
    Ok(NetResult { selected, epsilon, is_covering, is_packing })
}

pub fn verify_covering(space: &FiniteMetricSpace, subset: &[PointId], epsilon: f64) -> Result<bool> {
    for &s in subset {
        space.check_id(s)?;
    }
    Ok((0..space.len()).all(|p| subset.iter().any(|&s| space.covers(s, p, epsilon))))
}

pub fn verify_packing(space: &FiniteMetricSpace, subset: &[PointId], epsilon: f64) -> Result<bool> {
    for &s in subset {
        space.check_id(s)?;
    }
    for (i, &a) in subset.iter().enumerate() {
        for &b in &subset[i + 1..] {
            if a != b && space.distance(a, b) <= epsilon {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn check_limit(space: &FiniteMetricSpace, limit: usize) -> Result<()> {
    let limit = limit.min(MAX_EXACT_POINTS);
    if space.len() > limit {
        Err(Error::ExactSearchLimit { size: space.len(), limit })
    } else {
        Ok(())
    }
}

pub fn brute_force_covering_number(space: &FiniteMetricSpace, epsilon: f64) -> Result<usize> {
    brute_force_covering_number_with_limit(space, epsilon, DEFAULT_EXACT_LIMIT)
}

pub fn brute_force_packing_number(space: &FiniteMetricSpace, epsilon: f64) -> Result<usize> {
    brute_force_packing_number_with_limit(space, epsilon, DEFAULT_EXACT_LIMIT)
}

/// Exact minimum ε-covering size by branch and bound (set cover over closed
/// balls centred at the points).
pub fn brute_force_covering_number_with_limit(
    space: &FiniteMetricSpace,
    epsilon: f64,
    limit: usize,
) -> Result<usize> {
    Ok(minimum_covering_with_limit(space, epsilon, limit)?.len())
}

/// An optimal ε-covering (centres of the chosen balls).
pub fn minimum_covering_with_limit(
    space: &FiniteMetricSpace,
    epsilon: f64,
    limit: usize,
) -> Result<Vec<PointId>> {
    check_epsilon_nonneg(epsilon)?;
    check_limit(space, limit)?;
    let n = space.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut balls: Vec<(u128, PointId)> = (0..n)
        .map(|c| {
            let b = (0..n).filter(|&p| space.covers(c, p, epsilon)).fold(0u128, |m, p| m | (1 << p));
            (b, c)
        })
        .collect();
    // drop duplicates and balls contained in another ball
    balls.sort_by_key(|&(b, c)| (std::cmp::Reverse(b.count_ones()), c));
    let mut kept: Vec<(u128, PointId)> = Vec::new();
    for (b, c) in balls {
        if !kept.iter().any(|&(k, _)| b & !k == 0) {
            kept.push((b, c));
        }
    }
    let centres: Vec<PointId> = kept.iter().map(|&(_, c)| c).collect();
    let chosen = SetCover::new(kept.into_iter().map(|(b, _)| b).collect(), n).solve();
    let mut cover: Vec<PointId> = chosen.into_iter().map(|i| centres[i]).collect();
    cover.sort_unstable();
    Ok(cover)
}

fn check_epsilon_nonneg(epsilon: f64) -> Result<()> {
    if epsilon >= 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("epsilon must be non-negative, got {epsilon}")))
    }
}

struct SetCover {
    balls: Vec<u128>,
    /// for each element, bitmask over ball indices containing it
    containing: Vec<u128>,
    best: Vec<usize>,
    path: Vec<usize>,
}

impl SetCover {
    fn new(balls: Vec<u128>, n: usize) -> Self {
        let containing = (0..n)
            .map(|p| {
                balls
                    .iter()
                    .enumerate()
                    .filter(|(_, &b)| b >> p & 1 == 1)
                    .fold(0u128, |m, (i, _)| m | (1 << i))
            })
            .collect();
        SetCover { balls, containing, best: Vec::new(), path: Vec::new() }
    }

    /// Indices of an optimal selection of balls.
    fn solve(mut self) -> Vec<usize> {
        let all = if self.containing.len() == 128 {
            u128::MAX
        } else {
            (1u128 << self.containing.len()) - 1
        };
        self.best = self.greedy(all);
        self.search(all);
        self.best
    }

    fn greedy(&self, mut uncovered: u128) -> Vec<usize> {
        let mut chosen = Vec::new();
        while uncovered != 0 {
            let (i, b) = self
                .balls
                .iter()
                .enumerate()
                .max_by_key(|&(i, &b)| ((b & uncovered).count_ones(), std::cmp::Reverse(i)))
                .expect("at least one ball");
            uncovered &= !b;
            chosen.push(i);
        }
        chosen
    }

    /// Elements whose containing-ball sets are pairwise disjoint each need
    /// their own ball.
    fn disjoint_lower_bound(&self, uncovered: u128) -> usize {
        let mut used = 0u128;
        let mut count = 0;
        let mut rest = uncovered;
        while rest != 0 {
            let p = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let c = self.containing[p];
            if c & used == 0 {
                used |= c;
                count += 1;
            }
        }
        count
    }

    fn search(&mut self, uncovered: u128) {
        let depth = self.path.len();
        if uncovered == 0 {
            if depth < self.best.len() {
                self.best = self.path.clone();
            }
            return;
        }
        if depth + 1 >= self.best.len() {
            return;
        }
        let left = uncovered.count_ones() as usize;
        let max_gain = self.balls.iter().map(|b| (b & uncovered).count_ones() as usize).max().unwrap_or(0);
        let volume_bound = left.div_ceil(max_gain);
        if depth + volume_bound.max(self.disjoint_lower_bound(uncovered)) >= self.best.len() {
            return;
        }
        // branch on the uncovered element with the fewest covering balls
        let mut rest = uncovered;
        let mut pick = 0usize;
        let mut fewest = u32::MAX;
        while rest != 0 {
            let p = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let cnt = self.containing[p].count_ones();
            if cnt < fewest {
                fewest = cnt;
                pick = p;
            }
        }
        let mut options: Vec<usize> = Vec::new();
        let mut mask = self.containing[pick];
        while mask != 0 {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            options.push(i);
        }
        options.sort_by_key(|&i| std::cmp::Reverse((self.balls[i] & uncovered).count_ones()));
        for i in options {
            self.path.push(i);
            self.search(uncovered & !self.balls[i]);
            self.path.pop();
        }
    }
}

/// Exact maximum ε-packing size: a maximum independent set of the graph
/// joining points at distance <= ε.
pub fn brute_force_packing_number_with_limit(
    space: &FiniteMetricSpace,
    epsilon: f64,
    limit: usize,
) -> Result<usize> {
    check_epsilon_nonneg(epsilon)?;
    check_limit(space, limit)?;
    let n = space.len();
    if n == 0 {
        return Ok(0);
    }
    let conflicts: Vec<u128> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i && space.distance(i, j) <= epsilon)
                .fold(0u128, |m, j| m | (1 << j))
        })
        .collect();
    let mut mis = IndependentSet { conflicts, best: 0 };
    let all = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    mis.search(all, 0);
    Ok(mis.best)
}

struct IndependentSet {
    conflicts: Vec<u128>,
    best: usize,
}

impl IndependentSet {
    /// Greedy clique partition of `cand`: an independent set takes at most one
    /// vertex per clique.
    fn clique_cover_bound(&self, mut cand: u128) -> usize {
        let mut cliques = 0;
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            let mut clique_cand = cand & self.conflicts[v];
            cand &= !(1u128 << v);
            while clique_cand != 0 {
                let u = clique_cand.trailing_zeros() as usize;
                clique_cand &= self.conflicts[u];
                cand &= !(1u128 << u);
            }
            cliques += 1;
        }
        cliques
    }

    fn search(&mut self, cand: u128, size: usize) {
        if cand == 0 {
            self.best = self.best.max(size);
            return;
        }
        if size + self.clique_cover_bound(cand) <= self.best {
            return;
        }
        // some maximum independent set contains v or one of its neighbours
        let mut rest = cand;
        let mut v = 0usize;
        let mut fewest = u32::MAX;
        while rest != 0 {
            let p = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let deg = (self.conflicts[p] & cand).count_ones();
            if deg < fewest {
                fewest = deg;
                v = p;
            }
        }
        let mut branch = (self.conflicts[v] & cand) | (1u128 << v);
        while branch != 0 {
            let u = branch.trailing_zeros() as usize;
            branch &= branch - 1;
            let next = cand & !self.conflicts[u] & !(1u128 << u);
            self.search(next, size + 1);
        }
    }
}

/// The volumetric bounds `(R/ε)^D <= N(B_R, ε) <= (1 + 2R/ε)^D` for a
/// Euclidean ball of radius R in D dimensions.
pub fn ball_covering_bounds(radius: f64, dim: u32, epsilon: f64) -> Result<(f64, f64)> {
    if !(radius > 0.0 && epsilon > 0.0 && dim > 0) {
        return Err(Error::invalid("ball covering bounds need positive R, D and epsilon"));
    }
    let d = dim as i32;
    Ok(((radius / epsilon).powi(d), (1.0 + 2.0 * radius / epsilon).powi(d)))
}
