//! Supermodular maximization through an evaluation oracle.
//!
//! Small ground sets are searched exhaustively. Larger ones go through the
//! Fujishige–Wolfe minimum-norm-point algorithm applied to the negated
//! (submodular) function. The Wolfe iterations run in `f64`; every
//! candidate set is re-evaluated exactly, and an integer duality gap below
//! one certifies optimality.

use fixedbitset::FixedBitSet;
use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("oracle evaluation failed: {0}")]
pub struct OracleError(pub String);

/// Integer-valued set function over the ground set `0..ground_size()`.
pub trait SetFunction {
    fn ground_size(&self) -> usize;
    fn evaluate(&mut self, subset: &FixedBitSet) -> Result<i64, OracleError>;
}

/// Adapts a closure into a [`SetFunction`].
pub struct FnOracle<F> {
    size: usize,
    eval: F,
}

impl<F> FnOracle<F>
where
    F: FnMut(&FixedBitSet) -> i64,
{
    pub fn new(size: usize, eval: F) -> Self {
        FnOracle { size, eval }
    }
}

impl<F> SetFunction for FnOracle<F>
where
    F: FnMut(&FixedBitSet) -> i64,
{
    fn ground_size(&self) -> usize {
        self.size
    }

    fn evaluate(&mut self, subset: &FixedBitSet) -> Result<i64, OracleError> {
        Ok((self.eval)(subset))
    }
}

/// Negation, turning a supermodular function into a submodular one.
struct Negated<'a, S: ?Sized>(&'a mut S);

impl<S: SetFunction + ?Sized> SetFunction for Negated<'_, S> {
    fn ground_size(&self) -> usize {
        self.0.ground_size()
    }

    fn evaluate(&mut self, subset: &FixedBitSet) -> Result<i64, OracleError> {
        self.0.evaluate(subset).map(|v| -v)
    }
}

/// Counts oracle calls.
struct Counted<'a, S: ?Sized> {
    inner: &'a mut S,
    calls: u64,
}

impl<S: SetFunction + ?Sized> Counted<'_, S> {
    fn eval(&mut self, subset: &FixedBitSet) -> Result<i64, OracleError> {
        self.calls += 1;
        self.inner.evaluate(subset)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Exhaustive,
    MinNormPoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodChoice {
    Auto,
    Force(Method),
}

#[derive(Clone, Debug)]
pub struct MaximizerConfig {
    pub method: MethodChoice,
    /// Ground sets up to this size are enumerated under `Auto`.
    pub exhaustive_limit: usize,
    pub tol: f64,
    pub max_iterations: usize,
    /// Largest ground set the exhaustive fallback may enumerate after a
    /// min-norm-point failure.
    pub fallback_cap: usize,
}

impl Default for MaximizerConfig {
    fn default() -> Self {
        MaximizerConfig {
            method: MethodChoice::Auto,
            exhaustive_limit: 20,
            tol: 1e-9,
            max_iterations: 10_000,
            fallback_cap: 24,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximizerResult {
    pub argmax: FixedBitSet,
    pub value: i64,
    pub evaluations: u64,
    pub method: Method,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OptimizeError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(
        "minimum-norm-point did not converge after {iterations} iterations on {ground} elements"
    )]
    NoConvergence { iterations: usize, ground: usize },
    #[error("ground set of {size} elements exceeds the exhaustive cap of {cap}")]
    TooLarge { size: usize, cap: usize },
}

fn mask_to_set(k: usize, mask: u64) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(k);
    for i in 0..k {
        if mask >> i & 1 == 1 {
            s.insert(i);
        }
    }
    s
}

/// Enumerates all subsets; on ties keeps the subset whose index mask is
/// numerically smallest.
pub fn maximize_exhaustive<S: SetFunction + ?Sized>(
    f: &mut S,
    cap: usize,
) -> Result<MaximizerResult, OptimizeError> {
    let k = f.ground_size();
    if k > cap || k >= 64 {
        return Err(OptimizeError::TooLarge { size: k, cap });
    }
    let mut best: Option<(i64, u64)> = None;
    let mut evaluations = 0;
    for mask in 0..(1u64 << k) {
        let value = f.evaluate(&mask_to_set(k, mask))?;
        evaluations += 1;
        if best.is_none_or(|(b, _)| value > b) {
            best = Some((value, mask));
        }
    }
    let (value, mask) = best.expect("at least the empty set");
    Ok(MaximizerResult {
        argmax: mask_to_set(k, mask),
        value,
        evaluations,
        method: Method::Exhaustive,
    })
}

/// Maximizes a supermodular `f`. Exact for the exhaustive route; exact for
/// the min-norm-point route whenever `f` is supermodular and integer-valued.
pub fn maximize_supermodular<S: SetFunction + ?Sized>(
    f: &mut S,
    cfg: &MaximizerConfig,
) -> Result<MaximizerResult, OptimizeError> {
    let k = f.ground_size();
    let method = match cfg.method {
        MethodChoice::Force(m) => m,
        MethodChoice::Auto if k <= cfg.exhaustive_limit => Method::Exhaustive,
        MethodChoice::Auto => Method::MinNormPoint,
    };
    match method {
        Method::Exhaustive => maximize_exhaustive(f, cfg.exhaustive_limit.max(cfg.fallback_cap)),
        Method::MinNormPoint => {
            let mut neg = Negated(f);
            let r = minimize_submodular_mnp(&mut neg, cfg)?;
            Ok(MaximizerResult {
                argmax: r.minimizer,
                value: -r.value,
                evaluations: r.evaluations,
                method: r.method,
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MnpResult {
    pub minimizer: FixedBitSet,
    pub value: i64,
    pub evaluations: u64,
    pub iterations: usize,
    /// Certified by an integer duality gap below one.
    pub certified: bool,
    /// `Exhaustive` when the fallback produced the answer.
    pub method: Method,
}

/// Tracks the best exactly-evaluated candidate.
struct Incumbent {
    set: FixedBitSet,
    value: i64,
}

impl Incumbent {
    fn offer(&mut self, set: &FixedBitSet, value: i64) {
        if value < self.value {
            self.value = value;
            self.set = set.clone();
        }
    }
}

/// Greedy vertex of the base polytope of `h - h(∅)` for the order that sorts
/// `x` ascending (ties by index). Every prefix of that order is a level set
/// of `x`; each is evaluated exactly and offered to `best`.
fn greedy_vertex<S: SetFunction + ?Sized>(
    h: &mut Counted<'_, S>,
    x: &[f64],
    h_empty: i64,
    best: &mut Incumbent,
) -> Result<Vec<f64>, OracleError> {
    let k = x.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]).then(a.cmp(&b)));
    let mut q = vec![0.0; k];
    let mut prefix = FixedBitSet::with_capacity(k);
    let mut prev = h_empty;
    for &e in &order {
        prefix.insert(e);
        let value = h.eval(&prefix)?;
        best.offer(&prefix, value);
        q[e] = (value - prev) as f64;
        prev = value;
    }
    Ok(q)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Coefficients of the minimum-norm point of the affine hull of `points`.
fn affine_minimizer(points: &[Vec<f64>]) -> Vec<f64> {
    let m = points.len();
    if m == 1 {
        return vec![1.0];
    }
    let mut a = DMatrix::<f64>::zeros(m + 1, m + 1);
    for i in 0..m {
        for j in i..m {
            let g = dot(&points[i], &points[j]);
            a[(i, j)] = g;
            a[(j, i)] = g;
        }
        a[(i, m)] = 1.0;
        a[(m, i)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(m + 1);
    rhs[m] = 1.0;
    let solved = a
        .clone()
        .lu()
        .solve(&rhs)
        .filter(|s| s.iter().all(|v| v.is_finite()));
    let sol = match solved {
        Some(s) => s,
        None => a
            .svd(true, true)
            .solve(&rhs, 1e-12)
            .expect("SVD solve with both factors"),
    };
    sol.iter().take(m).copied().collect()
}

fn combine(points: &[Vec<f64>], lambda: &[f64]) -> Vec<f64> {
    let k = points[0].len();
    let mut x = vec![0.0; k];
    for (p, &l) in points.iter().zip(lambda) {
        for (xi, pi) in x.iter_mut().zip(p) {
            *xi += l * pi;
        }
    }
    x
}

/// Minimizes a submodular, integer-valued `h` with Wolfe's minimum-norm-point
/// iteration over the base polytope of `h - h(∅)`.
///
/// Each major step calls the greedy linear oracle at the current point; the
/// minor loop projects onto the affine hull of the active vertices and
/// backs off along the segment when a coefficient turns nonpositive. All
/// level sets visited by the greedy oracle are evaluated exactly and the
/// best one is returned. `x⁻(V) = Σ min(xᵢ, 0)` lower-bounds `min h`, so a
/// gap below one proves optimality for integer `h`.
pub fn minimize_submodular_mnp<S: SetFunction + ?Sized>(
    h: &mut S,
    cfg: &MaximizerConfig,
) -> Result<MnpResult, OptimizeError> {
    let k = h.ground_size();
    let mut h = Counted { inner: h, calls: 0 };
    let empty = FixedBitSet::with_capacity(k);
    let h_empty = h.eval(&empty)?;
    let mut best = Incumbent {
        set: empty,
        value: h_empty,
    };
    let finish = |best: Incumbent, calls, iterations, certified| MnpResult {
        minimizer: best.set,
        value: best.value,
        evaluations: calls,
        iterations,
        certified,
        method: Method::MinNormPoint,
    };
    if k == 0 {
        return Ok(finish(best, h.calls, 0, true));
    }

    let certified = |best: &Incumbent, x: &[f64]| {
        let lower: f64 = x.iter().map(|&v| v.min(0.0)).sum();
        ((best.value - h_empty) as f64) - lower < 1.0 - 1e-7
    };

    let start = vec![0.0; k];
    let mut points = vec![greedy_vertex(&mut h, &start, h_empty, &mut best)?];
    let mut lambda = vec![1.0];
    let mut x = points[0].clone();
    let scale = 1.0 + x.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let eps = cfg.tol * scale * scale;
    let weight_eps = 1e-12;

    let mut iterations = 0;
    while iterations < cfg.max_iterations {
        iterations += 1;
        if certified(&best, &x) {
            return Ok(finish(best, h.calls, iterations, true));
        }
        let q = greedy_vertex(&mut h, &x, h_empty, &mut best)?;
        let xx = dot(&x, &x);
        if xx - dot(&x, &q) <= eps || points.iter().any(|p| p == &q) {
            break;
        }
        points.push(q);
        lambda.push(0.0);
        loop {
            let alpha = affine_minimizer(&points);
            if alpha.iter().all(|&a| a > weight_eps) {
                lambda = alpha;
                break;
            }
            let theta = lambda
                .iter()
                .zip(&alpha)
                .filter(|(_, &a)| a <= weight_eps)
                .map(|(&l, &a)| if l - a > 0.0 { l / (l - a) } else { 0.0 })
                .fold(1.0f64, f64::min)
                .clamp(0.0, 1.0);
            for (l, a) in lambda.iter_mut().zip(&alpha) {
                *l = theta * a + (1.0 - theta) * *l;
            }
            let keep: Vec<bool> = lambda.iter().map(|&l| l > weight_eps).collect();
            if keep.iter().all(|&b| b) {
                // Numerical corner: drop the smallest coefficient.
                let (i, _) = lambda
                    .iter()
                    .enumerate()
                    .min_by(|a, b| a.1.total_cmp(b.1))
                    .expect("nonempty");
                points.remove(i);
                lambda.remove(i);
            } else {
                let mut i = 0;
                points.retain(|_| {
                    i += 1;
                    keep[i - 1]
                });
                let mut i = 0;
                lambda.retain(|_| {
                    i += 1;
                    keep[i - 1]
                });
            }
            let total: f64 = lambda.iter().sum();
            for l in &mut lambda {
                *l /= total;
            }
        }
        x = combine(&points, &lambda);
    }

    // Final level-set sweep at the last point.
    greedy_vertex(&mut h, &x, h_empty, &mut best)?;
    if certified(&best, &x) {
        return Ok(finish(best, h.calls, iterations, true));
    }
    if k <= cfg.fallback_cap && k < 64 {
        let calls = h.calls;
        let mut neg = Negated(h.inner);
        let r = maximize_exhaustive(&mut neg, cfg.fallback_cap)?;
        return Ok(MnpResult {
            minimizer: r.argmax,
            value: -r.value,
            evaluations: calls + r.evaluations,
            iterations,
            certified: true,
            method: Method::Exhaustive,
        });
    }
    Err(OptimizeError::NoConvergence {
        iterations,
        ground: k,
    })
}

/// A pair witnessing `f(X ∪ Y) + f(X ∩ Y) < f(X) + f(Y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupermodularityViolation {
    pub x: FixedBitSet,
    pub y: FixedBitSet,
    pub union_plus_intersection: i64,
    pub x_plus_y: i64,
}

/// Default size limit for pairwise supermodularity checks.
pub const CHECK_LIMIT: usize = 12;

/// Tests the supermodular inequality over all pairs of subsets.
pub fn check_supermodular<S: SetFunction + ?Sized>(
    f: &mut S,
    limit: usize,
) -> Result<Option<SupermodularityViolation>, OptimizeError> {
    let k = f.ground_size();
    if k > limit || k >= 32 {
        return Err(OptimizeError::TooLarge {
            size: k,
            cap: limit,
        });
    }
    let total = 1usize << k;
    let values = (0..total)
        .map(|mask| f.evaluate(&mask_to_set(k, mask as u64)))
        .collect::<Result<Vec<_>, _>>()?;
    for a in 0..total {
        for b in a + 1..total {
            let lhs = values[a | b] + values[a & b];
            let rhs = values[a] + values[b];
            if lhs < rhs {
                return Ok(Some(SupermodularityViolation {
                    x: mask_to_set(k, a as u64),
                    y: mask_to_set(k, b as u64),
                    union_plus_intersection: lhs,
                    x_plus_y: rhs,
                }));
            }
        }
    }
    Ok(None)
}
