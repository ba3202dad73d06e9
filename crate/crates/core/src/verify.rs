//! Numerical spot checks: multistart minimization on spheres and on the
//! weighted spheres induced by block subspaces.
//!
//! Nothing here is a proof. Minima come from projected gradient descent
//! with Armijo backtracking from many deterministic starting points, so a
//! reported minimum is an upper bound on the true one and a scan that
//! stays nonnegative is evidence, not a certificate. The one rigorous
//! direction is the counterexample path: a candidate negative point is
//! converted to exact rationals and the polynomial is re-evaluated
//! exactly before anything is reported as negative.

use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial};
use crate::reduce::{reduction_plan, Partition};
use crate::sym::{is_symmetric, PowerSumExpr};
use crate::Rat;

const MAX_ITERS: usize = 500;
const GRAD_TOL: f64 = 1e-10;
const ARMIJO_C: f64 = 1e-4;
const STEP_FLOOR: f64 = 1e-18;
const STEP_CEIL: f64 = 1e15;
const NONMONOTONE_WINDOW: usize = 8;
/// Float minima above this threshold are not even worth confirming.
pub const NEGATIVITY_TRIGGER: f64 = -1e-9;

/// The constraint set |x|^2 = radius_sq.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphereSpec {
    pub radius_sq: f64,
}

impl SphereSpec {
    pub fn new(radius_sq: f64) -> Result<Self> {
        if !radius_sq.is_finite() || radius_sq <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "sphere needs a positive squared radius, got {}",
                radius_sq
            )));
        }
        Ok(SphereSpec { radius_sq })
    }

    pub fn radius(&self) -> f64 {
        self.radius_sq.sqrt()
    }
}

/// Outcome of one multistart minimization.
#[derive(Clone, Debug)]
pub struct MinReport {
    pub value: f64,
    /// Flat row-major coordinates of the best point found.
    pub argmin: Vec<f64>,
    pub starts: usize,
    /// How many starts ended with a small Riemannian gradient.
    pub converged: usize,
    pub seed: u64,
}

impl MinReport {
    /// Fraction of starts that reached the gradient tolerance.
    pub fn converged_fraction(&self) -> f64 {
        if self.starts == 0 {
            0.0
        } else {
            self.converged as f64 / self.starts as f64
        }
    }
}

/// Anything the projected gradient descent can minimize.
pub trait Objective: Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    /// Value and full gradient in one pass; `grad` is overwritten.
    fn value_grad(&self, x: &[f64], grad: &mut [f64]) -> f64;
}

/// A polynomial flattened into a shape the hot loop likes.
pub struct Evaluator {
    dim: usize,
    terms: Vec<(f64, Vec<(usize, u32)>)>,
    max_factors: usize,
}

impl Evaluator {
    pub fn new(f: &Polynomial<f64>) -> Self {
        let dim = f.shape().vars();
        let mut terms = Vec::with_capacity(f.num_terms());
        let mut max_factors = 0;
        for (mono, &c) in f.terms() {
            let factors: Vec<(usize, u32)> =
                mono.factors().iter().map(|&(v, e)| (v as usize, e)).collect();
            max_factors = max_factors.max(factors.len());
            terms.push((c, factors));
        }
        Evaluator { dim, terms, max_factors }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        let mut total = 0.0;
        for (c, factors) in &self.terms {
            let mut t = *c;
            for &(v, e) in factors {
                t *= x[v].powi(e as i32);
            }
            total += t;
        }
        total
    }

    /// Value and full gradient in one pass; `grad` is overwritten.
    pub fn value_grad(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(grad.len(), self.dim);
        grad.fill(0.0);
        let mut pows = vec![0.0f64; self.max_factors];
        let mut sufs = vec![0.0f64; self.max_factors];
        let mut total = 0.0;
        for (c, factors) in &self.terms {
            let m = factors.len();
            if m == 0 {
                total += c;
                continue;
            }
            for (slot, &(v, e)) in factors.iter().enumerate() {
                pows[slot] = x[v].powi(e as i32);
            }
            // suffix products of the factor powers, then a running prefix,
            // so a zero coordinate never forces a division
            let mut acc = 1.0;
            for i in (0..m).rev() {
                sufs[i] = acc;
                acc *= pows[i];
            }
            total += c * acc;
            let mut pre = 1.0;
            for (slot, &(v, e)) in factors.iter().enumerate() {
                let down = x[v].powi(e as i32 - 1);
                grad[v] += c * (e as f64) * down * pre * sufs[slot];
                pre *= pows[slot];
            }
        }
        total
    }
}

impl Objective for Evaluator {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> f64 {
        Evaluator::value(self, x)
    }

    fn value_grad(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        Evaluator::value_grad(self, x, grad)
    }
}

/// A partition instance of a power-sum expression, pre-scaled so the
/// induced weighted sphere becomes the round sphere, and evaluated
/// through the power sums themselves. For an expression with A distinct
/// power sums on an (ell, k) instance, one evaluation costs O(A ell k)
/// plus the handful of products — independent of the expanded term
/// count, which for large instances is orders of magnitude bigger.
pub struct ReducedPsObjective {
    ell: usize,
    k: usize,
    /// exponent tuples of the distinct power sums
    alphas: Vec<Vec<u32>>,
    /// per power sum, per row: lambda_c^(1 - |alpha|/2), the block weight
    /// with the sphere substitution u = sqrt(lambda) y folded in
    row_coeff: Vec<Vec<f64>>,
    /// coefficient and (power-sum index, exponent) factors per term
    terms: Vec<(f64, Vec<(usize, u32)>)>,
    /// maps the round-sphere argmin back to instance coordinates
    inv_sqrt: Vec<f64>,
}

impl ReducedPsObjective {
    pub fn new(expr: &PowerSumExpr, lam: &Partition) -> Result<Self> {
        let k = expr.k() as usize;
        if k == 0 {
            return Err(Error::InvalidInput("expression has no columns".into()));
        }
        let ell = lam.ell() as usize;
        let mut alphas: Vec<Vec<u32>> = Vec::new();
        let mut terms = Vec::new();
        for (key, coeff) in expr.terms() {
            let mut factors = Vec::with_capacity(key.len());
            for (alpha, e) in key {
                let idx = match alphas.iter().position(|a| a == &alpha.0) {
                    Some(i) => i,
                    None => {
                        alphas.push(alpha.0.clone());
                        alphas.len() - 1
                    }
                };
                factors.push((idx, *e));
            }
            let c = coeff.to_f64().ok_or_else(|| {
                Error::InvalidInput("coefficient does not fit in a float".into())
            })?;
            terms.push((c, factors));
        }
        let inv_sqrt: Vec<f64> =
            lam.parts().iter().map(|&w| 1.0 / (w as f64).sqrt()).collect();
        let row_coeff: Vec<Vec<f64>> = alphas
            .iter()
            .map(|a| {
                let deg: u32 = a.iter().sum();
                lam.parts()
                    .iter()
                    .map(|&w| (w as f64).powf(1.0 - deg as f64 / 2.0))
                    .collect()
            })
            .collect();
        Ok(ReducedPsObjective { ell, k, alphas, row_coeff, terms, inv_sqrt })
    }

    /// The power-sum values at a round-sphere point.
    fn power_values(&self, u: &[f64]) -> Vec<f64> {
        self.alphas
            .iter()
            .enumerate()
            .map(|(ai, alpha)| {
                let mut total = 0.0;
                for c in 0..self.ell {
                    let mut m = self.row_coeff[ai][c];
                    for (j, &aj) in alpha.iter().enumerate() {
                        if aj > 0 {
                            m *= u[c * self.k + j].powi(aj as i32);
                        }
                    }
                    total += m;
                }
                total
            })
            .collect()
    }

    /// Converts a round-sphere point back to instance coordinates (the
    /// point on the weighted sphere the value belongs to).
    pub fn to_instance_point(&self, u: &[f64]) -> Vec<f64> {
        u.iter()
            .enumerate()
            .map(|(flat, &v)| v * self.inv_sqrt[flat / self.k])
            .collect()
    }
}

impl Objective for ReducedPsObjective {
    fn dim(&self) -> usize {
        self.ell * self.k
    }

    fn value(&self, u: &[f64]) -> f64 {
        let p = self.power_values(u);
        let mut total = 0.0;
        for (c, factors) in &self.terms {
            let mut t = *c;
            for &(a, e) in factors {
                t *= p[a].powi(e as i32);
            }
            total += t;
        }
        total
    }

    fn value_grad(&self, u: &[f64], grad: &mut [f64]) -> f64 {
        grad.fill(0.0);
        let p = self.power_values(u);
        // sensitivity of the objective to each power-sum value
        let mut gamma = vec![0.0f64; self.alphas.len()];
        let mut pows = vec![0.0f64; 8];
        let mut sufs = vec![0.0f64; 8];
        let mut total = 0.0;
        for (c, factors) in &self.terms {
            let m = factors.len();
            if m == 0 {
                total += c;
                continue;
            }
            if pows.len() < m {
                pows.resize(m, 0.0);
                sufs.resize(m, 0.0);
            }
            for (slot, &(a, e)) in factors.iter().enumerate() {
                pows[slot] = p[a].powi(e as i32);
            }
            let mut acc = 1.0;
            for i in (0..m).rev() {
                sufs[i] = acc;
                acc *= pows[i];
            }
            total += c * acc;
            let mut pre = 1.0;
            for (slot, &(a, e)) in factors.iter().enumerate() {
                let down = p[a].powi(e as i32 - 1);
                gamma[a] += c * (e as f64) * down * pre * sufs[slot];
                pre *= pows[slot];
            }
        }
        // push the sensitivities through the power sums row by row
        let mut col_pows = vec![0.0f64; self.k];
        let mut col_sufs = vec![0.0f64; self.k];
        for (ai, alpha) in self.alphas.iter().enumerate() {
            let g = gamma[ai];
            if g == 0.0 {
                continue;
            }
            for c in 0..self.ell {
                let base = c * self.k;
                for (j, &aj) in alpha.iter().enumerate() {
                    col_pows[j] = u[base + j].powi(aj as i32);
                }
                let mut acc = 1.0;
                for j in (0..self.k).rev() {
                    col_sufs[j] = acc;
                    acc *= col_pows[j];
                }
                let rho = g * self.row_coeff[ai][c];
                let mut pre = 1.0;
                for (j, &aj) in alpha.iter().enumerate() {
                    if aj > 0 {
                        let down = u[base + j].powi(aj as i32 - 1);
                        grad[base + j] += rho * (aj as f64) * down * pre * col_sufs[j];
                    }
                    pre *= col_pows[j];
                }
            }
        }
        total
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// One standard Gaussian via the Box-Muller transform.
fn gaussian(rng: &mut impl RngCore) -> f64 {
    loop {
        let u1: f64 = rng.gen();
        if u1 <= f64::MIN_POSITIVE {
            continue;
        }
        let u2: f64 = rng.gen();
        return (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
    }
}

/// A uniform point on the sphere of the given radius.
fn sample_sphere(rng: &mut impl RngCore, dim: usize, radius: f64) -> Vec<f64> {
    loop {
        let x: Vec<f64> = (0..dim).map(|_| gaussian(rng)).collect();
        let norm = dot(&x, &x).sqrt();
        if norm > 1e-12 {
            return x.iter().map(|v| v * radius / norm).collect();
        }
    }
}

fn retract(x: &[f64], radius: f64) -> Vec<f64> {
    let norm = dot(x, x).sqrt();
    if norm <= 1e-300 {
        // fell into the origin; push out along the first axis
        let mut out = vec![0.0; x.len()];
        out[0] = radius;
        return out;
    }
    x.iter().map(|v| v * radius / norm).collect()
}

/// Projected gradient descent from one start, with Barzilai-Borwein step
/// sizes and a nonmonotone backtracking acceptance so that narrow curved
/// valleys do not stall it. Returns the best value seen, its point, and
/// whether the tangential gradient got small relative to the value scale.
fn descend<O: Objective>(obj: &O, radius: f64, start: Vec<f64>) -> (f64, Vec<f64>, bool) {
    let dim = start.len();
    let mut x = start;
    let mut grad = vec![0.0; dim];
    let mut fx = obj.value_grad(&x, &mut grad);
    let mut best_f = fx;
    let mut best_x = x.clone();
    let mut recent = [fx; NONMONOTONE_WINDOW];
    let mut slot = 0usize;
    let mut prev: Option<(Vec<f64>, Vec<f64>)> = None;
    for _ in 0..MAX_ITERS {
        let xx = dot(&x, &x);
        let xg = dot(&x, &grad);
        let scale = xg / xx;
        let rg: Vec<f64> = grad.iter().zip(&x).map(|(g, xi)| g - scale * xi).collect();
        let rg_sq = dot(&rg, &rg);
        if rg_sq.sqrt() <= GRAD_TOL * (1.0 + fx.abs()) {
            return (fx.min(best_f), if fx <= best_f { x } else { best_x }, true);
        }
        // spectral step from the last accepted move, else a radius-sized one
        let fallback = (0.1 * radius / rg_sq.sqrt()).clamp(STEP_FLOOR, 1.0);
        let mut t = match &prev {
            Some((px, prg)) => {
                let mut ss = 0.0;
                let mut sy = 0.0;
                for i in 0..dim {
                    let s = x[i] - px[i];
                    let y = rg[i] - prg[i];
                    ss += s * s;
                    sy += s * y;
                }
                if sy > 0.0 && ss > 0.0 {
                    (ss / sy).clamp(STEP_FLOOR, STEP_CEIL)
                } else {
                    fallback
                }
            }
            None => fallback,
        };
        let fmax = recent.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut moved = false;
        while t >= STEP_FLOOR {
            let trial: Vec<f64> = x.iter().zip(&rg).map(|(xi, g)| xi - t * g).collect();
            let cand = retract(&trial, radius);
            let fc = obj.value(&cand);
            if fc <= fmax - ARMIJO_C * t * rg_sq {
                prev = Some((std::mem::replace(&mut x, cand), rg));
                fx = obj.value_grad(&x, &mut grad);
                slot = (slot + 1) % NONMONOTONE_WINDOW;
                recent[slot] = fx;
                if fx < best_f {
                    best_f = fx;
                    best_x = x.clone();
                }
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if !moved {
            // no descent direction at any representable step length
            return (fx.min(best_f), if fx <= best_f { x } else { best_x }, true);
        }
    }
    (best_f, best_x, false)
}

fn value_order(a: f64, b: f64) -> std::cmp::Ordering {
    match a.partial_cmp(&b) {
        Some(o) => o,
        None => match (a.is_nan(), b.is_nan()) {
            (true, true) => std::cmp::Ordering::Equal,
            (true, false) => std::cmp::Ordering::Greater,
            (false, true) => std::cmp::Ordering::Less,
            (false, false) => unreachable!(),
        },
    }
}

/// Multistart minimization of an objective over |x|^2 = radius_sq.
/// Deterministic for a fixed seed: start i draws from stream i of a
/// counter RNG, and ties between starts go to the lower index.
pub fn minimize_objective<O: Objective>(
    obj: &O,
    sphere: &SphereSpec,
    starts: usize,
    seed: u64,
) -> Result<MinReport> {
    if starts == 0 {
        return Err(Error::InvalidInput("need at least one start".into()));
    }
    let radius = sphere.radius();
    let dim = obj.dim();
    let runs: Vec<(usize, f64, Vec<f64>, bool)> = (0..starts)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let x0 = sample_sphere(&mut rng, dim, radius);
            let (val, x, ok) = descend(obj, radius, x0);
            (i, val, x, ok)
        })
        .collect();
    let converged = runs.iter().filter(|r| r.3).count();
    let best = runs
        .into_iter()
        .min_by(|a, b| value_order(a.1, b.1).then(a.0.cmp(&b.0)))
        .expect("at least one start");
    Ok(MinReport { value: best.1, argmin: best.2, starts, converged, seed })
}

/// [`minimize_objective`] for a polynomial over |x|^2 = radius_sq.
pub fn min_on_sphere(
    f: &Polynomial<f64>,
    sphere: &SphereSpec,
    starts: usize,
    seed: u64,
) -> Result<MinReport> {
    minimize_objective(&Evaluator::new(f), sphere, starts, seed)
}

/// Minimizes one partition instance of a power-sum expression over its
/// induced weighted sphere, evaluating through the power sums instead of
/// the expanded instance polynomial. The report's argmin is in instance
/// coordinates (on the weighted sphere).
pub fn min_reduced_instance_ps(
    expr: &PowerSumExpr,
    lam: &Partition,
    sphere: &SphereSpec,
    starts: usize,
    seed: u64,
) -> Result<MinReport> {
    let obj = ReducedPsObjective::new(expr, lam)?;
    let mut report = minimize_objective(&obj, sphere, starts, seed)?;
    report.argmin = obj.to_instance_point(&report.argmin);
    Ok(report)
}

/// Multiplies the variables of each row by a fixed factor, as a
/// substitution on the polynomial: row i's coefficient contribution is
/// factors[i-1]^(its exponent in the monomial).
pub fn scale_rows(q: &Polynomial<f64>, factors: &[f64]) -> Result<Polynomial<f64>> {
    let shape = q.shape();
    if factors.len() != shape.rows as usize {
        return Err(Error::ArityMismatch { expected: shape.rows as usize, got: factors.len() });
    }
    let mut out = Polynomial::zero(shape);
    for (mono, &c) in q.terms() {
        let mut scale = 1.0;
        for &(v, e) in mono.factors() {
            let (row, _) = shape.unflat(v);
            scale *= factors[(row - 1) as usize].powi(e as i32);
        }
        out.add_term(mono.clone(), c * scale);
    }
    Ok(out)
}

/// Minimizes `q` over the weighted sphere sum_c w_c |y_c|^2 = radius_sq,
/// by substituting u = sqrt(w) y and minimizing on the plain sphere.
/// The report's argmin is in the original y coordinates.
pub fn min_on_weighted_sphere(
    q: &Polynomial<f64>,
    row_weights: &[u32],
    sphere: &SphereSpec,
    starts: usize,
    seed: u64,
) -> Result<MinReport> {
    let shape = q.shape();
    if row_weights.len() != shape.rows as usize {
        return Err(Error::ArityMismatch { expected: shape.rows as usize, got: row_weights.len() });
    }
    if row_weights.iter().any(|&w| w == 0) {
        return Err(Error::InvalidInput("row weights must be positive".into()));
    }
    let inv_sqrt: Vec<f64> = row_weights.iter().map(|&w| 1.0 / (w as f64).sqrt()).collect();
    let scaled = scale_rows(q, &inv_sqrt)?;
    let mut report = min_on_sphere(&scaled, sphere, starts, seed)?;
    for (flat, u) in report.argmin.iter_mut().enumerate() {
        let (row, _) = shape.unflat(flat as u32);
        *u *= inv_sqrt[(row - 1) as usize];
    }
    Ok(report)
}

/// Best point found across the block subspaces of one reduction sweep.
#[derive(Clone, Debug)]
pub struct ReducedMin {
    pub lam: Partition,
    pub value: f64,
    /// Coordinates on the reduced (ell, k) array.
    pub argmin: Vec<f64>,
    /// The same point expanded back to the full (n, k) array.
    pub argmin_expanded: Vec<f64>,
}

/// Everything a reduction sweep produced.
#[derive(Clone, Debug)]
pub struct ReducedReport {
    pub best: ReducedMin,
    pub per_instance: Vec<(Partition, f64)>,
    pub starts: usize,
    pub seed: u64,
}

/// Repeats each reduced row by its block size, mapping a point on the
/// (ell, cols) array to the full (n, cols) array.
pub fn expand_point(lam: &Partition, cols: u32, y: &[f64]) -> Vec<f64> {
    let ell = lam.ell();
    debug_assert_eq!(y.len(), (ell * cols) as usize);
    let mut out = Vec::with_capacity((lam.n() * cols) as usize);
    for (c, &size) in lam.parts().iter().enumerate() {
        let row = &y[c * cols as usize..(c + 1) * cols as usize];
        for _ in 0..size {
            out.extend_from_slice(row);
        }
    }
    out
}

/// Minimizes a row-symmetric `f` over |x|^2 = radius_sq restricted to
/// points with at most m distinct rows: every partition instance is
/// minimized over its induced weighted sphere and the best point wins.
pub fn min_on_reduced(
    f: &Polynomial<f64>,
    m: u32,
    sphere: &SphereSpec,
    starts: usize,
    seed: u64,
) -> Result<ReducedReport> {
    if !is_symmetric(f) {
        return Err(Error::NotSymmetric);
    }
    let cols = f.shape().cols;
    let mut best: Option<ReducedMin> = None;
    let mut per_instance = Vec::new();
    for inst in reduction_plan(f, m)? {
        let rep = min_on_weighted_sphere(&inst.q, inst.lam.parts(), sphere, starts, seed)?;
        per_instance.push((inst.lam.clone(), rep.value));
        let take = match &best {
            None => true,
            Some(b) => rep.value < b.value,
        };
        if take {
            let argmin_expanded = expand_point(&inst.lam, cols, &rep.argmin);
            best = Some(ReducedMin {
                lam: inst.lam,
                value: rep.value,
                argmin: rep.argmin,
                argmin_expanded,
            });
        }
    }
    let best = best.ok_or_else(|| Error::InvalidInput("no instances to minimize".into()))?;
    Ok(ReducedReport { best, per_instance, starts, seed })
}

/// One radius of a full-sphere versus reduced-sweep comparison.
#[derive(Clone, Debug)]
pub struct ConsistencyRow {
    pub radius_sq: f64,
    pub full_min: f64,
    pub reduced_min: f64,
    pub gap: f64,
    pub agree: bool,
}

/// Relative agreement threshold used by the consistency experiment.
pub const CONSISTENCY_TOL: f64 = 1e-5;

/// Minimizes `f` on each sphere both directly and through the reduction,
/// and records whether the two minima agree to within
/// tol * (1 + |full minimum|).
pub fn kappa_consistency_experiment(
    f: &Polynomial<f64>,
    m: u32,
    radii_sq: &[f64],
    starts: usize,
    seed: u64,
    tol: f64,
) -> Result<Vec<ConsistencyRow>> {
    if radii_sq.is_empty() {
        return Err(Error::InvalidInput("need at least one radius".into()));
    }
    let mut rows = Vec::with_capacity(radii_sq.len());
    for &r in radii_sq {
        let sphere = SphereSpec::new(r)?;
        let full = min_on_sphere(f, &sphere, starts, seed)?;
        let reduced = min_on_reduced(f, m, &sphere, starts, seed)?;
        let gap = reduced.best.value - full.value;
        let agree = gap.abs() <= tol * (1.0 + full.value.abs());
        rows.push(ConsistencyRow {
            radius_sq: r,
            full_min: full.value,
            reduced_min: reduced.best.value,
            gap,
            agree,
        });
    }
    Ok(rows)
}

/// What a nonnegativity scan concluded.
#[derive(Clone, Debug)]
pub enum NonnegOutcome {
    /// No exactly-negative point was found; the float minimum seen is
    /// reported as evidence.
    NoCounterexample { instances_scanned: usize, min_seen: f64 },
    /// A point, exactly represented, where the polynomial is exactly
    /// negative. The partition tells which block subspace produced it and
    /// the point is on the full array.
    CounterexampleAt { lam: Partition, point: Vec<Rat>, value: Rat },
}

/// Scans the given spheres (and the origin) for negative values of a
/// row-symmetric polynomial, restricted to at most m distinct rows.
/// Candidates below [`NEGATIVITY_TRIGGER`] are re-evaluated in exact
/// arithmetic at the exact rational point equal to the float argmin, and
/// only exact negatives are reported.
pub fn nonneg_check(
    f: &Polynomial<Rat>,
    m: u32,
    radii_sq: &[f64],
    starts: usize,
    seed: u64,
) -> Result<NonnegOutcome> {
    if !is_symmetric(f) {
        return Err(Error::NotSymmetric);
    }
    let shape = f.shape();
    // the origin is exact already: the constant term decides it
    if let Some(c0) = f.coeff(&Monomial::one()) {
        if c0.is_negative() {
            let lam = Partition::new(vec![shape.rows])?;
            return Ok(NonnegOutcome::CounterexampleAt {
                lam,
                point: vec![Rat::zero(); shape.vars()],
                value: c0.clone(),
            });
        }
    }
    let ff = f.to_float();
    let mut scanned = 0usize;
    let mut min_seen = f64::INFINITY;
    for &r in radii_sq {
        let sphere = SphereSpec::new(r)?;
        let report = min_on_reduced(&ff, m, &sphere, starts, seed)?;
        scanned += report.per_instance.len();
        if report.best.value < min_seen {
            min_seen = report.best.value;
        }
        if report.best.value < NEGATIVITY_TRIGGER {
            let point: Vec<Rat> = report
                .best
                .argmin_expanded
                .iter()
                .map(|&v| Rat::from_float(v).ok_or_else(|| {
                    Error::InvalidInput(format!("non-finite coordinate {}", v))
                }))
                .collect::<Result<_>>()?;
            let value = f.evaluate(&point)?;
            if value.is_negative() {
                return Ok(NonnegOutcome::CounterexampleAt { lam: report.best.lam, point, value });
            }
        }
    }
    Ok(NonnegOutcome::NoCounterexample { instances_scanned: scanned, min_seen })
}

/// Sensible multistart width for a problem with this many variables.
pub fn default_starts(dim: usize) -> usize {
    if dim <= 12 {
        64
    } else {
        256
    }
}
