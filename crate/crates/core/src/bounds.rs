//! Upper bounds on the number of distinct rows a sphere minimizer needs.
//!
//! For a row-permutation-invariant polynomial f on an n-by-k array, let
//! kappa(f) be the least m such that, on every centered sphere, f attains
//! its minimum at a point with at most m distinct rows; kappa(f) <= n
//! always. The bounds here come from the geometry of the column-collapsed
//! support of f ([`Profile`]): weighted degrees give products of floors,
//! and any axis simplex enclosing the support gives the product of its
//! intercept floors. Every bound is returned as a [`KappaBound`] carrying
//! the arithmetic witness behind the number.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::{Degree, Polynomial};
use crate::scalar::Coeff;
use crate::sym::is_symmetric;
use crate::Rat;

/// Positive integer column weights.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weights(Vec<u32>);

impl Weights {
    pub fn new(w: Vec<u32>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::InvalidInput("weight vector must be nonempty".into()));
        }
        if w.iter().any(|&x| x == 0) {
            return Err(Error::InvalidInput("weights must be positive".into()));
        }
        Ok(Weights(w))
    }

    pub fn ones(k: u32) -> Self {
        Weights(vec![1; k as usize])
    }

    pub fn k(&self) -> u32 {
        self.0.len() as u32
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn max(&self) -> u32 {
        *self.0.iter().max().expect("nonempty")
    }

    pub fn min(&self) -> u32 {
        *self.0.iter().min().expect("nonempty")
    }

    /// Weighted total of an exponent tuple.
    pub fn dot(&self, alpha: &[u32]) -> u64 {
        self.0.iter().zip(alpha).map(|(&w, &a)| w as u64 * a as u64).sum()
    }
}

impl fmt::Display for Weights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

/// The column-collapsed support of a polynomial: the set of k-dimensional
/// exponent tuples obtained by summing each monomial's exponents within
/// every column. Deduplicated, order-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    k: u32,
    points: BTreeSet<Vec<u32>>,
}

impl Profile {
    pub fn new(k: u32, points: impl IntoIterator<Item = Vec<u32>>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for p in points {
            if p.len() != k as usize {
                return Err(Error::ArityMismatch { expected: k as usize, got: p.len() });
            }
            set.insert(p);
        }
        Ok(Profile { k, points: set })
    }

    pub fn empty(k: u32) -> Self {
        Profile { k, points: BTreeSet::new() }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &[u32]) -> bool {
        self.points.contains(p)
    }

    pub fn insert(&mut self, p: Vec<u32>) -> Result<()> {
        if p.len() != self.k as usize {
            return Err(Error::ArityMismatch { expected: self.k as usize, got: p.len() });
        }
        self.points.insert(p);
        Ok(())
    }

    /// Points in sorted order.
    pub fn points(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.points.iter()
    }

    /// Largest total degree over the points.
    pub fn max_total_degree(&self) -> Option<u64> {
        self.points.iter().map(|p| p.iter().map(|&e| e as u64).sum()).max()
    }

    /// Per-column maximum exponent; zeros for an empty profile.
    pub fn column_degrees(&self) -> Vec<u32> {
        let mut d = vec![0u32; self.k as usize];
        for p in &self.points {
            for (dj, &pj) in d.iter_mut().zip(p) {
                *dj = (*dj).max(pj);
            }
        }
        d
    }

    /// Largest weighted total over the points; the empty profile gets the
    /// minus-infinity sentinel.
    pub fn weighted_degree(&self, w: &Weights) -> Degree {
        self.points
            .iter()
            .map(|p| w.dot(p))
            .max()
            .map_or(Degree::MinusInfinity, Degree::Finite)
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in &self.points {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "({})", p.iter().join(","))?;
            first = false;
        }
        Ok(())
    }
}

/// Collapses every monomial of `f` along rows (each variable `x[i,j]`
/// contributes its exponent to column j) and collects the distinct
/// exponent tuples.
pub fn exponent_profile<C: Coeff>(f: &Polynomial<C>) -> Profile {
    let shape = f.shape();
    let k = shape.cols;
    let mut points = BTreeSet::new();
    for (m, _) in f.terms() {
        let mut p = vec![0u32; k as usize];
        for &(v, e) in m.factors() {
            let (_, col) = shape.unflat(v);
            p[(col - 1) as usize] += e;
        }
        points.insert(p);
    }
    Profile { k, points }
}

/// Largest weighted total over the collapsed support of `f`;
/// minus-infinity for the zero polynomial.
pub fn weighted_degree<C: Coeff>(f: &Polynomial<C>, w: &Weights) -> Result<Degree> {
    if w.k() != f.shape().cols {
        return Err(Error::ArityMismatch { expected: f.shape().cols as usize, got: w.k() as usize });
    }
    Ok(exponent_profile(f).weighted_degree(w))
}

/// Axis simplex with positive rational intercepts: the convex hull of the
/// origin and the points `a_j * e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplex {
    a: Vec<Rat>,
}

impl Simplex {
    pub fn new(a: Vec<Rat>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidInput("simplex needs at least one intercept".into()));
        }
        if a.iter().any(|x| !x.is_positive()) {
            return Err(Error::InvalidInput("simplex intercepts must be positive".into()));
        }
        Ok(Simplex { a })
    }

    pub fn from_integers(a: Vec<u64>) -> Result<Self> {
        Simplex::new(a.into_iter().map(|x| Rat::from_integer(x.into())).collect())
    }

    pub fn k(&self) -> u32 {
        self.a.len() as u32
    }

    pub fn intercepts(&self) -> &[Rat] {
        &self.a
    }

    /// Exact membership: sum over j of `p_j / a_j` is at most 1.
    pub fn contains(&self, p: &[u32]) -> bool {
        let mut s = Rat::zero();
        for (aj, &pj) in self.a.iter().zip(p) {
            if pj > 0 {
                s += Rat::from_integer(pj.into()) / aj.clone();
            }
        }
        s <= Rat::one()
    }

    /// Checks every profile point; reports the first point outside.
    pub fn encloses(&self, e: &Profile) -> Result<()> {
        if e.k() != self.k() {
            return Err(Error::ArityMismatch { expected: self.k() as usize, got: e.k() as usize });
        }
        for p in e.points() {
            if !self.contains(p) {
                return Err(Error::NotEnclosed { point: format!("({})", p.iter().join(",")) });
            }
        }
        Ok(())
    }

    /// Floor of each intercept, saturating.
    pub fn floors(&self) -> Vec<u128> {
        self.a.iter().map(|x| x.floor().to_integer().to_u128().unwrap_or(u128::MAX)).collect()
    }

    /// Floor of each doubled intercept, saturating.
    pub fn doubled_floors(&self) -> Vec<u128> {
        self.a
            .iter()
            .map(|x| {
                let d = x.clone() * Rat::from_integer(2.into());
                d.floor().to_integer().to_u128().unwrap_or(u128::MAX)
            })
            .collect()
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.a.iter().join(","))
    }
}

/// Which bounding formula produced a bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KappaMethod {
    WeightedDegree,
    SimplexFit,
    DegreePower,
    ColumnDegrees,
    HalfDegreeK1,
    HessianSimplex,
    HessianWeighted,
    HessianDegree,
}

impl fmt::Display for KappaMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            KappaMethod::WeightedDegree => "WeightedDegree",
            KappaMethod::SimplexFit => "SimplexFit",
            KappaMethod::DegreePower => "DegreePower",
            KappaMethod::ColumnDegrees => "ColumnDegrees",
            KappaMethod::HalfDegreeK1 => "HalfDegreeK1",
            KappaMethod::HessianSimplex => "HessianSimplex",
            KappaMethod::HessianWeighted => "HessianWeighted",
            KappaMethod::HessianDegree => "HessianDegree",
        };
        f.write_str(s)
    }
}

/// A certified upper bound on kappa together with its witness. `raw` is
/// the formula value; `value` is `min(raw, n)` since n distinct rows is
/// all there is.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaBound {
    pub value: u64,
    pub raw: u128,
    pub method: KappaMethod,
    pub witness: String,
    pub n_clamped: bool,
}

impl KappaBound {
    pub fn from_raw(raw: u128, n: u32, method: KappaMethod, witness: String) -> Self {
        let clamped = raw > n as u128;
        KappaBound {
            value: if clamped { n as u64 } else { raw as u64 },
            raw,
            method,
            witness,
            n_clamped: clamped,
        }
    }
}

impl fmt::Display for KappaBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.method, self.value)?;
        if self.n_clamped {
            write!(f, " (raw {}, clamped to n)", self.raw)?;
        }
        write!(f, " — {}", self.witness)
    }
}

fn product_sat(values: impl IntoIterator<Item = u128>) -> u128 {
    values.into_iter().fold(1u128, |acc, v| acc.saturating_mul(v))
}

fn require_symmetric<C: Coeff>(f: &Polynomial<C>) -> Result<()> {
    if is_symmetric(f) {
        Ok(())
    } else {
        Err(Error::NotSymmetric)
    }
}

/// Bound from a weighted degree: with d the w-weighted degree of the
/// profile, the bound is the product over columns of floor(d / w_j).
/// Requires d >= 2 * max(w) so every factor is at least 2.
pub fn kappa_weighted_profile(e: &Profile, w: &Weights, n: u32) -> Result<KappaBound> {
    if w.k() != e.k() {
        return Err(Error::ArityMismatch { expected: e.k() as usize, got: w.k() as usize });
    }
    let d = match e.weighted_degree(w) {
        Degree::MinusInfinity => {
            return Err(Error::Inapplicable("weighted bound needs a nonzero polynomial".into()))
        }
        Degree::Finite(d) => d,
    };
    if d < 2 * w.max() as u64 {
        return Err(Error::Inapplicable(format!(
            "weighted bound needs degree {} >= 2*max(w) = {}",
            d,
            2 * w.max()
        )));
    }
    let floors: Vec<u64> = w.as_slice().iter().map(|&wj| d / wj as u64).collect();
    let raw = product_sat(floors.iter().map(|&x| x as u128));
    let witness = format!("w={} d={} floors=({})", w, d, floors.iter().join(","));
    Ok(KappaBound::from_raw(raw, n, KappaMethod::WeightedDegree, witness))
}

pub fn kappa_weighted<C: Coeff>(f: &Polynomial<C>, w: &Weights) -> Result<KappaBound> {
    require_symmetric(f)?;
    kappa_weighted_profile(&exponent_profile(f), w, f.shape().rows)
}

/// Bound from an enclosing simplex: the product of the intercept floors.
/// Requires every intercept at least 2 and the whole profile inside.
pub fn kappa_simplex_profile(e: &Profile, a: &Simplex, n: u32) -> Result<KappaBound> {
    let two = Rat::from_integer(2.into());
    if a.intercepts().iter().any(|x| *x < two) {
        return Err(Error::Inapplicable("simplex bound needs every intercept >= 2".into()));
    }
    a.encloses(e)?;
    let floors = a.floors();
    let raw = product_sat(floors.iter().copied());
    let witness = format!("a={} floors=({})", a, floors.iter().join(","));
    Ok(KappaBound::from_raw(raw, n, KappaMethod::SimplexFit, witness))
}

pub fn kappa_simplex<C: Coeff>(f: &Polynomial<C>, a: &Simplex) -> Result<KappaBound> {
    require_symmetric(f)?;
    kappa_simplex_profile(&exponent_profile(f), a, f.shape().rows)
}

/// Result of the enclosing-simplex search over integer weight vectors.
#[derive(Clone, Debug)]
pub struct SimplexFit {
    pub simplex: Simplex,
    pub weights: Weights,
    pub degree: u64,
    pub objective: u128,
}

/// Searches the simplices `a_j = d / w_j` over integer weight vectors
/// `w` in {1..cap}^k, where d is the w-weighted degree of the profile
/// inflated to at least `2 * max(w)` so that every intercept is >= 2.
/// Minimizes the product of intercept floors; ties go to the
/// lexicographically smallest w.
pub fn fit_simplex(e: &Profile, weight_cap: u32) -> Result<SimplexFit> {
    if e.is_empty() {
        return Err(Error::EmptyProfile);
    }
    if weight_cap == 0 {
        return Err(Error::InvalidInput("weight cap must be positive".into()));
    }
    let k = e.k() as usize;
    let candidates = (weight_cap as u128).checked_pow(k as u32);
    if candidates.map_or(true, |c| c > 1 << 24) {
        return Err(Error::Inapplicable(format!(
            "weight search space {}^{} is too large",
            weight_cap, k
        )));
    }
    let mut best: Option<SimplexFit> = None;
    let mut w = vec![1u32; k];
    loop {
        let weights = Weights::new(w.clone()).expect("positive");
        let d_raw = match e.weighted_degree(&weights) {
            Degree::Finite(d) => d,
            Degree::MinusInfinity => unreachable!("profile is nonempty"),
        };
        let d = d_raw.max(2 * weights.max() as u64);
        let objective = product_sat(w.iter().map(|&wj| (d / wj as u64) as u128));
        if best.as_ref().map_or(true, |b| objective < b.objective) {
            let a = w
                .iter()
                .map(|&wj| Rat::new(d.into(), (wj as u64).into()))
                .collect::<Vec<_>>();
            best = Some(SimplexFit {
                simplex: Simplex::new(a).expect("positive intercepts"),
                weights,
                degree: d,
                objective,
            });
        }
        // odometer increment in lexicographic order
        let mut pos = k;
        while pos > 0 {
            if w[pos - 1] < weight_cap {
                w[pos - 1] += 1;
                for entry in w.iter_mut().skip(pos) {
                    *entry = 1;
                }
                break;
            }
            pos -= 1;
        }
        if pos == 0 {
            break;
        }
    }
    Ok(best.expect("at least one candidate"))
}

/// The simplex-search bound as a [`KappaBound`].
pub fn kappa_fitted_profile(e: &Profile, weight_cap: u32, n: u32) -> Result<KappaBound> {
    let fit = fit_simplex(e, weight_cap)?;
    let witness = format!("a={} w={} d={}", fit.simplex, fit.weights, fit.degree);
    Ok(KappaBound::from_raw(fit.objective, n, KappaMethod::SimplexFit, witness))
}

/// Bound d^k from the total degree d >= 2.
pub fn kappa_degree_power<C: Coeff>(f: &Polynomial<C>) -> Result<KappaBound> {
    require_symmetric(f)?;
    let k = f.shape().cols;
    let d = match f.degree() {
        Degree::Finite(d) if d >= 2 => d,
        other => {
            return Err(Error::Inapplicable(format!(
                "degree-power bound needs total degree >= 2, got {}",
                other
            )))
        }
    };
    let raw = (d as u128).checked_pow(k).unwrap_or(u128::MAX);
    let witness = format!("d={} k={}", d, k);
    Ok(KappaBound::from_raw(raw, f.shape().rows, KappaMethod::DegreePower, witness))
}

/// Bound k^k times the product of the per-column degrees; needs k >= 2
/// and every column actually present.
pub fn kappa_column_degrees<C: Coeff>(f: &Polynomial<C>) -> Result<KappaBound> {
    require_symmetric(f)?;
    let k = f.shape().cols;
    if k < 2 {
        return Err(Error::Inapplicable("column-degree bound needs k >= 2".into()));
    }
    let d = exponent_profile(f).column_degrees();
    if let Some(j) = d.iter().position(|&dj| dj == 0) {
        return Err(Error::Inapplicable(format!(
            "column {} never occurs; drop it before bounding",
            j + 1
        )));
    }
    let raw = (k as u128)
        .checked_pow(k)
        .unwrap_or(u128::MAX)
        .saturating_mul(product_sat(d.iter().map(|&x| x as u128)));
    let witness = format!("col_degrees=({}) k={}", d.iter().join(","), k);
    Ok(KappaBound::from_raw(raw, f.shape().rows, KappaMethod::ColumnDegrees, witness))
}

/// The single-column bound max(2, floor(d / 2)).
pub fn kappa_half_degree_k1<C: Coeff>(f: &Polynomial<C>) -> Result<KappaBound> {
    require_symmetric(f)?;
    if f.shape().cols != 1 {
        return Err(Error::Inapplicable("half-degree bound applies only to k = 1".into()));
    }
    let d = match f.degree() {
        Degree::Finite(d) => d,
        Degree::MinusInfinity => {
            return Err(Error::Inapplicable("half-degree bound needs a nonzero polynomial".into()))
        }
    };
    let raw = (d / 2).max(2) as u128;
    let witness = format!("d={}", d);
    Ok(KappaBound::from_raw(raw, f.shape().rows, KappaMethod::HalfDegreeK1, witness))
}

/// The smallest applicable bound among the half-degree rule (k = 1), the
/// weight-search simplex fit, the degree power, and the column-degree
/// product. Ties keep the earlier method in that order.
pub fn best_kappa<C: Coeff>(f: &Polynomial<C>, weight_cap: u32) -> Result<KappaBound> {
    require_symmetric(f)?;
    if f.is_zero() {
        return Err(Error::Inapplicable("zero polynomial has an empty support".into()));
    }
    let n = f.shape().rows;
    let e = exponent_profile(f);
    let mut candidates: Vec<KappaBound> = Vec::new();
    if let Ok(b) = kappa_half_degree_k1(f) {
        candidates.push(b);
    }
    if let Ok(b) = kappa_fitted_profile(&e, weight_cap, n) {
        candidates.push(b);
    }
    if let Ok(b) = kappa_degree_power(f) {
        candidates.push(b);
    }
    if let Ok(b) = kappa_column_degrees(f) {
        candidates.push(b);
    }
    candidates
        .into_iter()
        .min_by_key(|b| (b.value, b.raw))
        .ok_or_else(|| Error::Inapplicable("no bound method applies".into()))
}

/// Exact integer counterpart of the enclosing-simplex search: minimizes
/// the product of a positive integer vector m >= lower subject to the
/// strict constraints sum_j p_j / (m_j + 1) < 1 for every profile point.
///
/// A vector m is feasible exactly when some simplex with intercept floors
/// m encloses the profile (pick a_j slightly below m_j + 1), so the
/// minimum product here is the best floor product any enclosing simplex
/// can achieve. Returns the lexicographically smallest optimal m with its
/// product. The search is exhaustive: depth-first over coordinates with
/// objective pruning against an always-feasible incumbent.
pub fn min_floor_vector(e: &Profile, lower: &[u64]) -> Result<(Vec<u64>, u128)> {
    let k = e.k() as usize;
    if lower.len() != k {
        return Err(Error::ArityMismatch { expected: k, got: lower.len() });
    }
    let points: Vec<&Vec<u32>> = e.points().collect();
    // per-axis necessity: p_j / (m_j + 1) < 1 forces m_j >= p_j
    let mut lb = vec![1u64; k];
    for (j, lbj) in lb.iter_mut().enumerate() {
        *lbj = (*lbj).max(lower[j]);
        for p in &points {
            *lbj = (*lbj).max(p[j] as u64);
        }
    }
    if points.is_empty() {
        let prod = product_sat(lb.iter().map(|&x| x as u128));
        return Ok((lb, prod));
    }
    let dmax = e.max_total_degree().unwrap_or(0);
    // always-feasible incumbent: coordinates at max(lb, 2*dmax) satisfy
    // sum p_j/(m_j+1) <= dmax/(2*dmax+1) < 1
    let seed: Vec<u64> = lb.iter().map(|&l| l.max(2 * dmax)).collect();
    debug_assert!(floor_vector_feasible(&points, &seed));
    let mut best_m = seed.clone();
    let mut best_obj = product_sat(seed.iter().map(|&x| x as u128));
    let suffix_lb: Vec<u128> = {
        let mut acc = vec![1u128; k + 1];
        for j in (0..k).rev() {
            acc[j] = acc[j + 1].saturating_mul(lb[j] as u128);
        }
        acc
    };
    let mut m = vec![0u64; k];
    floor_vector_dfs(&points, &lb, &suffix_lb, 0, 1, &mut m, &mut best_m, &mut best_obj);
    Ok((best_m, best_obj))
}

fn floor_vector_feasible(points: &[&Vec<u32>], m: &[u64]) -> bool {
    let denom = product_sat(m.iter().map(|&x| x as u128 + 1));
    points.iter().all(|p| {
        let lhs: u128 = p
            .iter()
            .zip(m)
            .map(|(&pj, &mj)| (pj as u128).saturating_mul(denom / (mj as u128 + 1)))
            .fold(0u128, |a, b| a.saturating_add(b));
        lhs < denom
    })
}

fn floor_vector_dfs(
    points: &[&Vec<u32>],
    lb: &[u64],
    suffix_lb: &[u128],
    j: usize,
    partial_obj: u128,
    m: &mut Vec<u64>,
    best_m: &mut Vec<u64>,
    best_obj: &mut u128,
) {
    let k = lb.len();
    if j == k {
        if partial_obj < *best_obj && floor_vector_feasible(points, m) {
            *best_obj = partial_obj;
            best_m.clone_from(m);
        }
        return;
    }
    let mut mj = lb[j];
    loop {
        let obj = partial_obj.saturating_mul(mj as u128);
        if obj.saturating_mul(suffix_lb[j + 1]) >= *best_obj {
            break; // larger m_j only gets worse
        }
        m.truncate(j);
        m.push(mj);
        // cheap certain-infeasibility prune on the assigned prefix: the
        // unassigned coordinates only add nonnegative mass, so a prefix sum
        // clearly at or above 1 kills the branch for THIS m_j; larger m_j
        // may recover, so keep iterating.
        let prefix_ok = points.iter().all(|p| {
            let s: f64 = p[..=j]
                .iter()
                .zip(m.iter())
                .map(|(&pj, &mjj)| pj as f64 / (mjj as f64 + 1.0))
                .sum();
            s < 1.0 + 1e-9
        });
        if prefix_ok {
            floor_vector_dfs(points, lb, suffix_lb, j + 1, obj, m, best_m, best_obj);
        }
        mj += 1;
    }
}

/// Number of partitions of n into exactly ell positive parts.
pub fn count_partitions(n: u32, ell: u32) -> Result<u128> {
    if ell == 0 || ell > n {
        return Err(Error::InvalidPartition(format!(
            "need 1 <= ell <= n, got ell={} n={}",
            ell, n
        )));
    }
    // p(n, l) = p(n-1, l-1) + p(n-l, l)
    let n = n as usize;
    let ell = ell as usize;
    let mut table = vec![vec![0u128; ell + 1]; n + 1];
    table[0][0] = 1;
    for nn in 1..=n {
        let lmax = ell.min(nn);
        for ll in 1..=lmax {
            let a = table[nn - 1][ll - 1];
            let b = if nn >= ll { table[nn - ll][ll] } else { 0 };
            table[nn][ll] = a
                .checked_add(b)
                .ok_or_else(|| Error::InvalidInput("partition count overflow".into()))?;
        }
    }
    Ok(table[n][ell])
}

/// Exact rational floor comparison helper shared with the convexity side:
/// verifies that shaving `shave` off every intercept keeps the profile
/// enclosed, shrinking the shave tenfold as needed. Returns the witness
/// simplex; panics never, errors if even the unshaved intercepts fail.
pub(crate) fn shaved_simplex(e: &Profile, intercepts: &[Rat]) -> Result<Simplex> {
    let mut shave = Rat::new(1.into(), 1000.into());
    for _ in 0..40 {
        let a: Vec<Rat> = intercepts.iter().map(|x| x.clone() - shave.clone()).collect();
        if a.iter().all(|x| x.is_positive()) {
            let s = Simplex::new(a)?;
            if s.encloses(e).is_ok() {
                return Ok(s);
            }
        }
        shave /= Rat::from_integer(10.into());
    }
    Err(Error::Inapplicable("profile does not fit strictly inside the simplex".into()))
}
