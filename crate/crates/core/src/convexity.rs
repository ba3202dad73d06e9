//! Convexity testing through the Hessian quadratic form.
//!
//! A polynomial f on an n-by-k array is convex exactly when its Hessian
//! form g(x, xt) = sum over all variable pairs of xt_v * xt_v' * d2f/dv dv'
//! is nonnegative everywhere. g lives on an (n, 2k) array whose rows carry
//! the x block in columns 1..k and the xt block in columns k+1..2k; it is
//! row-permutation invariant whenever f is, so the same distinct-row
//! bounds apply to it and cut the search space for counterexamples.
//! Quadratic f is settled exactly instead, by a rational positive
//! semidefiniteness check of the constant Hessian matrix.

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::bounds::{
    exponent_profile, min_floor_vector, shaved_simplex, weighted_degree, KappaBound, KappaMethod,
    Profile, Simplex, Weights,
};
use crate::error::{Error, Result};
use crate::poly::{Degree, Monomial, Polynomial, Shape};
use crate::scalar::Coeff;
use crate::sym::is_symmetric;
use crate::Rat;

fn wide_shape(shape: Shape) -> Result<Shape> {
    let k = shape.cols;
    k.checked_mul(2)
        .ok_or_else(|| Error::InvalidInput("column count too large to double".into()))
        .and_then(|kk| Shape::new(shape.rows, kk))
}

/// The Hessian quadratic form of `f` as a polynomial on the doubled
/// array: columns 1..k hold x, columns k+1..2k hold the direction xt, and
///
///   g(x, xt) = sum_{v, v'} xt_v * xt_v' * (d^2 f / dx_v dx_v')(x)
///
/// over all ordered pairs of array positions. Linear and constant f give
/// the zero polynomial.
pub fn hessian_form<C: Coeff>(f: &Polynomial<C>) -> Result<Polynomial<C>> {
    let shape = f.shape();
    let k = shape.cols;
    let wide = wide_shape(shape)?;
    let lift = |v: u32| -> u32 {
        let (row, col) = shape.unflat(v);
        wide.flat(row, col)
    };
    let tilde = |v: u32| -> u32 {
        let (row, col) = shape.unflat(v);
        wide.flat(row, col + k)
    };
    let mut g = Polynomial::zero(wide);
    for (m, c) in f.terms() {
        let factors = m.factors();
        let lifted: Vec<(u32, u32)> = factors.iter().map(|&(v, e)| (lift(v), e)).collect();
        for (ia, &(va, ea)) in factors.iter().enumerate() {
            if ea >= 2 {
                // same variable twice: coefficient e*(e-1)
                let mut fs = lifted.clone();
                fs[ia].1 -= 2;
                fs.push((tilde(va), 2));
                let coeff = c.clone() * C::from_int(ea as i64 * (ea as i64 - 1));
                g.add_term(Monomial::from_factors(fs), coeff);
            }
            for (ib, &(vb, eb)) in factors.iter().enumerate().skip(ia + 1) {
                // distinct variables: both orders, hence the factor 2
                let mut fs = lifted.clone();
                fs[ia].1 -= 1;
                fs[ib].1 -= 1;
                fs.push((tilde(va), 1));
                fs.push((tilde(vb), 1));
                let coeff = c.clone() * C::from_int(2 * ea as i64 * eb as i64);
                g.add_term(Monomial::from_factors(fs), coeff);
            }
        }
    }
    Ok(g)
}

/// Translates every profile point down by each unordered pair of unit
/// vectors and keeps what stays in the nonnegative orthant: the collapsed
/// x-support any Hessian entry of a polynomial with this profile can have.
pub fn h_profile_from(e: &Profile) -> Profile {
    let k = e.k() as usize;
    let mut out = Profile::empty(e.k());
    for p in e.points() {
        for i in 0..k {
            for j in i..k {
                let mut q = p.clone();
                let mut ok = true;
                for axis in [i, j] {
                    if q[axis] == 0 {
                        ok = false;
                        break;
                    }
                    q[axis] -= 1;
                }
                if ok {
                    out.insert(q).expect("same arity");
                }
            }
        }
    }
    out
}

/// [`h_profile_from`] applied to the collapsed support of `f`.
pub fn h_profile<C: Coeff>(f: &Polynomial<C>) -> Profile {
    h_profile_from(&exponent_profile(f))
}

/// Exact collapsed support of the Hessian form, in 2k columns.
pub fn e_gf_profile<C: Coeff>(f: &Polynomial<C>) -> Result<Profile> {
    Ok(exponent_profile(&hessian_form(f)?))
}

fn require_symmetric<C: Coeff>(f: &Polynomial<C>) -> Result<()> {
    if is_symmetric(f) {
        Ok(())
    } else {
        Err(Error::NotSymmetric)
    }
}

/// Distinct-row bound for the Hessian form from a user-supplied simplex:
/// 3^k times the product of the doubled intercept floors, valid whenever
/// the simplex has intercepts >= 1 and encloses the translated profile.
pub fn kappa_hessian_simplex<C: Coeff>(f: &Polynomial<C>, a: &Simplex) -> Result<KappaBound> {
    require_symmetric(f)?;
    kappa_hessian_simplex_profile(&h_profile(f), a, f.shape().rows)
}

pub fn kappa_hessian_simplex_profile(h: &Profile, a: &Simplex, n: u32) -> Result<KappaBound> {
    if a.k() != h.k() {
        return Err(Error::ArityMismatch { expected: h.k() as usize, got: a.k() as usize });
    }
    if a.intercepts().iter().any(|x| *x < Rat::one()) {
        return Err(Error::Inapplicable("hessian simplex bound needs intercepts >= 1".into()));
    }
    a.encloses(h)?;
    let floors = a.doubled_floors();
    let k = h.k();
    let raw = (3u128)
        .checked_pow(k)
        .unwrap_or(u128::MAX)
        .saturating_mul(floors.iter().fold(1u128, |acc, &x| acc.saturating_mul(x)));
    let witness = format!("a={} doubled_floors=({}) factor=3^{}", a, floors.iter().join(","), k);
    Ok(KappaBound::from_raw(raw, n, KappaMethod::HessianSimplex, witness))
}

/// The simplex bound at the best automatically fitted simplex: minimizes
/// the doubled-floor product over all valid enclosing simplices exactly.
pub fn kappa_hessian_auto_simplex<C: Coeff>(f: &Polynomial<C>) -> Result<KappaBound> {
    require_symmetric(f)?;
    let h = h_profile(f);
    auto_simplex_from(&h, f.shape().rows)
}

fn auto_simplex_from(h: &Profile, n: u32) -> Result<KappaBound> {
    let k = h.k();
    let doubled = Profile::new(
        k,
        h.points().map(|p| p.iter().map(|&x| 2 * x).collect::<Vec<u32>>()),
    )?;
    // intercepts >= 1 mean doubled floors >= 2
    let (m, obj) = min_floor_vector(&doubled, &vec![2u64; k as usize])?;
    let intercepts: Vec<Rat> =
        m.iter().map(|&mj| Rat::new(num::BigInt::from(mj + 1), 2.into())).collect();
    let simplex = shaved_simplex(h, &intercepts)?;
    debug_assert_eq!(simplex.doubled_floors(), m.iter().map(|&x| x as u128).collect::<Vec<_>>());
    let raw = (3u128).checked_pow(k).unwrap_or(u128::MAX).saturating_mul(obj);
    let witness =
        format!("a={} doubled_floors=({}) factor=3^{}", simplex, m.iter().join(","), k);
    Ok(KappaBound::from_raw(raw, n, KappaMethod::HessianSimplex, witness))
}

/// The sharpest simplex-shaped bound on the Hessian form: the better of
/// (a) the best floor product of a simplex enclosing the exact collapsed
/// support of g in all 2k columns, and (b) 3^k times the best
/// doubled-floor product of a simplex enclosing the translated x-support.
/// Both searches are exact; ties prefer (a).
pub fn kappa_hessian_refined<C: Coeff>(f: &Polynomial<C>) -> Result<KappaBound> {
    require_symmetric(f)?;
    let n = f.shape().rows;
    let g = hessian_form(f)?;
    if g.is_zero() {
        return Ok(KappaBound::from_raw(
            1,
            n,
            KappaMethod::HessianSimplex,
            "hessian form is identically zero".into(),
        ));
    }
    let e_g = exponent_profile(&g);
    let (m, obj) = min_floor_vector(&e_g, &vec![1u64; e_g.k() as usize])?;
    let intercepts: Vec<Rat> =
        m.iter().map(|&mj| Rat::from_integer(num::BigInt::from(mj + 1))).collect();
    let simplex = shaved_simplex(&e_g, &intercepts)?;
    let wide_witness =
        format!("a={} floors=({}) over the doubled-array support", simplex, m.iter().join(","));
    let wide = KappaBound::from_raw(obj, n, KappaMethod::SimplexFit, wide_witness);
    let narrow = auto_simplex_from(&h_profile(f), n)?;
    Ok(if wide.raw <= narrow.raw { wide } else { narrow })
}

/// Weighted-degree bound for the Hessian form: with d the w-weighted
/// degree of f and dt = d - 2*min(w), the bound is 3^k times the product
/// of floor(2*dt / w_j). Requires d >= 2*min(w) + max(w).
pub fn kappa_hessian_weighted<C: Coeff>(f: &Polynomial<C>, w: &Weights) -> Result<KappaBound> {
    require_symmetric(f)?;
    let d = match weighted_degree(f, w)? {
        Degree::Finite(d) => d,
        Degree::MinusInfinity => {
            return Err(Error::Inapplicable("weighted hessian bound needs a nonzero polynomial".into()))
        }
    };
    let (wmin, wmax) = (w.min() as u64, w.max() as u64);
    if d < 2 * wmin + wmax {
        return Err(Error::Inapplicable(format!(
            "weighted hessian bound needs degree {} >= 2*min(w)+max(w) = {}",
            d,
            2 * wmin + wmax
        )));
    }
    let dt = d - 2 * wmin;
    let k = w.k();
    let floors: Vec<u64> = w.as_slice().iter().map(|&wj| 2 * dt / wj as u64).collect();
    let raw = (3u128)
        .checked_pow(k)
        .unwrap_or(u128::MAX)
        .saturating_mul(floors.iter().fold(1u128, |acc, &x| acc.saturating_mul(x as u128)));
    let witness = format!("w={} d={} dt={} floors=({})", w, d, dt, floors.iter().join(","));
    Ok(KappaBound::from_raw(raw, f.shape().rows, KappaMethod::HessianWeighted, witness))
}

/// Degree-only bound for the Hessian form: 6^k * (d-2)^k for total degree
/// d >= 3. Degree-2 inputs belong to the exact quadratic check instead.
pub fn kappa_hessian_degree<C: Coeff>(f: &Polynomial<C>) -> Result<KappaBound> {
    require_symmetric(f)?;
    let k = f.shape().cols;
    let d = match f.degree() {
        Degree::Finite(d) if d >= 3 => d,
        other => {
            return Err(Error::Inapplicable(format!(
                "degree hessian bound needs total degree >= 3, got {}",
                other
            )))
        }
    };
    let raw = (6u128)
        .checked_pow(k)
        .unwrap_or(u128::MAX)
        .saturating_mul(((d - 2) as u128).checked_pow(k).unwrap_or(u128::MAX));
    let witness = format!("d={} k={}", d, k);
    Ok(KappaBound::from_raw(raw, f.shape().rows, KappaMethod::HessianDegree, witness))
}

/// The smallest applicable Hessian-form bound: refined, auto simplex,
/// weighted at the given weights (skipped when none supplied or when its
/// precondition fails), and the degree-only formula.
pub fn best_hessian_kappa<C: Coeff>(f: &Polynomial<C>, w: Option<&Weights>) -> Result<KappaBound> {
    require_symmetric(f)?;
    let mut candidates: Vec<KappaBound> = Vec::new();
    if let Ok(b) = kappa_hessian_refined(f) {
        candidates.push(b);
    }
    if let Ok(b) = kappa_hessian_auto_simplex(f) {
        candidates.push(b);
    }
    if let Some(w) = w {
        if let Ok(b) = kappa_hessian_weighted(f, w) {
            candidates.push(b);
        }
    }
    if let Ok(b) = kappa_hessian_degree(f) {
        candidates.push(b);
    }
    candidates
        .into_iter()
        .enumerate()
        .min_by_key(|(i, b)| (b.value, b.raw, *i))
        .map(|(_, b)| b)
        .ok_or_else(|| Error::Inapplicable("no hessian bound applies".into()))
}

/// Restriction of `f` to equal rows: every row is replaced by a single
/// shared row, giving a polynomial on a (1, k) array.
pub fn diagonal_restriction<C: Coeff>(f: &Polynomial<C>) -> Result<Polynomial<C>> {
    let one = Shape::new(1, f.shape().cols)?;
    f.remap_vars(one, |_, col| (1, col))
}

/// Outcome of the exact quadratic convexity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuadraticVerdict {
    /// The constant Hessian matrix is positive semidefinite: f is convex.
    PositiveSemidefinite,
    /// A direction with strictly negative second derivative, plus that
    /// exact value.
    Indefinite { direction: Vec<Rat>, value: Rat },
}

/// Exact convexity decision for polynomials of total degree at most 2:
/// rational symmetric Gaussian elimination on the constant Hessian.
pub fn quadratic_convexity(f: &Polynomial<Rat>) -> Result<QuadraticVerdict> {
    match f.degree() {
        Degree::MinusInfinity => return Ok(QuadraticVerdict::PositiveSemidefinite),
        Degree::Finite(d) if d <= 2 => {}
        other => {
            return Err(Error::Inapplicable(format!(
                "quadratic check needs total degree <= 2, got {}",
                other
            )))
        }
    }
    let dim = f.shape().vars();
    let mut mat = vec![vec![Rat::zero(); dim]; dim];
    for (m, c) in f.terms() {
        let fs = m.factors();
        match fs {
            [(v, 2)] => {
                let two_c = c.clone() * Rat::from_integer(2.into());
                mat[*v as usize][*v as usize] += two_c;
            }
            [(v, 1), (w, 1)] => {
                mat[*v as usize][*w as usize] += c.clone();
                mat[*w as usize][*v as usize] += c.clone();
            }
            _ => {} // degree < 2 in every variable pair: no Hessian entry
        }
    }
    match negative_direction(mat) {
        None => Ok(QuadraticVerdict::PositiveSemidefinite),
        Some((direction, value)) => Ok(QuadraticVerdict::Indefinite { direction, value }),
    }
}

/// Finds x with x^T M x < 0 for a symmetric rational matrix, or None when
/// M is positive semidefinite. Recursive Schur-complement elimination;
/// witnesses are lifted back through each pivot.
fn negative_direction(mat: Vec<Vec<Rat>>) -> Option<(Vec<Rat>, Rat)> {
    let n = mat.len();
    if n == 0 {
        return None;
    }
    // a negative diagonal entry is its own witness
    for i in 0..n {
        if mat[i][i].is_negative() {
            let mut x = vec![Rat::zero(); n];
            x[i] = Rat::one();
            let value = mat[i][i].clone();
            return Some((x, value));
        }
    }
    // all-zero diagonal: any nonzero off-diagonal entry gives a witness
    if mat.iter().enumerate().all(|(i, row)| row[i].is_zero()) {
        for i in 0..n {
            for j in (i + 1)..n {
                if !mat[i][j].is_zero() {
                    let mut x = vec![Rat::zero(); n];
                    x[i] = Rat::one();
                    x[j] = if mat[i][j].is_positive() { -Rat::one() } else { Rat::one() };
                    let value = -(mat[i][j].clone() * Rat::from_integer(2.into())).abs();
                    return Some((x, value));
                }
            }
        }
        return None; // zero matrix
    }
    // pivot on a positive diagonal entry
    let p = (0..n).find(|&i| mat[i][i].is_positive()).expect("some diagonal entry is positive");
    let d = mat[p][p].clone();
    // but first: a zero diagonal entry with a nonzero coupling to the pivot
    // row escapes the Schur complement only through the pivot, so it is
    // handled by the complement itself; proceed.
    let rest: Vec<usize> = (0..n).filter(|&i| i != p).collect();
    let mut schur = vec![vec![Rat::zero(); n - 1]; n - 1];
    for (ai, &i) in rest.iter().enumerate() {
        for (aj, &j) in rest.iter().enumerate() {
            schur[ai][aj] =
                mat[i][j].clone() - mat[i][p].clone() * mat[p][j].clone() / d.clone();
        }
    }
    let (w, value) = negative_direction(schur)?;
    // lift: x_rest = w, x_p = -(row_p . w) / d keeps the pivot coordinate
    // compensated, so x^T M x equals w^T S w
    let mut x = vec![Rat::zero(); n];
    let mut dot = Rat::zero();
    for (ai, &i) in rest.iter().enumerate() {
        x[i] = w[ai].clone();
        dot += mat[p][i].clone() * w[ai].clone();
    }
    x[p] = -dot / d;
    Some((x, value))
}

/// Evaluates the Hessian quadratic form of a degree-<=2 polynomial at a
/// direction, i.e. xt^T M xt; shared by tests and the counterexample
/// reporting.
pub fn quadratic_form_value(f: &Polynomial<Rat>, direction: &[Rat]) -> Result<Rat> {
    let g = hessian_form(f)?;
    let shape = f.shape();
    let wide = g.shape();
    if direction.len() != shape.vars() {
        return Err(Error::ArityMismatch { expected: shape.vars(), got: direction.len() });
    }
    let mut point = vec![Rat::zero(); wide.vars()];
    for row in 1..=shape.rows {
        for col in 1..=shape.cols {
            point[wide.flat(row, col + shape.cols) as usize] =
                direction[shape.flat(row, col) as usize].clone();
        }
    }
    g.evaluate(&point)
}
