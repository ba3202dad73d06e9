//! Symmetrization, power sums and the power-sum rewriting.
//!
//! A polynomial over the n-by-k array is k-symmetric when it is fixed by
//! every simultaneous permutation of the rows. The building blocks are
//! the power sums `p_a = sum_i x[i,1]^a1 ... x[i,k]^ak` for nonzero
//! exponent tuples `a`, and the monomial functions `m_{a1,...,al}`:
//! the symmetrization of `prod_c x[c,.]^{a_c}` with each distinct image
//! counted once. Every k-symmetric polynomial of degree within reach of
//! n rewrites uniquely as a polynomial in the `p_a`; the rewriting here
//! peels leading monomial functions and eliminates them by the recursion
//!
//! `c * m_{a0,a1,...,al} = p_{a0} * m_{a1,...,al} - sum_b c_b * m_{merge(b)}`
//!
//! where `a0` is the greatest tuple, `c` counts how often `a0` occurs in
//! `(a0,...,al)`, `b` runs over the distinct values among `(a1,...,al)`,
//! `merge(b)` replaces one copy of `b` by `b + a0`, and `c_b` counts
//! `b + a0` in the merged multiset.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial, Shape};
use crate::scalar::Coeff;
use crate::Rat;

/// Rows beyond this make whole-orbit symmetrization too expensive; the
/// direct constructors for power sums and monomial functions have no such
/// limit.
pub const MAX_SYMMETRIZE_ROWS: u32 = 9;

/// Nonzero exponent tuple of length k indexing a power sum.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExpTuple(pub Vec<u32>);

impl ExpTuple {
    pub fn new(t: Vec<u32>) -> Result<Self> {
        if t.iter().all(|&e| e == 0) {
            return Err(Error::ZeroExponentTuple);
        }
        Ok(ExpTuple(t))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    /// Entrywise sum; both tuples must share a length.
    pub fn plus(&self, other: &ExpTuple) -> ExpTuple {
        assert_eq!(self.len(), other.len(), "tuple arity");
        ExpTuple(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for ExpTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

/// True if every row permutation fixes the polynomial. Adjacent
/// transpositions generate the symmetric group, so checking those n-1
/// swaps suffices.
pub fn is_symmetric<C: Coeff>(f: &Polynomial<C>) -> bool {
    let n = f.shape().rows;
    (1..n).all(|i| match f.swap_rows(i, i + 1) {
        Ok(g) => g == *f,
        Err(_) => false,
    })
}

/// Orbit-as-set symmetrization: sums every distinct row-permutation image
/// of `f`, each exactly once. Errors on more than
/// [`MAX_SYMMETRIZE_ROWS`] rows, where the n! orbit is out of reach.
pub fn symmetrize<C: Coeff>(f: &Polynomial<C>) -> Result<Polynomial<C>> {
    let n = f.shape().rows;
    if n > MAX_SYMMETRIZE_ROWS {
        return Err(Error::OrbitTooLarge { rows: n, limit: MAX_SYMMETRIZE_ROWS });
    }
    let mut orbit: Vec<Polynomial<C>> = Vec::new();
    for perm in (1..=n).permutations(n as usize) {
        let g = f.apply_row_permutation(&perm)?;
        if !orbit.contains(&g) {
            orbit.push(g);
        }
    }
    let mut acc = Polynomial::zero(f.shape());
    for g in orbit {
        acc = acc.add(&g)?;
    }
    Ok(acc)
}

/// The power sum `p_a` over n rows: `sum_i prod_j x[i,j]^{a_j}`.
/// Built directly, so it stays cheap at large n.
pub fn power_sum<C: Coeff>(shape: Shape, a: &ExpTuple) -> Result<Polynomial<C>> {
    if a.len() != shape.cols as usize {
        return Err(Error::ArityMismatch { expected: shape.cols as usize, got: a.len() });
    }
    let mut p = Polynomial::zero(shape);
    for i in 1..=shape.rows {
        let factors = a
            .0
            .iter()
            .enumerate()
            .filter(|&(_, &e)| e > 0)
            .map(|(j, &e)| (shape.flat(i, j as u32 + 1), e))
            .collect();
        p.add_term(Monomial::from_factors(factors), C::one());
    }
    Ok(p)
}

/// The monomial function `m_{a1,...,al}` over n rows: the sum over all
/// injective assignments of the distinct tuples among `a` to rows, each
/// resulting monomial counted once. Built directly from the multiset
/// structure, so it stays cheap at large n.
pub fn monomial_function<C: Coeff>(shape: Shape, tuples: &[ExpTuple]) -> Result<Polynomial<C>> {
    let ell = tuples.len();
    if ell == 0 {
        return Ok(Polynomial::one(shape));
    }
    if ell > shape.rows as usize {
        return Err(Error::TooManyTuples { ell, rows: shape.rows });
    }
    for t in tuples {
        if t.len() != shape.cols as usize {
            return Err(Error::ArityMismatch { expected: shape.cols as usize, got: t.len() });
        }
    }
    // group equal tuples: the monomial ignores which copy lands where, so
    // enumerate unordered row sets per distinct tuple.
    let mut groups: BTreeMap<&ExpTuple, u32> = BTreeMap::new();
    for t in tuples {
        *groups.entry(t).or_insert(0) += 1;
    }
    let groups: Vec<(&ExpTuple, u32)> = groups.into_iter().collect();
    let mut out = Polynomial::zero(shape);
    let rows: Vec<u32> = (1..=shape.rows).collect();
    // depth-first over groups, choosing a row subset for each
    fn assign<C: Coeff>(
        groups: &[(&ExpTuple, u32)],
        free: &[u32],
        shape: Shape,
        factors: &mut Vec<(u32, u32)>,
        out: &mut Polynomial<C>,
    ) {
        match groups.split_first() {
            None => {
                out.add_term(Monomial::from_factors(factors.clone()), C::one());
            }
            Some((&(tuple, count), rest)) => {
                for subset in free.iter().copied().combinations(count as usize) {
                    let before = factors.len();
                    for &row in &subset {
                        for (j, &e) in tuple.0.iter().enumerate() {
                            if e > 0 {
                                factors.push((shape.flat(row, j as u32 + 1), e));
                            }
                        }
                    }
                    let remaining: Vec<u32> =
                        free.iter().copied().filter(|r| !subset.contains(r)).collect();
                    assign(rest, &remaining, shape, factors, out);
                    factors.truncate(before);
                }
            }
        }
    }
    assign(&groups, &rows, shape, &mut Vec::new(), &mut out);
    Ok(out)
}

/// A polynomial in power sums: a sparse sum of products
/// `c * P[a1]^{e1} ... P[am]^{em}` with exact rational coefficients.
/// Keys are sorted (tuple, exponent) lists, tuples strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSumExpr {
    k: u32,
    terms: BTreeMap<Vec<(ExpTuple, u32)>, Rat>,
}

impl PowerSumExpr {
    pub fn zero(k: u32) -> Self {
        PowerSumExpr { k, terms: BTreeMap::new() }
    }

    pub fn constant(k: u32, c: Rat) -> Self {
        let mut e = PowerSumExpr::zero(k);
        e.add_term(Vec::new(), c);
        e
    }

    /// A single power sum `P[a]`.
    pub fn power_sum(a: ExpTuple) -> Self {
        let k = a.len() as u32;
        let mut e = PowerSumExpr::zero(k);
        e.add_term(vec![(a, 1)], num_traits::One::one());
        e
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<(ExpTuple, u32)>, &Rat)> {
        self.terms.iter()
    }

    /// Adds `c * prod P[a]^e` in place; the key is canonicalized here.
    pub fn add_term(&mut self, key: Vec<(ExpTuple, u32)>, c: Rat) {
        if num_traits::Zero::is_zero(&c) {
            return;
        }
        let mut canon: BTreeMap<ExpTuple, u32> = BTreeMap::new();
        for (t, e) in key {
            if e > 0 {
                *canon.entry(t).or_insert(0) += e;
            }
        }
        let key: Vec<(ExpTuple, u32)> = canon.into_iter().collect();
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(en) => {
                en.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut en) => {
                let sum = en.get().clone() + c;
                if num_traits::Zero::is_zero(&sum) {
                    en.remove();
                } else {
                    *en.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.k, other.k, "column count");
        let mut out = self.clone();
        for (key, c) in &other.terms {
            out.add_term(key.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = PowerSumExpr::zero(self.k);
        for (key, v) in &self.terms {
            out.add_term(key.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.k, other.k, "column count");
        let mut out = PowerSumExpr::zero(self.k);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let mut key = ka.clone();
                key.extend(kb.iter().cloned());
                out.add_term(key, ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut result = PowerSumExpr::constant(self.k, num_traits::One::one());
        for _ in 0..exp {
            result = result.mul(self);
        }
        result
    }

    /// Expands back to an explicit polynomial over n rows.
    pub fn expand(&self, rows: u32) -> Result<Polynomial<Rat>> {
        let shape = Shape::new(rows, self.k.max(1))?;
        if self.k == 0 {
            return Err(Error::InvalidInput("power-sum expression with k=0".into()));
        }
        let mut acc = Polynomial::zero(shape);
        for (key, c) in &self.terms {
            let mut term = Polynomial::constant(shape, c.clone());
            for (a, e) in key {
                let p: Polynomial<Rat> = power_sum(shape, a)?;
                term = term.mul(&p.pow(*e))?;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }
}

/// Canonical text format: a `psexpr k=<k>` header, then one term per
/// line, `<coeff> P[a1,...,ak]^e ...` with `^1` omitted, factors in
/// increasing tuple order. The zero expression is the header plus `0`.
impl fmt::Display for PowerSumExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "psexpr k={}", self.k)?;
        if self.terms.is_empty() {
            return writeln!(f, "0");
        }
        // descending by total degree then key, to lead with the heaviest term
        let mut entries: Vec<(&Vec<(ExpTuple, u32)>, &Rat)> = self.terms.iter().collect();
        entries.sort_by_key(|(key, _)| {
            let deg: u64 = key.iter().map(|(t, e)| t.degree() * *e as u64).sum();
            (std::cmp::Reverse(deg), (*key).clone())
        });
        for (key, c) in entries {
            write!(f, "{}", c)?;
            for (t, e) in key {
                write!(f, " P[{}]", t.0.iter().join(","))?;
                if *e > 1 {
                    write!(f, "^{}", e)?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Parses the canonical power-sum text format. Blank lines and `#`
/// comments are ignored; terms may repeat and arrive in any order.
pub fn parse_psexpr(src: &str) -> Result<PowerSumExpr> {
    let mut expr: Option<PowerSumExpr> = None;
    for (i, raw) in src.lines().enumerate() {
        let lineno = i + 1;
        let perr = |msg: String| Error::Parse { line: lineno, col: 1, msg };
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match expr {
            None => {
                let rest = line
                    .strip_prefix("psexpr")
                    .ok_or_else(|| perr("expected 'psexpr k=<k>' header".into()))?;
                let k = rest
                    .trim()
                    .strip_prefix("k=")
                    .and_then(|v| v.parse::<u32>().ok())
                    .ok_or_else(|| perr("bad k= value".into()))?;
                expr = Some(PowerSumExpr::zero(k));
            }
            Some(ref mut e) => {
                let k = e.k;
                let mut toks = line.split_whitespace();
                let coeff_tok = toks.next().expect("nonempty");
                let coeff: Rat = coeff_tok
                    .parse()
                    .map_err(|_| perr(format!("bad coefficient '{}'", coeff_tok)))?;
                let mut key = Vec::new();
                for tok in toks {
                    let body = tok
                        .strip_prefix("P[")
                        .ok_or_else(|| perr(format!("expected power-sum token, got '{}'", tok)))?;
                    let (idx, rest) = body
                        .split_once(']')
                        .ok_or_else(|| perr(format!("unterminated token '{}'", tok)))?;
                    let exp = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')
                            .and_then(|v| v.parse::<u32>().ok())
                            .filter(|&v| v > 0)
                            .ok_or_else(|| perr(format!("bad exponent in '{}'", tok)))?
                    };
                    let entries: Vec<u32> = idx
                        .split(',')
                        .map(|s| s.trim().parse::<u32>())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|_| perr(format!("bad exponent tuple in '{}'", tok)))?;
                    if entries.len() != k as usize {
                        return Err(Error::ArityMismatch { expected: k as usize, got: entries.len() });
                    }
                    key.push((ExpTuple::new(entries)?, exp));
                }
                if key.is_empty() && num_traits::Zero::is_zero(&coeff) {
                    continue;
                }
                e.add_term(key, coeff);
            }
        }
    }
    expr.ok_or(Error::Parse { line: 1, col: 1, msg: "missing 'psexpr' header".into() })
}

/// Collapses each monomial of a k-symmetric polynomial to the multiset of
/// its nonzero row tuples, sorted descending. This is the key the
/// rewriting recursion works on.
fn row_multiset(shape: Shape, m: &Monomial) -> Vec<ExpTuple> {
    let k = shape.cols as usize;
    let mut per_row: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for &(v, e) in m.factors() {
        let (row, col) = shape.unflat(v);
        per_row.entry(row).or_insert_with(|| vec![0; k])[(col - 1) as usize] += e;
    }
    let mut tuples: Vec<ExpTuple> = per_row.into_values().map(ExpTuple).collect();
    tuples.sort();
    tuples.reverse();
    tuples
}

/// Rewrites the monomial function of a tuple multiset (sorted descending)
/// as a power-sum expression, memoizing shared sub-multisets.
fn monomial_to_power_sums(
    k: u32,
    tuples: &[ExpTuple],
    memo: &mut HashMap<Vec<ExpTuple>, PowerSumExpr>,
) -> PowerSumExpr {
    if tuples.is_empty() {
        return PowerSumExpr::constant(k, num_traits::One::one());
    }
    if let Some(hit) = memo.get(tuples) {
        return hit.clone();
    }
    let a0 = tuples[0].clone();
    let rest = &tuples[1..];
    let mult = tuples.iter().filter(|t| **t == a0).count() as i64;
    // p_{a0} * m_rest
    let mut acc = PowerSumExpr::power_sum(a0.clone()).mul(&monomial_to_power_sums(k, rest, memo));
    // minus the collision terms, one per distinct part value of rest; the
    // coefficient is how often the merged part occurs in the new multiset
    for i in 0..rest.len() {
        if rest[..i].contains(&rest[i]) {
            continue;
        }
        let grown = rest[i].plus(&a0);
        let mut merged: Vec<ExpTuple> = rest.to_vec();
        merged[i] = grown.clone();
        merged.sort();
        merged.reverse();
        let count = merged.iter().filter(|t| **t == grown).count() as i64;
        let sub = monomial_to_power_sums(k, &merged, memo);
        acc = acc.add(&sub.scale(&Rat::from_integer((-count).into())));
    }
    let inv = Rat::new(1.into(), mult.into());
    let result = acc.scale(&inv);
    memo.insert(tuples.to_vec(), result.clone());
    result
}

/// Rewrites a k-symmetric polynomial as a polynomial in power sums.
/// Errors with [`Error::NotSymmetric`] when the input is not fixed by the
/// row permutations, and with [`Error::TooManyTuples`] when a monomial
/// touches more rows than n allows the rewriting to express (cannot
/// happen for genuine inputs; guards corrupted data).
pub fn to_power_sums(f: &Polynomial<Rat>) -> Result<PowerSumExpr> {
    if !is_symmetric(f) {
        return Err(Error::NotSymmetric);
    }
    let shape = f.shape();
    let k = shape.cols;
    let mut rest = f.clone();
    let mut out = PowerSumExpr::zero(k);
    let mut memo: HashMap<Vec<ExpTuple>, PowerSumExpr> = HashMap::new();
    while let Some((m, c)) = rest.leading_term() {
        let c = c.clone();
        let tuples = row_multiset(shape, m);
        if tuples.is_empty() {
            out.add_term(Vec::new(), c.clone());
            rest = rest.sub(&Polynomial::constant(shape, c))?;
            continue;
        }
        // remove the whole orbit of this monomial at once
        let orbit: Polynomial<Rat> = monomial_function(shape, &tuples)?;
        rest = rest.sub(&orbit.scale(&c))?;
        let ps = monomial_to_power_sums(k, &tuples, &mut memo);
        out = out.add(&ps.scale(&c));
    }
    Ok(out)
}

/// [`to_power_sums`] plus the degree bookkeeping: checks that every
/// product of power sums in the rewriting stays within the weighted
/// degree of the input, and returns that shared bound. The check holds
/// for every weight vector because the recursion only merges exponent
/// tuples; a violation means corrupted data.
pub fn rewrite_in_power_sums(
    f: &Polynomial<Rat>,
    w: &crate::bounds::Weights,
) -> Result<(PowerSumExpr, crate::poly::Degree)> {
    let d = crate::bounds::weighted_degree(f, w)?;
    let expr = to_power_sums(f)?;
    if let crate::poly::Degree::Finite(bound) = d {
        for (key, _) in expr.terms() {
            let mut term_deg: u64 = 0;
            for (alpha, e) in key {
                term_deg += w.dot(&alpha.0) * *e as u64;
            }
            if term_deg > bound {
                return Err(Error::InvalidInput(format!(
                    "rewriting escaped the weighted-degree bound: {} exceeds {}",
                    term_deg, bound
                )));
            }
        }
    }
    Ok((expr, d))
}

/// For a linear combination of power sums `f = sum_a u_a p_a`, the
/// partial derivative in `x[i,j]` is a polynomial in row i alone:
/// `qt_j` evaluated at `x[i,1..k]`, with `qt_j = sum_a u_a a_j Y^(a-e_j)`.
/// Returns `qt_1..qt_k` on a (1, k) array. Constant terms are allowed
/// (they differentiate away); anything nonlinear is rejected.
pub fn power_sum_gradient_factor(expr: &PowerSumExpr) -> Result<Vec<Polynomial<Rat>>> {
    let k = expr.k();
    let shape = Shape::new(1, k)?;
    let mut out = vec![Polynomial::<Rat>::zero(shape); k as usize];
    for (key, coeff) in expr.terms() {
        if key.is_empty() {
            continue;
        }
        if key.len() != 1 || key[0].1 != 1 {
            return Err(Error::InvalidInput(
                "gradient factors need a linear combination of power sums".into(),
            ));
        }
        let alpha = &key[0].0;
        for j in 0..k as usize {
            let aj = alpha.0[j];
            if aj == 0 {
                continue;
            }
            let mut factors = Vec::new();
            for (jj, &e) in alpha.0.iter().enumerate() {
                let e = if jj == j { e - 1 } else { e };
                if e > 0 {
                    factors.push((shape.flat(1, jj as u32 + 1), e));
                }
            }
            out[j].add_term(
                Monomial::from_factors(factors),
                coeff.clone() * Rat::from_integer(aj.into()),
            );
        }
    }
    Ok(out)
}
