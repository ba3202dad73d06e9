//! Sparse polynomials over an n-by-k array of variables.
//!
//! Variables are addressed as `x[i,j]` with 1-based row `i` and column
//! `j`. Monomials store only the variables they touch, as (flat index,
//! exponent) pairs sorted by flat index, where the flat index walks the
//! array row-major. Terms live in a `BTreeMap` keyed by a graded
//! lexicographic order on the flattened exponent vector, so iteration
//! order is canonical and serialization needs no extra sorting.
//!
//! Coefficients are any [`Coeff`] scalar. All symbolic work in this
//! crate uses `BigRational`; numerical verification converts once to
//! `f64` and stays there.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::Coeff;

/// Dimensions of the variable array: `rows` is the number of exchangeable
/// rows n, `cols` is the number of columns k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Shape {
    pub rows: u32,
    pub cols: u32,
}

impl Shape {
    pub fn new(rows: u32, cols: u32) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInput(format!(
                "shape {}x{} must have positive dimensions",
                rows, cols
            )));
        }
        Ok(Shape { rows, cols })
    }

    /// Number of variables in the array.
    pub fn vars(&self) -> usize {
        self.rows as usize * self.cols as usize
    }

    /// Row-major flat index of a 1-based position.
    pub fn flat(&self, row: u32, col: u32) -> u32 {
        (row - 1) * self.cols + (col - 1)
    }

    /// Inverse of [`Shape::flat`]; returns 1-based (row, col).
    pub fn unflat(&self, flat: u32) -> (u32, u32) {
        (flat / self.cols + 1, flat % self.cols + 1)
    }

    pub fn contains(&self, v: VarIndex) -> bool {
        v.row >= 1 && v.row <= self.rows && v.col >= 1 && v.col <= self.cols
    }
}

/// 1-based position in the variable array.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarIndex {
    pub row: u32,
    pub col: u32,
}

impl VarIndex {
    pub fn new(row: u32, col: u32) -> Self {
        VarIndex { row, col }
    }
}

/// Product of variables with positive exponents. The factor list is
/// sorted by flat index and never holds a zero exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    factors: Vec<(u32, u32)>,
}

impl Monomial {
    /// The empty product.
    pub fn one() -> Self {
        Monomial { factors: Vec::new() }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn from_var(flat: u32, exp: u32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial { factors: vec![(flat, exp)] }
        }
    }

    /// Canonicalizes an arbitrary factor list: sorts by index, merges
    /// duplicates, drops zero exponents.
    pub fn from_factors(mut factors: Vec<(u32, u32)>) -> Self {
        factors.retain(|&(_, e)| e > 0);
        factors.sort_unstable_by_key(|&(v, _)| v);
        let mut merged: Vec<(u32, u32)> = Vec::with_capacity(factors.len());
        for (v, e) in factors {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => merged.push((v, e)),
            }
        }
        Monomial { factors: merged }
    }

    pub fn factors(&self) -> &[(u32, u32)] {
        &self.factors
    }

    /// Total degree.
    pub fn degree(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64).sum()
    }

    pub fn exponent(&self, flat: u32) -> u32 {
        self.factors
            .binary_search_by_key(&flat, |&(v, _)| v)
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    /// Product of two monomials (merge of sorted factor lists).
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut a, mut b) = (self.factors.iter().peekable(), other.factors.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(va, ea)), Some(&&(vb, eb))) => {
                    if va < vb {
                        out.push((va, ea));
                        a.next();
                    } else if va > vb {
                        out.push((vb, eb));
                        b.next();
                    } else {
                        out.push((va, ea + eb));
                        a.next();
                        b.next();
                    }
                }
                (Some(&&f), None) => {
                    out.push(f);
                    a.next();
                }
                (None, Some(&&f)) => {
                    out.push(f);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Monomial { factors: out }
    }

    /// Applies a flat-index map and re-canonicalizes. Indices may merge;
    /// their exponents then add.
    pub fn remap(&self, f: impl Fn(u32) -> u32) -> Monomial {
        Monomial::from_factors(self.factors.iter().map(|&(v, e)| (f(v), e)).collect())
    }

    fn max_flat(&self) -> Option<u32> {
        self.factors.last().map(|&(v, _)| v)
    }
}

/// Graded lexicographic order on the flattened exponent vector: compare
/// total degree first, then the dense exponent vectors lexicographically.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (da, db) = (self.degree(), other.degree());
        if da != db {
            return da.cmp(&db);
        }
        let mut a = self.factors.iter();
        let mut b = other.factors.iter();
        let (mut pa, mut pb) = (a.next(), b.next());
        loop {
            match (pa, pb) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va < vb {
                        // nonzero exponent at an earlier position
                        return Ordering::Greater;
                    }
                    if va > vb {
                        return Ordering::Less;
                    }
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                    pa = a.next();
                    pb = b.next();
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total or weighted degree; the zero polynomial gets `MinusInfinity`,
/// which sorts below every finite degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    MinusInfinity,
    Finite(u64),
}

impl Degree {
    pub fn finite(&self) -> Option<u64> {
        match self {
            Degree::MinusInfinity => None,
            Degree::Finite(d) => Some(*d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::MinusInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{}", d),
        }
    }
}

/// Sparse polynomial over a fixed variable array. Canonical form: no
/// zero coefficients, every variable inside the shape.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polynomial<C> {
    shape: Shape,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> Polynomial<C> {
    pub fn zero(shape: Shape) -> Self {
        Polynomial { shape, terms: BTreeMap::new() }
    }

    pub fn constant(shape: Shape, c: C) -> Self {
        let mut p = Polynomial::zero(shape);
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn one(shape: Shape) -> Self {
        Polynomial::constant(shape, C::one())
    }

    /// The variable `x[v.row, v.col]` as a polynomial.
    pub fn var(shape: Shape, v: VarIndex) -> Result<Self> {
        Polynomial::var_pow(shape, v, 1)
    }

    pub fn var_pow(shape: Shape, v: VarIndex, exp: u32) -> Result<Self> {
        if !shape.contains(v) {
            return Err(Error::IndexOutOfRange { row: v.row, col: v.col, shape });
        }
        let mut p = Polynomial::zero(shape);
        p.add_term(Monomial::from_var(shape.flat(v.row, v.col), exp), C::one());
        Ok(p)
    }

    /// Builds from raw (monomial, coefficient) pairs, merging duplicates.
    pub fn from_terms(shape: Shape, terms: impl IntoIterator<Item = (Monomial, C)>) -> Result<Self> {
        let mut p = Polynomial::zero(shape);
        for (m, c) in terms {
            if let Some(v) = m.max_flat() {
                if v as usize >= shape.vars() {
                    let (row, col) = shape.unflat(v);
                    return Err(Error::IndexOutOfRange { row, col, shape });
                }
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    /// Terms in descending canonical order (leading term first).
    pub fn terms_desc(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter().rev()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&C> {
        self.terms.get(m)
    }

    /// Adds `c * m` in place, keeping the canonical no-zero invariant.
    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.shape != other.shape {
            Err(Error::ShapeMismatch { left: self.shape, right: other.shape })
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect();
        Polynomial { shape: self.shape, terms }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Polynomial::zero(self.shape);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, k)| (m.clone(), k.clone() * c.clone()))
            .collect();
        Polynomial { shape: self.shape, terms }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = Polynomial::zero(self.shape);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut result = Polynomial::one(self.shape);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).expect("same shape");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same shape");
            }
        }
        result
    }

    /// Formal partial derivative with respect to one variable.
    pub fn partial(&self, v: VarIndex) -> Result<Self> {
        if !self.shape.contains(v) {
            return Err(Error::IndexOutOfRange { row: v.row, col: v.col, shape: self.shape });
        }
        let flat = self.shape.flat(v.row, v.col);
        let mut out = Polynomial::zero(self.shape);
        for (m, c) in &self.terms {
            let e = m.exponent(flat);
            if e == 0 {
                continue;
            }
            let factors = m
                .factors()
                .iter()
                .map(|&(w, ew)| if w == flat { (w, ew - 1) } else { (w, ew) })
                .collect();
            out.add_term(Monomial::from_factors(factors), c.clone() * C::from_int(e as i64));
        }
        Ok(out)
    }

    /// Evaluates at a flat row-major point of length n*k.
    pub fn evaluate(&self, point: &[C]) -> Result<C> {
        if point.len() != self.shape.vars() {
            return Err(Error::ArityMismatch { expected: self.shape.vars(), got: point.len() });
        }
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.factors() {
                t = t * num_traits::pow(point[v as usize].clone(), e as usize);
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// Total degree, `MinusInfinity` for the zero polynomial.
    pub fn degree(&self) -> Degree {
        self.terms
            .keys()
            .map(|m| m.degree())
            .max()
            .map_or(Degree::MinusInfinity, Degree::Finite)
    }

    /// Rebuilds the polynomial over a new shape, sending each variable
    /// position through `map` (1-based in and out). Distinct variables may
    /// collapse; exponents then add within each monomial, as under a
    /// substitution of variables.
    pub fn remap_vars(
        &self,
        new_shape: Shape,
        map: impl Fn(u32, u32) -> (u32, u32),
    ) -> Result<Self> {
        let mut out = Polynomial::zero(new_shape);
        for (m, c) in &self.terms {
            let mut factors = Vec::with_capacity(m.factors().len());
            for &(v, e) in m.factors() {
                let (row, col) = self.shape.unflat(v);
                let (nr, nc) = map(row, col);
                if !new_shape.contains(VarIndex::new(nr, nc)) {
                    return Err(Error::IndexOutOfRange { row: nr, col: nc, shape: new_shape });
                }
                factors.push((new_shape.flat(nr, nc), e));
            }
            out.add_term(Monomial::from_factors(factors), c.clone());
        }
        Ok(out)
    }

    /// Applies a row permutation: `perm[i-1]` is the new 1-based row of
    /// old row i. Shape is unchanged.
    pub fn apply_row_permutation(&self, perm: &[u32]) -> Result<Self> {
        if perm.len() != self.shape.rows as usize {
            return Err(Error::ArityMismatch { expected: self.shape.rows as usize, got: perm.len() });
        }
        self.remap_vars(self.shape, |row, col| (perm[(row - 1) as usize], col))
    }

    /// Swaps two rows; used by the symmetry checks.
    pub fn swap_rows(&self, a: u32, b: u32) -> Result<Self> {
        self.remap_vars(self.shape, |row, col| {
            let r = if row == a { b } else if row == b { a } else { row };
            (r, col)
        })
    }
}

impl Polynomial<BigRational> {
    /// One-way conversion onto the floating path.
    pub fn to_float(&self) -> Polynomial<f64> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c.to_f64().expect("rational fits in f64")))
            .collect();
        Polynomial { shape: self.shape, terms }
    }
}

fn write_coeff_and_monomial<C: Coeff>(
    f: &mut fmt::Formatter<'_>,
    shape: Shape,
    m: &Monomial,
    c: &C,
) -> fmt::Result {
    write!(f, "{}", c)?;
    for &(v, e) in m.factors() {
        let (row, col) = shape.unflat(v);
        if e == 1 {
            write!(f, " x[{},{}]", row, col)?;
        } else {
            write!(f, " x[{},{}]^{}", row, col, e)?;
        }
    }
    Ok(())
}

/// Canonical text format: a `poly n=<n> k=<k>` header, then one term per
/// line in descending canonical order, `<coeff> x[i,j]^e ...` with `^1`
/// omitted. The zero polynomial is the header followed by `0`.
impl<C: Coeff> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "poly n={} k={}", self.shape.rows, self.shape.cols)?;
        if self.is_zero() {
            return writeln!(f, "0");
        }
        for (m, c) in self.terms_desc() {
            write_coeff_and_monomial(f, self.shape, m, c)?;
            writeln!(f)?;
        }
        Ok(())
    }
}

fn parse_header(line: &str, lineno: usize) -> Result<Shape> {
    let err = |msg: &str| Error::Parse { line: lineno, col: 1, msg: msg.to_string() };
    let rest = line
        .strip_prefix("poly")
        .ok_or_else(|| err("expected 'poly n=<n> k=<k>' header"))?;
    let mut n = None;
    let mut k = None;
    for tok in rest.split_whitespace() {
        if let Some(v) = tok.strip_prefix("n=") {
            n = Some(v.parse::<u32>().map_err(|_| err("bad n= value"))?);
        } else if let Some(v) = tok.strip_prefix("k=") {
            k = Some(v.parse::<u32>().map_err(|_| err("bad k= value"))?);
        } else {
            return Err(err("unexpected token in header"));
        }
    }
    match (n, k) {
        (Some(n), Some(k)) => Shape::new(n, k),
        _ => Err(err("header must give both n= and k=")),
    }
}

fn parse_factor(tok: &str, shape: Shape, lineno: usize) -> Result<(u32, u32)> {
    let err = |msg: String| Error::Parse { line: lineno, col: 1, msg };
    let body = tok
        .strip_prefix("x[")
        .ok_or_else(|| err(format!("expected variable token, got '{}'", tok)))?;
    let (idx, exp) = match body.split_once(']') {
        Some((idx, rest)) => {
            let exp = if rest.is_empty() {
                1
            } else {
                rest.strip_prefix('^')
                    .and_then(|e| e.parse::<u32>().ok())
                    .filter(|&e| e > 0)
                    .ok_or_else(|| err(format!("bad exponent in '{}'", tok)))?
            };
            (idx, exp)
        }
        None => return Err(err(format!("unterminated variable token '{}'", tok))),
    };
    let (r, c) = idx
        .split_once(',')
        .ok_or_else(|| err(format!("expected 'x[row,col]' in '{}'", tok)))?;
    let row = r.trim().parse::<u32>().map_err(|_| err(format!("bad row in '{}'", tok)))?;
    let col = c.trim().parse::<u32>().map_err(|_| err(format!("bad column in '{}'", tok)))?;
    if !shape.contains(VarIndex::new(row, col)) {
        return Err(Error::IndexOutOfRange { row, col, shape });
    }
    Ok((shape.flat(row, col), exp))
}

/// Parses the canonical text format with exact rational coefficients.
/// Lines starting with `#` and blank lines are ignored. Terms may appear
/// in any order and may repeat; the result is canonical.
pub fn parse_poly(src: &str) -> Result<Polynomial<BigRational>> {
    let mut shape: Option<Shape> = None;
    let mut poly: Option<Polynomial<BigRational>> = None;
    for (i, raw) in src.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match shape {
            None => {
                let s = parse_header(line, lineno)?;
                shape = Some(s);
                poly = Some(Polynomial::zero(s));
            }
            Some(s) => {
                let p = poly.as_mut().expect("set with shape");
                let mut toks = line.split_whitespace();
                let coeff_tok = toks.next().expect("nonempty line");
                let coeff: BigRational = coeff_tok.parse().map_err(|_| Error::Parse {
                    line: lineno,
                    col: 1,
                    msg: format!("bad coefficient '{}'", coeff_tok),
                })?;
                let mut factors = Vec::new();
                for tok in toks {
                    factors.push(parse_factor(tok, s, lineno)?);
                }
                if factors.is_empty() && coeff.is_zero() {
                    continue; // the explicit zero line
                }
                p.add_term(Monomial::from_factors(factors), coeff);
            }
        }
    }
    poly.ok_or(Error::Parse { line: 1, col: 1, msg: "missing 'poly' header".to_string() })
}

/// Renders one monomial the way the canonical format does, without a
/// coefficient; handy for error messages.
pub fn monomial_string(shape: Shape, m: &Monomial) -> String {
    if m.is_one() {
        return "1".to_string();
    }
    let mut out = String::new();
    for &(v, e) in m.factors() {
        let (row, col) = shape.unflat(v);
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(&format!("x[{},{}]", row, col));
        if e > 1 {
            out.push_str(&format!("^{}", e));
        }
    }
    out
}

/// Exact sign-aware helper used by verification: true if the rational is
/// strictly negative.
pub fn is_strictly_negative(x: &BigRational) -> bool {
    x.is_negative()
}
