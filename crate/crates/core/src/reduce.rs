//! Partition-indexed restriction of row-exchangeable problems.
//!
//! Points with at most m distinct rows are covered, up to row
//! permutation, by the subspaces on which equal rows come in contiguous
//! blocks of sizes lambda_1 >= ... >= lambda_ell — one subspace per
//! partition of n into ell <= m parts. Restricting a polynomial to such a
//! subspace renames every block to a single fresh row, giving an instance
//! on an (ell, k) array, and the sphere constraint becomes the weighted
//! form sum_c lambda_c |y_c|^2 = r. A doubled array (a Hessian form)
//! needs nothing special: renaming a row moves its x block and its
//! direction block together, which matches restricting the Hessian form
//! of the restricted polynomial.

use std::fmt;

use itertools::Itertools;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial, Shape};
use crate::scalar::Coeff;
use crate::sym::{ExpTuple, PowerSumExpr};
use crate::Rat;

/// Nonincreasing positive integers; a partition of their sum.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("a partition needs at least one part".into()));
        }
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidPartition("parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "parts must be nonincreasing, got ({})",
                parts.iter().join(",")
            )));
        }
        let mut total: u64 = 0;
        for &p in &parts {
            total += p as u64;
            if total > u32::MAX as u64 {
                return Err(Error::InvalidPartition("partition total overflows".into()));
            }
        }
        Ok(Partition { parts })
    }

    /// The partitioned total n.
    pub fn n(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Number of parts.
    pub fn ell(&self) -> u32 {
        self.parts.len() as u32
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// 1-based block index of a 1-based row under contiguous blocks.
    pub fn block_of_row(&self, row: u32) -> u32 {
        let mut acc = 0u32;
        for (c, &p) in self.parts.iter().enumerate() {
            acc += p;
            if row <= acc {
                return c as u32 + 1;
            }
        }
        self.parts.len() as u32
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.parts.iter().join(","))
    }
}

struct Frame {
    rem: u32,
    slots: u32,
    next: u32,
}

/// Partitions of n into exactly ell parts, in decreasing lexicographic
/// order, generated lazily.
pub struct PartitionIter {
    stack: Vec<Frame>,
    prefix: Vec<u32>,
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        loop {
            let top = self.stack.last_mut()?;
            let (rem, slots) = (top.rem, top.slots);
            let lo = rem.div_ceil(slots);
            if top.next < lo {
                self.stack.pop();
                self.prefix.pop();
                continue;
            }
            let p = top.next;
            top.next -= 1;
            if slots == 1 {
                let mut parts = self.prefix.clone();
                parts.push(p);
                return Some(Partition { parts });
            }
            self.prefix.push(p);
            let rem2 = rem - p;
            let slots2 = slots - 1;
            self.stack.push(Frame { rem: rem2, slots: slots2, next: p.min(rem2 - slots2 + 1) });
        }
    }
}

/// Partitions of n into exactly ell parts, largest first within each
/// partition and decreasing lexicographically across the stream.
pub fn enumerate_partitions(n: u32, ell: u32) -> Result<PartitionIter> {
    if ell == 0 || ell > n {
        return Err(Error::InvalidPartition(format!(
            "need 1 <= ell <= n, got ell={} n={}",
            ell, n
        )));
    }
    Ok(PartitionIter {
        stack: vec![Frame { rem: n, slots: ell, next: n - ell + 1 }],
        prefix: Vec::new(),
    })
}

/// All partitions of n into at most m parts: ell = 1, then 2, and so on.
pub fn enumerate_subspaces_up_to(n: u32, m: u32) -> Result<impl Iterator<Item = Partition>> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidPartition(format!("need n >= 1 and m >= 1, got n={} m={}", n, m)));
    }
    let top = m.min(n);
    Ok((1..=top).flat_map(move |ell| enumerate_partitions(n, ell).expect("1 <= ell <= n")))
}

/// A polynomial restricted to a block subspace, together with the
/// partition that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedInstance<C = Rat> {
    pub lam: Partition,
    pub q: Polynomial<C>,
}

impl<C: Coeff> fmt::Display for ReducedInstance<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lambda = ({})", self.lam.parts().iter().join(","))?;
        write!(f, "{}", self.q)
    }
}

/// Substitutes each block's rows by one shared row: row i of `f` becomes
/// row c(i) of the instance, with c the contiguous block map of `lam`.
pub fn restrict<C: Coeff>(f: &Polynomial<C>, lam: &Partition) -> Result<ReducedInstance<C>> {
    let shape = f.shape();
    if lam.n() != shape.rows {
        return Err(Error::InvalidPartition(format!(
            "partition of {} does not match {} rows",
            lam.n(),
            shape.rows
        )));
    }
    // precompute the block of every row
    let mut block = Vec::with_capacity(shape.rows as usize);
    for (c, &p) in lam.parts().iter().enumerate() {
        block.extend(std::iter::repeat(c as u32 + 1).take(p as usize));
    }
    let target = Shape::new(lam.ell(), shape.cols)?;
    let q = f.remap_vars(target, |row, col| (block[(row - 1) as usize], col))?;
    Ok(ReducedInstance { lam: lam.clone(), q })
}

/// All restrictions of `f` for partitions into at most m parts, lazily.
pub fn reduction_plan<'a, C: Coeff>(
    f: &'a Polynomial<C>,
    m: u32,
) -> Result<impl Iterator<Item = ReducedInstance<C>> + 'a> {
    let n = f.shape().rows;
    let stream = enumerate_subspaces_up_to(n, m)?;
    Ok(stream.map(move |lam| restrict(f, &lam).expect("partition matches the row count")))
}

/// The weighted power sum sum_c lambda_c * y_c^alpha on an (ell, k) array.
fn weighted_power_sum<C: Coeff>(
    shape: Shape,
    alpha: &ExpTuple,
    parts: &[u32],
) -> Result<Polynomial<C>> {
    if alpha.len() != shape.cols as usize {
        return Err(Error::ArityMismatch { expected: shape.cols as usize, got: alpha.len() });
    }
    let mut p = Polynomial::zero(shape);
    for (c, &lam) in parts.iter().enumerate() {
        let row = c as u32 + 1;
        let mut factors = Vec::new();
        for (j, &e) in alpha.0.iter().enumerate() {
            if e > 0 {
                factors.push((shape.flat(row, j as u32 + 1), e));
            }
        }
        p.add_term(Monomial::from_factors(factors), C::from_int(lam as i64));
    }
    Ok(p)
}

fn expand_reduced_with<C: Coeff>(
    expr: &PowerSumExpr,
    lam: &Partition,
    conv: &impl Fn(&Rat) -> C,
) -> Result<Polynomial<C>> {
    let shape = Shape::new(lam.ell(), expr.k())?;
    let mut out = Polynomial::zero(shape);
    for (key, coeff) in expr.terms() {
        let mut term = Polynomial::constant(shape, conv(coeff));
        for (alpha, e) in key {
            let p: Polynomial<C> = weighted_power_sum(shape, alpha, lam.parts())?;
            term = term.mul(&p.pow(*e))?;
        }
        out = out.add(&term)?;
    }
    Ok(out)
}

/// Expands a power-sum expression directly into its restriction: each
/// power sum becomes the weighted power sum of the partition. Agrees with
/// [`restrict`] on the expanded polynomial but costs only the instance
/// size, not the full n-row expansion.
pub fn expand_reduced(expr: &PowerSumExpr, lam: &Partition) -> Result<Polynomial<Rat>> {
    expand_reduced_with(expr, lam, &|r| r.clone())
}

/// [`expand_reduced`] straight onto the floating path.
pub fn expand_reduced_float(expr: &PowerSumExpr, lam: &Partition) -> Result<Polynomial<f64>> {
    expand_reduced_with(expr, lam, &|r| r.to_f64().expect("rational fits in f64"))
}

/// Reads an instance file: a `lambda = (...)` header followed by the
/// canonical polynomial format.
pub fn parse_reduced_instance(src: &str) -> Result<ReducedInstance<Rat>> {
    let mut header: Option<(usize, &str)> = None;
    let mut rest_start = 0usize;
    for (idx, line) in src.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        header = Some((idx, t));
        rest_start = idx + 1;
        break;
    }
    let (line_no, header) = header.ok_or(Error::Parse {
        line: 1,
        col: 1,
        msg: "expected a lambda header".into(),
    })?;
    let body = header.strip_prefix("lambda").ok_or(Error::Parse {
        line: line_no + 1,
        col: 1,
        msg: "instance files start with `lambda = (...)`".into(),
    })?;
    let body = body.trim_start();
    let body = body.strip_prefix('=').ok_or(Error::Parse {
        line: line_no + 1,
        col: 1,
        msg: "expected `=` after lambda".into(),
    })?;
    let body = body.trim();
    let inner = body
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or(Error::Parse {
            line: line_no + 1,
            col: 1,
            msg: "expected a parenthesized part list".into(),
        })?;
    let mut parts = Vec::new();
    for piece in inner.split(',') {
        let piece = piece.trim();
        let v: u32 = piece.parse().map_err(|_| Error::Parse {
            line: line_no + 1,
            col: 1,
            msg: format!("bad part `{}`", piece),
        })?;
        parts.push(v);
    }
    let lam = Partition::new(parts)?;
    let poly_src: String = src
        .lines()
        .skip(rest_start)
        .map(|l| format!("{}\n", l))
        .collect();
    let q = crate::poly::parse_poly(&poly_src)?;
    if q.shape().rows != lam.ell() {
        return Err(Error::InvalidPartition(format!(
            "lambda has {} parts but the polynomial has {} rows",
            lam.ell(),
            q.shape().rows
        )));
    }
    Ok(ReducedInstance { lam, q })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::count_partitions;
    use crate::poly::VarIndex;
    use crate::sym::{monomial_function, power_sum, to_power_sums};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rat(n: i64) -> Rat {
        Rat::from_integer(n.into())
    }

    fn parts(p: &[u32]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    #[test]
    fn partition_constructor_validates() {
        assert!(Partition::new(vec![]).is_err());
        assert!(Partition::new(vec![3, 0]).is_err());
        assert!(Partition::new(vec![2, 3]).is_err());
        let p = parts(&[3, 2, 2]);
        assert_eq!(p.n(), 7);
        assert_eq!(p.ell(), 3);
        assert_eq!(p.block_of_row(1), 1);
        assert_eq!(p.block_of_row(3), 1);
        assert_eq!(p.block_of_row(4), 2);
        assert_eq!(p.block_of_row(7), 3);
    }

    #[test]
    fn enumeration_order_and_counts() {
        let got: Vec<Partition> = enumerate_partitions(6, 3).unwrap().collect();
        assert_eq!(got, vec![parts(&[4, 1, 1]), parts(&[3, 2, 1]), parts(&[2, 2, 2])]);
        let got: Vec<Partition> = enumerate_subspaces_up_to(4, 2).unwrap().collect();
        assert_eq!(got, vec![parts(&[4]), parts(&[3, 1]), parts(&[2, 2])]);
        for n in 1..=14u32 {
            for ell in 1..=n {
                let stream: Vec<Partition> = enumerate_partitions(n, ell).unwrap().collect();
                assert_eq!(stream.len() as u128, count_partitions(n, ell).unwrap());
                for w in stream.windows(2) {
                    assert!(w[0].parts() > w[1].parts(), "not decreasing lex: {} {}", w[0], w[1]);
                }
                for p in &stream {
                    assert_eq!(p.n(), n);
                    assert_eq!(p.ell(), ell);
                }
            }
        }
        assert!(enumerate_partitions(3, 4).is_err());
        assert!(enumerate_partitions(3, 0).is_err());
    }

    #[test]
    fn restriction_of_power_sums_is_weighted() {
        let shape = Shape::new(5, 2).unwrap();
        let alpha = ExpTuple::new(vec![2, 1]).unwrap();
        let f: Polynomial<Rat> = power_sum(shape, &alpha).unwrap();
        let lam = parts(&[3, 2]);
        let inst = restrict(&f, &lam).unwrap();
        let target = Shape::new(2, 2).unwrap();
        let expect: Polynomial<Rat> = weighted_power_sum(target, &alpha, lam.parts()).unwrap();
        assert_eq!(inst.q, expect);
        // the all-singletons partition is a pure renaming
        let lam1 = parts(&[1, 1, 1, 1, 1]);
        assert_eq!(restrict(&f, &lam1).unwrap().q, f);
    }

    #[test]
    fn restriction_is_substitution() {
        // q(y) must equal f at the block-expanded point
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for _ in 0..30 {
            let n = rng.gen_range(2..=6);
            let k = rng.gen_range(1..=2);
            let shape = Shape::new(n, k).unwrap();
            let mut f = Polynomial::<Rat>::zero(shape);
            for _ in 0..6 {
                let mut factors = Vec::new();
                for v in 0..shape.vars() as u32 {
                    let e = rng.gen_range(0..=2);
                    if e > 0 && rng.gen_bool(0.5) {
                        factors.push((v, e));
                    }
                }
                f.add_term(Monomial::from_factors(factors), rat(rng.gen_range(-3..=3)));
            }
            // random partition of n
            let mut remaining = n;
            let mut ps = Vec::new();
            while remaining > 0 {
                let p = rng.gen_range(1..=remaining);
                ps.push(p);
                remaining -= p;
            }
            ps.sort_unstable_by(|a, b| b.cmp(a));
            let lam = Partition::new(ps).unwrap();
            let inst = restrict(&f, &lam).unwrap();
            let y: Vec<Rat> = (0..inst.q.shape().vars()).map(|_| rat(rng.gen_range(-3..=3))).collect();
            let mut x = vec![rat(0); shape.vars()];
            for row in 1..=n {
                let block = lam.block_of_row(row);
                for col in 1..=k {
                    x[shape.flat(row, col) as usize] =
                        y[inst.q.shape().flat(block, col) as usize].clone();
                }
            }
            assert_eq!(inst.q.evaluate(&y).unwrap(), f.evaluate(&x).unwrap());
        }
    }

    #[test]
    fn expand_reduced_matches_direct_restriction() {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        for _ in 0..15 {
            let n = rng.gen_range(2..=5);
            let k = rng.gen_range(1..=2);
            let shape = Shape::new(n, k).unwrap();
            // random symmetric polynomial from monomial functions
            let mut f = Polynomial::<Rat>::zero(shape);
            for _ in 0..rng.gen_range(1..=3) {
                let ell = rng.gen_range(1..=2.min(n));
                let tuples: Vec<ExpTuple> = (0..ell)
                    .map(|_| {
                        let t: Vec<u32> = (0..k).map(|_| rng.gen_range(0..=2)).collect();
                        t
                    })
                    .filter_map(|t| ExpTuple::new(t).ok())
                    .collect();
                if tuples.is_empty() {
                    continue;
                }
                let orbit: Polynomial<Rat> = monomial_function(shape, &tuples).unwrap();
                f = f.add(&orbit.scale(&rat(rng.gen_range(-3..=3)))).unwrap();
            }
            if f.is_zero() {
                continue;
            }
            let expr = to_power_sums(&f).unwrap();
            for m in 1..=n {
                for lam in enumerate_partitions(n, m).unwrap() {
                    let direct = restrict(&f, &lam).unwrap().q;
                    let via_ps = expand_reduced(&expr, &lam).unwrap();
                    assert_eq!(via_ps, direct, "partition {} of {}", lam, f);
                    let via_float = expand_reduced_float(&expr, &lam).unwrap();
                    assert_eq!(via_float, direct.to_float());
                }
            }
        }
    }

    #[test]
    fn plan_counts_match_partition_counts() {
        let shape = Shape::new(7, 1).unwrap();
        let f: Polynomial<Rat> = power_sum(shape, &ExpTuple::new(vec![2]).unwrap()).unwrap();
        for m in 1..=7u32 {
            let total: usize = reduction_plan(&f, m).unwrap().count();
            let expect: u128 = (1..=m).map(|ell| count_partitions(7, ell).unwrap()).sum();
            assert_eq!(total as u128, expect);
        }
        // m past n adds nothing
        let all: usize = reduction_plan(&f, 7).unwrap().count();
        let beyond: usize = reduction_plan(&f, 12).unwrap().count();
        assert_eq!(all, beyond);
    }

    #[test]
    fn instance_files_round_trip() {
        let shape = Shape::new(6, 2).unwrap();
        let f: Polynomial<Rat> = power_sum(shape, &ExpTuple::new(vec![1, 1]).unwrap())
            .unwrap()
            .pow(2)
            .sub(&power_sum(shape, &ExpTuple::new(vec![0, 2]).unwrap()).unwrap())
            .unwrap();
        let lam = parts(&[3, 2, 1]);
        let inst = restrict(&f, &lam).unwrap();
        let text = inst.to_string();
        assert!(text.starts_with("lambda = (3,2,1)\n"));
        let back = parse_reduced_instance(&text).unwrap();
        assert_eq!(back.lam, inst.lam);
        assert_eq!(back.q, inst.q);
        // comments and blank lines before the header are fine
        let padded = format!("# instance\n\n{}", text);
        assert_eq!(parse_reduced_instance(&padded).unwrap().q, inst.q);
        // corrupt headers are rejected with a position
        assert!(parse_reduced_instance("poly n=2 k=1\n0\n").is_err());
        assert!(parse_reduced_instance("lambda = (2,3)\npoly n=2 k=1\n0\n").is_err());
    }

    #[test]
    fn respects_doubled_arrays() {
        // restriction commutes with forming the Hessian quadratic form
        use crate::convexity::hessian_form;
        let shape = Shape::new(4, 1).unwrap();
        let f: Polynomial<Rat> = power_sum(shape, &ExpTuple::new(vec![2]).unwrap())
            .unwrap()
            .pow(2);
        let g = hessian_form(&f).unwrap();
        for m in 1..=4u32 {
            for lam in enumerate_partitions(4, m).unwrap() {
                let lhs = restrict(&g, &lam).unwrap().q;
                let rhs = hessian_form(&restrict(&f, &lam).unwrap().q).unwrap();
                assert_eq!(lhs, rhs, "partition {}", lam);
            }
        }
    }

    #[test]
    fn symmetric_restriction_ignores_row_assignment() {
        // For a row-symmetric f only the part sizes matter, not which rows
        // land in which block. Send rows {1,3,5} to block 1 and {2,4} to
        // block 2 and compare against the standard leading-blocks layout.
        let shape = Shape::new(5, 2).unwrap();
        let p = |a: &[u32]| {
            crate::sym::power_sum::<Rat>(shape, &crate::sym::ExpTuple::new(a.to_vec()).unwrap())
                .unwrap()
        };
        let f = p(&[2, 0])
            .mul(&p(&[0, 1]))
            .unwrap()
            .add(&p(&[1, 1]).pow(2))
            .unwrap()
            .sub(&p(&[3, 0]))
            .unwrap();
        assert!(crate::sym::is_symmetric(&f));
        let lam = parts(&[3, 2]);
        let standard = restrict(&f, &lam).unwrap().q;
        let scrambled_block = |row: u32| if row % 2 == 1 { 1 } else { 2 };
        let target = Shape::new(2, 2).unwrap();
        let scrambled = f
            .remap_vars(target, |row, col| (scrambled_block(row), col))
            .unwrap();
        assert_eq!(standard, scrambled);
    }

    #[test]
    fn block_expansion_uses_var_indices_consistently() {
        let shape = Shape::new(3, 2).unwrap();
        let x = |r, c| Polynomial::<Rat>::var(shape, VarIndex::new(r, c)).unwrap();
        let f = x(1, 1).mul(&x(2, 2)).unwrap().add(&x(3, 1).pow(2)).unwrap();
        let lam = parts(&[2, 1]);
        let inst = restrict(&f, &lam).unwrap();
        let t = Shape::new(2, 2).unwrap();
        let y = |r, c| Polynomial::<Rat>::var(t, VarIndex::new(r, c)).unwrap();
        let expect = y(1, 1).mul(&y(1, 2)).unwrap().add(&y(2, 1).pow(2)).unwrap();
        assert_eq!(inst.q, expect);
    }
}
