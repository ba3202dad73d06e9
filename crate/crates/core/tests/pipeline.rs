//! Cross-module integration: rewriting, bounds, Hessian forms, partition
//! instances and the numerical sweeps working together on one input.

use multisym::bounds::{best_kappa, exponent_profile, KappaMethod, Weights};
use multisym::convexity::{best_hessian_kappa, diagonal_restriction, hessian_form};
use multisym::reduce::{reduction_plan, restrict, Partition};
use multisym::sym::{
    is_symmetric, power_sum, rewrite_in_power_sums, symmetrize, to_power_sums, ExpTuple,
};
use multisym::verify::{
    min_on_reduced, min_on_sphere, nonneg_check, NonnegOutcome, SphereSpec,
};
use multisym::{Poly, Rat, Shape, VarIndex};

fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

fn p(shape: Shape, a: &[u32]) -> Poly {
    power_sum(shape, &ExpTuple::new(a.to_vec()).unwrap()).unwrap()
}

/// The running 2-column example family, with unit parameters.
fn example_family(n: u32) -> Poly {
    let s = Shape::new(n, 2).unwrap();
    p(s, &[4, 0])
        .add(&p(s, &[1, 0]).pow(4))
        .unwrap()
        .sub(&p(s, &[1, 0]).pow(2).mul(&p(s, &[1, 1])).unwrap())
        .unwrap()
        .sub(&p(s, &[3, 0]).mul(&p(s, &[0, 1])).unwrap())
        .unwrap()
        .sub(&p(s, &[1, 0]).mul(&p(s, &[0, 1]).pow(2)).unwrap())
        .unwrap()
        .add(&p(s, &[1, 0]).pow(2))
        .unwrap()
        .add(&p(s, &[1, 1]))
        .unwrap()
}

#[test]
fn family_best_bound_is_the_fitted_simplex() {
    // at n = 9 the raw value 8 survives the clamp
    let f = example_family(9);
    let b = best_kappa(&f, 6).unwrap();
    assert_eq!(b.method, KappaMethod::SimplexFit);
    assert_eq!(b.value, 8);
    assert_eq!(b.raw, 8);
    assert!(!b.n_clamped);

    // at n = 5 the same formula clamps to n
    let b5 = best_kappa(&example_family(5), 6).unwrap();
    assert_eq!(b5.raw, 8);
    assert_eq!(b5.value, 5);
    assert!(b5.n_clamped);
}

#[test]
fn univariate_quartic_gets_the_half_degree_bound() {
    let s = Shape::new(6, 1).unwrap();
    let f = p(s, &[4]).add(&p(s, &[1]).pow(2)).unwrap();
    let b = best_kappa(&f, 6).unwrap();
    assert_eq!(b.method, KappaMethod::HalfDegreeK1);
    assert_eq!(b.value, 2);
}

#[test]
fn rewrite_reduce_and_verify_agree_on_one_polynomial() {
    // one polynomial driven through every stage
    let n = 5;
    let s = Shape::new(n, 1).unwrap();
    let f = p(s, &[4])
        .add(&p(s, &[2]).pow(2))
        .unwrap()
        .sub(&p(s, &[1]).mul(&p(s, &[3])).unwrap())
        .unwrap();
    assert!(is_symmetric(&f));

    // rewriting round trip
    let (expr, _deg) = rewrite_in_power_sums(&f, &Weights::ones(1)).unwrap();
    assert_eq!(expr.expand(n).unwrap(), f);

    // restriction commutes with the Hessian form
    let lam = Partition::new(vec![3, 2]).unwrap();
    let g = hessian_form(&f).unwrap();
    let left = restrict(&g, &lam).unwrap().q;
    let right = hessian_form(&restrict(&f, &lam).unwrap().q).unwrap();
    assert_eq!(left, right);

    // the instance sweep at the certified bound reproduces the full
    // sphere minimum
    let b = best_kappa(&f, 6).unwrap();
    let sphere = SphereSpec::new(4.0).unwrap();
    let ff = f.to_float();
    let full = min_on_sphere(&ff, &sphere, 128, 7).unwrap();
    let red = min_on_reduced(&ff, b.value as u32, &sphere, 128, 7).unwrap();
    let tol = 1e-6 * (1.0 + full.value.abs());
    assert!(
        (full.value - red.best.value).abs() <= tol,
        "full {} vs reduced {}",
        full.value,
        red.best.value
    );
}

#[test]
fn hessian_pipeline_certifies_a_convex_quartic() {
    // f = (p_2)^2 + p_2 is convex; its Hessian form never goes negative
    let s = Shape::new(4, 1).unwrap();
    let f = p(s, &[2]).pow(2).add(&p(s, &[2])).unwrap();
    let bound = best_hessian_kappa(&f, None).unwrap();
    let outcome =
        nonneg_check(&hessian_form(&f).unwrap(), bound.value as u32, &[1.0, 4.0], 64, 3).unwrap();
    match outcome {
        NonnegOutcome::NoCounterexample { instances_scanned, min_seen } => {
            assert!(instances_scanned > 0);
            assert!(min_seen >= -1e-9, "min seen {}", min_seen);
        }
        NonnegOutcome::CounterexampleAt { value, .. } => {
            panic!("convex polynomial flagged with exact negative value {}", value)
        }
    }
}

// The diagonal does not always attain the sphere minimum of a convex
// polynomial: (p_1)^2 is convex, its sphere minimum is 0, but on the
// diagonal it is n * r^2. Averaging the row orbit of a point contracts
// the norm, so the convexity argument pins down ball minima and the
// nonnegativity test on A_1, not sphere minima. The reduced sweep must
// therefore report the diagonal value here, strictly above the sphere
// minimum.
#[test]
fn convex_square_of_row_sums_minimizes_off_the_diagonal() {
    let n = 4;
    let s = Shape::new(n, 1).unwrap();
    let f = p(s, &[1]).pow(2);
    let ff = f.to_float();
    let sphere = SphereSpec::new(1.0).unwrap();
    let full = min_on_sphere(&ff, &sphere, 128, 11).unwrap();
    let red = min_on_reduced(&ff, 1, &sphere, 128, 11).unwrap();
    assert!(full.value.abs() < 1e-8, "sphere minimum should be 0, got {}", full.value);
    assert!(
        (red.best.value - n as f64).abs() < 1e-8,
        "diagonal value should be n = {}, got {}",
        n,
        red.best.value
    );

    // the inference that is valid: a convex polynomial that is
    // nonnegative on the diagonal is nonnegative everywhere, because
    // orbit averaging only decreases convex symmetric functions and
    // lands on the diagonal. The diagonal restriction shows it directly.
    let diag = diagonal_restriction(&f).unwrap();
    let y = Poly::var(Shape::new(1, 1).unwrap(), VarIndex::new(1, 1)).unwrap();
    assert_eq!(diag, y.pow(2).scale(&rat((n * n) as i64)));
}

#[test]
fn symmetrize_power_sum_products_round_trip_through_instances() {
    // symmetrized mixed monomials, rewritten, restricted, expanded: the
    // instance polynomial must equal the direct restriction
    let s = Shape::new(4, 2).unwrap();
    let x = |r, c| Poly::var(s, VarIndex::new(r, c)).unwrap();
    let f = symmetrize(&x(1, 1).pow(2).mul(&x(2, 2)).unwrap())
        .unwrap()
        .add(&symmetrize(&x(1, 1).mul(&x(1, 2)).unwrap()).unwrap())
        .unwrap();
    assert!(is_symmetric(&f));
    let expr = to_power_sums(&f).unwrap();
    for inst in reduction_plan(&f, 3).unwrap() {
        let via_ps = multisym::reduce::expand_reduced(&expr, &inst.lam).unwrap();
        assert_eq!(via_ps, inst.q, "mismatch at {}", inst.lam);
    }
}

#[test]
fn profile_drives_the_fit_not_the_coefficients() {
    // scaling coefficients leaves every bound unchanged
    let f = example_family(7);
    let scaled = f.scale(&Rat::new(17.into(), 3.into()));
    let b1 = best_kappa(&f, 6).unwrap();
    let b2 = best_kappa(&scaled, 6).unwrap();
    assert_eq!(b1.value, b2.value);
    assert_eq!(b1.raw, b2.raw);
    assert_eq!(exponent_profile(&f).points().count(), exponent_profile(&scaled).points().count());
}
