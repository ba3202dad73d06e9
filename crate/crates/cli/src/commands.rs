//! Implementations of the CLI subcommands.
//!
//! Every command loads its input through the same sniffing loader: files
//! whose first meaningful line starts with `poly` use the canonical term
//! format, anything else is handed to the expression parser. Commands
//! return their process exit code; 0 is success, 1 flags a failed
//! consistency experiment or a confirmed counterexample, and errors
//! bubble up to exit 2.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use multisym::bounds::{
    best_kappa, exponent_profile, kappa_column_degrees, kappa_degree_power, kappa_fitted_profile,
    kappa_half_degree_k1, kappa_weighted, KappaBound, Profile, Weights,
};
use multisym::convexity::{
    best_hessian_kappa, e_gf_profile, h_profile, hessian_form, kappa_hessian_auto_simplex,
    kappa_hessian_degree, kappa_hessian_refined, kappa_hessian_weighted, quadratic_convexity,
    QuadraticVerdict,
};
use multisym::reduce::{enumerate_partitions, expand_reduced, Partition};
use multisym::sym::{is_symmetric, to_power_sums};
use multisym::verify::{
    expand_point, kappa_consistency_experiment, min_reduced_instance_ps, SphereSpec,
    CONSISTENCY_TOL, NEGATIVITY_TRIGGER,
};
use multisym::{parse_poly, Degree, Error, Poly, Rat, Result};
use num::{Signed, ToPrimitive};
use serde_json::{json, Value};

/// Reads a polynomial from a canonical `poly` file or the expression
/// language, deciding by the first meaningful line.
pub fn load_poly(path: &Path) -> Result<Poly> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {}", path.display(), e)))?;
    let head = src
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    if head.starts_with("poly") {
        parse_poly(&src)
    } else if head.starts_with("psexpr") {
        Err(Error::InvalidInput(
            "power-sum expression files carry no row count; supply a 'poly' file or an 'n=.. k=..;' expression".into(),
        ))
    } else if head.starts_with("lambda") {
        Err(Error::InvalidInput(
            "this looks like a partition instance file; commands take the source polynomial instead".into(),
        ))
    } else {
        crate::expr::parse_expression(&src)
    }
}

fn degree_json(d: Degree) -> Value {
    match d {
        Degree::Finite(d) => json!(d),
        Degree::MinusInfinity => Value::Null,
    }
}

fn profile_json(e: &Profile) -> Value {
    let mut pts: Vec<&Vec<u32>> = e.points().collect();
    pts.sort();
    json!(pts)
}

fn profile_line(e: &Profile) -> String {
    let mut pts: Vec<&Vec<u32>> = e.points().collect();
    pts.sort();
    let mut s = String::new();
    for (i, p) in pts.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let joined = p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let _ = write!(s, "({})", joined);
    }
    s
}

fn bound_json(b: &KappaBound) -> Value {
    json!({
        "method": b.method.to_string(),
        "value": b.value,
        "raw": b.raw.to_string(),
        "clamped": b.n_clamped,
        "witness": b.witness,
    })
}

/// One line and one JSON entry per bound attempt, keeping the reason
/// when a formula does not apply.
fn bound_entry(name: &str, r: &Result<KappaBound>) -> (String, Value) {
    match r {
        Ok(b) => (format!("  [{}] {}", name, b), json!({ "name": name, "bound": bound_json(b) })),
        Err(e) => (
            format!("  {}: not applicable ({})", name, e),
            json!({ "name": name, "bound": Value::Null, "reason": e.to_string() }),
        ),
    }
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json serializes"));
}

pub fn analyze(file: &Path, cap: u32, json_out: bool) -> Result<i32> {
    let f = load_poly(file)?;
    let shape = f.shape();
    let symmetric = is_symmetric(&f);
    let e = exponent_profile(&f);
    let attempts: Vec<(&str, Result<KappaBound>)> = if symmetric {
        vec![
            ("HalfDegreeK1", kappa_half_degree_k1(&f)),
            ("WeightedDegree(1,..,1)", kappa_weighted(&f, &Weights::ones(shape.cols))),
            ("SimplexFit", kappa_fitted_profile(&e, cap, shape.rows)),
            ("DegreePower", kappa_degree_power(&f)),
            ("ColumnDegrees", kappa_column_degrees(&f)),
        ]
    } else {
        Vec::new()
    };
    let best = if symmetric { best_kappa(&f, cap).ok() } else { None };
    if json_out {
        let bounds: Vec<Value> = attempts.iter().map(|(n, r)| bound_entry(n, r).1).collect();
        print_json(&json!({
            "input": file.display().to_string(),
            "n": shape.rows,
            "k": shape.cols,
            "terms": f.num_terms(),
            "symmetric": symmetric,
            "degree": degree_json(f.degree()),
            "column_degrees": e.column_degrees(),
            "profile": profile_json(&e),
            "bounds": bounds,
            "best": best.as_ref().map(bound_json).unwrap_or(Value::Null),
        }));
        return Ok(0);
    }
    println!("input: {}", file.display());
    println!("shape: {} rows x {} columns", shape.rows, shape.cols);
    println!("terms: {}", f.num_terms());
    println!("total degree: {}", f.degree());
    let cd = e.column_degrees();
    println!(
        "column degrees: ({})",
        cd.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
    );
    println!("symmetric: {}", if symmetric { "yes" } else { "no" });
    println!("profile ({} points): {}", e.len(), profile_line(&e));
    if symmetric {
        println!("bounds (smaller is stronger, all clamped to n):");
        for (name, r) in &attempts {
            println!("{}", bound_entry(name, r).0);
        }
        match &best {
            Some(b) => println!("best: {}", b),
            None => println!("best: no bound applies"),
        }
    } else {
        println!("bounds: skipped (polynomial is not invariant under row permutations)");
    }
    Ok(0)
}

pub fn kappa(file: &Path, weights: Option<Vec<u32>>, cap: u32, json_out: bool) -> Result<i32> {
    let f = load_poly(file)?;
    if !is_symmetric(&f) {
        return Err(Error::NotSymmetric);
    }
    let result = match &weights {
        Some(w) => kappa_weighted(&f, &Weights::new(w.clone())?),
        None => best_kappa(&f, cap),
    };
    match result {
        Ok(b) => {
            if json_out {
                print_json(&json!({
                    "input": file.display().to_string(),
                    "bound": bound_json(&b),
                }));
            } else {
                println!("{}", b);
            }
            Ok(0)
        }
        Err(Error::Inapplicable(reason)) => {
            if json_out {
                print_json(&json!({
                    "input": file.display().to_string(),
                    "bound": Value::Null,
                    "reason": reason,
                }));
            } else {
                println!("no bound applies: {}", reason);
            }
            Ok(0)
        }
        Err(other) => Err(other),
    }
}

pub fn hessform(file: &Path, out: Option<&Path>, json_out: bool) -> Result<i32> {
    let f = load_poly(file)?;
    let g = hessian_form(&f)?;
    let gshape = g.shape();
    match out {
        Some(path) => {
            let mut text = format!("# hessian form of {}\n", file.display());
            let _ = write!(text, "{}", g);
            std::fs::write(path, text).map_err(|e| {
                Error::InvalidInput(format!("cannot write {}: {}", path.display(), e))
            })?;
            if json_out {
                print_json(&json!({
                    "input": file.display().to_string(),
                    "out": path.display().to_string(),
                    "n": gshape.rows,
                    "k": gshape.cols,
                    "terms": g.num_terms(),
                }));
            } else {
                println!(
                    "wrote {}: {} rows x {} columns, {} terms",
                    path.display(),
                    gshape.rows,
                    gshape.cols,
                    g.num_terms()
                );
            }
        }
        None => {
            if json_out {
                print_json(&json!({
                    "input": file.display().to_string(),
                    "n": gshape.rows,
                    "k": gshape.cols,
                    "terms": g.num_terms(),
                    "poly": g.to_string(),
                }));
            } else {
                print!("{}", g);
            }
        }
    }
    Ok(0)
}

pub fn hf(file: &Path, weights: Option<Vec<u32>>, json_out: bool) -> Result<i32> {
    let f = load_poly(file)?;
    if !is_symmetric(&f) {
        return Err(Error::NotSymmetric);
    }
    let e = exponent_profile(&f);
    let h = h_profile(&f);
    let e_g = e_gf_profile(&f)?;
    let w = weights.map(Weights::new).transpose()?;
    let attempts: Vec<(&str, Result<KappaBound>)> = vec![
        ("HessianRefined", kappa_hessian_refined(&f)),
        ("HessianSimplex(auto)", kappa_hessian_auto_simplex(&f)),
        (
            "HessianWeighted",
            match &w {
                Some(w) => kappa_hessian_weighted(&f, w),
                None => Err(Error::Inapplicable("pass --weights to evaluate".into())),
            },
        ),
        ("HessianDegree", kappa_hessian_degree(&f)),
    ];
    let best = best_hessian_kappa(&f, w.as_ref())?;
    if json_out {
        let bounds: Vec<Value> = attempts.iter().map(|(n, r)| bound_entry(n, r).1).collect();
        print_json(&json!({
            "input": file.display().to_string(),
            "profile": profile_json(&e),
            "h_profile": profile_json(&h),
            "hessian_profile": profile_json(&e_g),
            "bounds": bounds,
            "best": bound_json(&best),
        }));
        return Ok(0);
    }
    println!("input: {}", file.display());
    println!("profile E ({} points): {}", e.len(), profile_line(&e));
    println!("translated profile H ({} points): {}", h.len(), profile_line(&h));
    println!(
        "hessian-form profile ({} points over the doubled columns): {}",
        e_g.len(),
        profile_line(&e_g)
    );
    println!("hessian bounds (smaller is stronger, all clamped to n):");
    for (name, r) in &attempts {
        println!("{}", bound_entry(name, r).0);
    }
    println!("best: {}", best);
    Ok(0)
}

pub fn reduce(file: &Path, m: u32, out: Option<&Path>, json_out: bool) -> Result<i32> {
    let f = load_poly(file)?;
    let n = f.shape().rows;
    if m < 1 || m > n {
        return Err(Error::InvalidInput(format!(
            "--m must be between 1 and the row count {}, got {}",
            n, m
        )));
    }
    // one rewriting up front, then every instance is a cheap expansion
    let expr = to_power_sums(&f)?;
    let dir: PathBuf = out.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("instances"));
    std::fs::create_dir_all(&dir)
        .map_err(|e| Error::InvalidInput(format!("cannot create {}: {}", dir.display(), e)))?;
    let mut by_ell: Vec<(u32, u64)> = Vec::new();
    let mut total = 0u64;
    for ell in 1..=m {
        let mut count = 0u64;
        for lam in enumerate_partitions(n, ell)? {
            let q = expand_reduced(&expr, &lam)?;
            let name = format!(
                "inst_{}.txt",
                lam.parts().iter().map(|p| p.to_string()).collect::<Vec<_>>().join("-")
            );
            let path = dir.join(&name);
            let mut text = format!("# restriction of {} to {}\n", file.display(), lam);
            let _ = write!(text, "lambda = ({})\n", lam.parts().iter().map(|p| p.to_string()).collect::<Vec<_>>().join(","));
            let _ = write!(text, "{}", q);
            std::fs::write(&path, text).map_err(|e| {
                Error::InvalidInput(format!("cannot write {}: {}", path.display(), e))
            })?;
            count += 1;
        }
        total += count;
        by_ell.push((ell, count));
    }
    if json_out {
        print_json(&json!({
            "input": file.display().to_string(),
            "m": m,
            "dir": dir.display().to_string(),
            "total": total,
            "by_ell": by_ell.iter().map(|(e, c)| json!({"ell": e, "count": c})).collect::<Vec<_>>(),
        }));
        return Ok(0);
    }
    println!("wrote {} instances to {} (m = {})", total, dir.display(), m);
    for (ell, count) in &by_ell {
        println!("  ell {:>3}: {:>8}", ell, count);
    }
    Ok(0)
}

pub fn verify(
    file: &Path,
    m: Option<u32>,
    radii_sq: &[f64],
    starts: usize,
    seed: u64,
    json_out: bool,
) -> Result<i32> {
    let f = load_poly(file)?;
    if !is_symmetric(&f) {
        return Err(Error::NotSymmetric);
    }
    let (m, m_source) = match m {
        Some(m) => (m, "given".to_string()),
        None => {
            let b = best_kappa(&f, 6)?;
            (b.value as u32, format!("{}", b))
        }
    };
    let rows = kappa_consistency_experiment(&f.to_float(), m, radii_sq, starts, seed, CONSISTENCY_TOL)?;
    let all_agree = rows.iter().all(|r| r.agree);
    if json_out {
        print_json(&json!({
            "input": file.display().to_string(),
            "m": m,
            "m_source": m_source,
            "starts": starts,
            "seed": seed,
            "tolerance": CONSISTENCY_TOL,
            "rows": rows.iter().map(|r| json!({
                "radius_sq": r.radius_sq,
                "full_min": r.full_min,
                "reduced_min": r.reduced_min,
                "gap": r.gap,
                "agree": r.agree,
            })).collect::<Vec<_>>(),
            "consistent": all_agree,
        }));
    } else {
        println!("input: {}", file.display());
        println!("m = {} ({})", m, m_source);
        println!("starts = {}, seed = {}, tolerance = {:e}", starts, seed, CONSISTENCY_TOL);
        println!("{:>12}  {:>14}  {:>14}  {:>10}  agree", "radius^2", "full min", "reduced min", "gap");
        for r in &rows {
            println!(
                "{:>12}  {:>14.6e}  {:>14.6e}  {:>10.2e}  {}",
                r.radius_sq,
                r.full_min,
                r.reduced_min,
                r.gap,
                if r.agree { "yes" } else { "NO" }
            );
        }
        if all_agree {
            println!("consistency: all {} radii agree", rows.len());
        } else {
            println!("consistency: FAILED");
        }
    }
    Ok(if all_agree { 0 } else { 1 })
}

pub fn convexity(
    file: &Path,
    radii_sq: &[f64],
    starts: usize,
    seed: u64,
    json_out: bool,
) -> Result<i32> {
    let f = load_poly(file)?;
    if !is_symmetric(&f) {
        return Err(Error::NotSymmetric);
    }
    // degree <= 2 has an exact decision procedure
    if matches!(f.degree(), Degree::MinusInfinity | Degree::Finite(0..=2)) {
        return match quadratic_convexity(&f)? {
            QuadraticVerdict::PositiveSemidefinite => {
                if json_out {
                    print_json(&json!({
                        "input": file.display().to_string(),
                        "route": "quadratic",
                        "verdict": "convex",
                    }));
                } else {
                    println!("exact quadratic check: convex (constant Hessian is positive semidefinite)");
                }
                Ok(0)
            }
            QuadraticVerdict::Indefinite { direction, value } => {
                if json_out {
                    print_json(&json!({
                        "input": file.display().to_string(),
                        "route": "quadratic",
                        "verdict": "not_convex",
                        "direction": direction.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                        "second_derivative": value.to_string(),
                    }));
                } else {
                    println!("exact quadratic check: NOT convex");
                    println!(
                        "direction ({}) has second derivative {}",
                        direction.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","),
                        value
                    );
                }
                Ok(1)
            }
        };
    }
    let bound = best_hessian_kappa(&f, None)?;
    let m = bound.value as u32;
    let g = hessian_form(&f)?;
    let expr = to_power_sums(&g)?;
    let n = g.shape().rows;
    let cols = g.shape().cols;
    // Every point with at most m distinct rows lies in an instance with
    // exactly m parts (split blocks and repeat values), so scanning the
    // maximal instances covers the whole reduced search space.
    let mut scanned = 0usize;
    let mut min_seen = f64::INFINITY;
    let mut per_instance: Vec<Value> = Vec::new();
    let mut counterexample: Option<(Partition, Vec<f64>, Rat)> = None;
    'outer: for lam in enumerate_partitions(n, m.min(n))? {
        let mut minima = Vec::with_capacity(radii_sq.len());
        for &r in radii_sq {
            let sphere = SphereSpec::new(r)?;
            let rep = min_reduced_instance_ps(&expr, &lam, &sphere, starts, seed)?;
            min_seen = min_seen.min(rep.value);
            minima.push(rep.value);
            if rep.value < NEGATIVITY_TRIGGER {
                // candidate: confirm with exact arithmetic before believing it
                let q = expand_reduced(&expr, &lam)?;
                let point: Vec<Rat> = rep
                    .argmin
                    .iter()
                    .map(|&v| {
                        Rat::from_float(v).ok_or_else(|| {
                            Error::InvalidInput(format!("non-finite coordinate {}", v))
                        })
                    })
                    .collect::<Result<_>>()?;
                let value = q.evaluate(&point)?;
                if value.is_negative() {
                    counterexample = Some((lam.clone(), rep.argmin.clone(), value));
                    break 'outer;
                }
            }
        }
        scanned += 1;
        per_instance.push(json!({
            "lambda": lam.to_string(),
            "minima": minima,
        }));
    }
    match counterexample {
        Some((lam, point, value)) => {
            let expanded = expand_point(&lam, cols, &point);
            if json_out {
                print_json(&json!({
                    "input": file.display().to_string(),
                    "route": "hessian",
                    "bound": bound_json(&bound),
                    "verdict": "counterexample",
                    "lambda": lam.to_string(),
                    "value": value.to_string(),
                    "value_approx": value.to_f64(),
                    "point": expanded,
                }));
            } else {
                println!("hessian bound: {}", bound);
                println!("counterexample: the form goes negative on instance {}", lam);
                println!("exact value {} (~{:.3e})", value, value.to_f64().unwrap_or(f64::NAN));
                println!(
                    "point ({})",
                    expanded.iter().map(|v| format!("{:.6}", v)).collect::<Vec<_>>().join(",")
                );
                println!("verdict: NOT convex");
            }
            Ok(1)
        }
        None => {
            if json_out {
                print_json(&json!({
                    "input": file.display().to_string(),
                    "route": "hessian",
                    "bound": bound_json(&bound),
                    "verdict": "no_counterexample",
                    "instances": scanned,
                    "radii_sq": radii_sq,
                    "starts": starts,
                    "seed": seed,
                    "min_seen": min_seen,
                    "per_instance": per_instance,
                }));
            } else {
                println!("hessian bound: {}", bound);
                println!(
                    "scanned {} instances with {} parts at {} radii, {} starts, seed {}",
                    scanned,
                    m.min(n),
                    radii_sq.len(),
                    starts,
                    seed
                );
                println!("no counterexample found (smallest value seen {:.3e})", min_seen);
                println!("verdict: consistent with convexity (heuristic search)");
            }
            Ok(0)
        }
    }
}

