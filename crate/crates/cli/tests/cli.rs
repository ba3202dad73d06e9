//! End-to-end tests driving the compiled binary: exit codes, output
//! formats, and agreement with the library on small inputs.

use std::path::Path;
use std::process::{Command, Output};

use multisym::convexity::hessian_form;
use multisym::reduce::{parse_reduced_instance, restrict, Partition};
use multisym::sym::{power_sum, ExpTuple};
use multisym::{parse_poly, Poly, Shape};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_multisym")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path.display().to_string()
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "expected success, stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is valid json")
}

#[test]
fn analyze_reports_shape_symmetry_and_profile() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "f.txt", "n=3 k=2;\nP[2,0] + P[1,1]^2\n");
    let v = stdout_json(&run(&["--json", "analyze", &file]));
    assert_eq!(v["n"], 3);
    assert_eq!(v["k"], 2);
    assert_eq!(v["symmetric"], true);
    assert_eq!(v["degree"], 4);
    let profile: Vec<Vec<u64>> =
        serde_json::from_value(v["profile"].clone()).expect("profile is a list of points");
    assert!(profile.contains(&vec![2, 0]));
    assert!(profile.contains(&vec![2, 2]));
    assert!(v["best"].is_object());

    // asymmetric input: fields still reported, bounds withheld, exit 0
    let file = write(dir.path(), "g.txt", "n=2 k=1;\nx[1,1]^3\n");
    let v = stdout_json(&run(&["--json", "analyze", &file]));
    assert_eq!(v["symmetric"], false);
    assert!(v["best"].is_null());
    assert_eq!(v["bounds"].as_array().map(|a| a.len()), Some(0));
}

#[test]
fn kappa_picks_best_or_requested_weights() {
    let dir = tempfile::tempdir().unwrap();
    let family = "n=5 k=2;\nP[4,0] + P[1,0]^4 - P[1,0]^2*P[1,1] - P[3,0]*P[0,1] - P[1,0]*P[0,1]^2 + P[1,0]^2 + P[1,1]\n";
    let file = write(dir.path(), "family.txt", family);
    let v = stdout_json(&run(&["--json", "kappa", &file]));
    assert_eq!(v["bound"]["method"], "SimplexFit");
    assert_eq!(v["bound"]["raw"], "8");
    assert_eq!(v["bound"]["value"], 5); // clamped to n
    assert_eq!(v["bound"]["clamped"], true);

    let v = stdout_json(&run(&["--json", "kappa", &file, "--weights", "3,5"]));
    assert_eq!(v["bound"]["method"], "WeightedDegree");
    assert_eq!(v["bound"]["raw"], "8");

    // a weight vector whose precondition fails is an answer, not an error
    let file = write(dir.path(), "low.txt", "n=4 k=1;\nP[1]\n");
    let out = run(&["--json", "kappa", &file, "--weights", "3"]);
    let v = stdout_json(&out);
    assert!(v["bound"].is_null());
    assert!(v["reason"].as_str().unwrap().contains("weighted"));
}

#[test]
fn hessform_output_parses_back_to_the_library_result() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "f.txt", "n=3 k=1;\nP[4] + P[2]^2\n");
    let out_path = dir.path().join("g.txt");
    let out = run(&["hessform", &file, "-o", out_path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&out_path).unwrap();
    let g = parse_poly(&text).unwrap();

    let s = Shape::new(3, 1).unwrap();
    let f = power_sum::<multisym::Rat>(s, &ExpTuple::new(vec![4]).unwrap())
        .unwrap()
        .add(&power_sum(s, &ExpTuple::new(vec![2]).unwrap()).unwrap().pow(2))
        .unwrap();
    assert_eq!(g, hessian_form(&f).unwrap());
}

#[test]
fn reduce_writes_instances_matching_direct_restriction() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "f.txt", "n=4 k=1;\nP[3] + P[1]^2\n");
    let out_dir = dir.path().join("inst");
    let v = stdout_json(&run(&[
        "--json",
        "reduce",
        &file,
        "--m",
        "2",
        "-o",
        out_dir.to_str().unwrap(),
    ]));
    // partitions of 4 into exactly 1 and 2 parts: (4); (3,1), (2,2)
    assert_eq!(v["total"], 3);

    let s = Shape::new(4, 1).unwrap();
    let f: Poly = power_sum(s, &ExpTuple::new(vec![3]).unwrap())
        .unwrap()
        .add(&power_sum::<multisym::Rat>(s, &ExpTuple::new(vec![1]).unwrap()).unwrap().pow(2))
        .unwrap();
    for parts in [vec![4u32], vec![3, 1], vec![2, 2]] {
        let name = format!(
            "inst_{}.txt",
            parts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("-")
        );
        let text = std::fs::read_to_string(out_dir.join(&name)).unwrap();
        let inst = parse_reduced_instance(&text).unwrap();
        let lam = Partition::new(parts).unwrap();
        assert_eq!(inst.lam, lam);
        assert_eq!(inst.q, restrict(&f, &lam).unwrap().q, "file {}", name);
    }
}

#[test]
fn verify_agrees_on_a_quartic_and_flags_squared_row_sums() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "f.txt", "n=4 k=1;\nP[4] + P[2]^2 - P[2]\n");
    let v = stdout_json(&run(&[
        "--json", "verify", &file, "--starts", "64", "--radii", "1,4",
    ]));
    assert_eq!(v["consistent"], true);
    assert_eq!(v["m"], 2);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);

    // (p_1)^2 is convex yet its sphere minimum is off the diagonal, so
    // the m = 1 sweep must disagree and the exit code must say so
    let file = write(dir.path(), "sq.txt", "n=4 k=1;\nP[1]^2\n");
    let out = run(&["--json", "verify", &file, "--m", "1", "--starts", "64"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["consistent"], false);
}

#[test]
fn convexity_exact_quadratic_and_negative_quartic() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "q.txt", "n=3 k=1;\nP[2] + 1/2*P[1]^2 - P[1] + 4\n");
    let v = stdout_json(&run(&["--json", "convexity", &file]));
    assert_eq!(v["route"], "quadratic");
    assert_eq!(v["verdict"], "convex");

    let file = write(dir.path(), "nq.txt", "n=3 k=1;\nP[2] - P[1]^2\n");
    let out = run(&["--json", "convexity", &file]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "not_convex");

    // quartic with a genuinely negative Hessian form
    let file = write(dir.path(), "neg.txt", "n=3 k=1;\n-1*P[4]\n");
    let out = run(&["--json", "convexity", &file, "--starts", "32"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "counterexample");
    assert!(v["value"].as_str().unwrap().starts_with('-'));

    // convex quartic: scan comes back clean
    let file = write(dir.path(), "cq.txt", "n=3 k=1;\nP[2]^2 + 2*P[2]\n");
    let out = run(&["--json", "convexity", &file, "--starts", "32"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "no_counterexample");
}

#[test]
fn usage_and_parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["kappa", "/definitely/missing.txt"][..],
        &["reduce", "--m", "3"][..], // missing file argument
        &["unknown-subcommand"][..],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "args {:?}", args);
    }

    // parse error with a position
    let file = write(dir.path(), "bad.txt", "n=2 k=1;\nP[1] + \n");
    let out = run(&["analyze", &file]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("parse error"), "stderr: {}", err);

    // power-sum expression files are rejected with a pointer to the fix
    let file = write(dir.path(), "ps.txt", "psexpr k=1\n1 P[2]\n");
    let out = run(&["analyze", &file]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("row count"), "stderr: {}", err);

    // asymmetric input where symmetry is required
    let file = write(dir.path(), "asym.txt", "n=2 k=1;\nx[1,1]^2\n");
    let out = run(&["kappa", &file]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn poly_files_and_expression_files_agree() {
    let dir = tempfile::tempdir().unwrap();
    let expr_file = write(dir.path(), "e.txt", "n=3 k=1;\nP[2]^2 + P[4]\n");
    // same polynomial via the canonical term format
    let s = Shape::new(3, 1).unwrap();
    let f = power_sum::<multisym::Rat>(s, &ExpTuple::new(vec![2]).unwrap())
        .unwrap()
        .pow(2)
        .add(&power_sum(s, &ExpTuple::new(vec![4]).unwrap()).unwrap())
        .unwrap();
    let poly_file = write(dir.path(), "p.txt", &f.to_string());
    let a = stdout_json(&run(&["--json", "analyze", &expr_file]));
    let b = stdout_json(&run(&["--json", "analyze", &poly_file]));
    assert_eq!(a["profile"], b["profile"]);
    assert_eq!(a["terms"], b["terms"]);
    assert_eq!(a["best"], b["best"]);
}

#[test]
fn thread_cap_is_respected() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "f.txt", "n=4 k=1;\nP[4] + P[2]^2\n");
    let out = Command::new(bin())
        .env("MULTISYM_THREADS", "1")
        .args(["--json", "verify", &file, "--starts", "16"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["consistent"], true);
}
