use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn curvlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvlab"))
        .args(args)
        .env_remove("CURVLAB_THREADS")
        .output()
        .expect("binary runs")
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("valid json line"))
        .collect()
}

const J_STANDARD: &str = r#"
[complex_structure]
J11 = "0"
J12 = "-1"
J13 = "0"
J14 = "0"
J21 = "1"
J22 = "0"
J23 = "0"
J24 = "0"
J31 = "0"
J32 = "0"
J33 = "0"
J34 = "-1"
J41 = "0"
J42 = "0"
J43 = "1"
J44 = "0"
"#;

fn metric(diag: &str) -> String {
    format!(
        "[metric]\ng11 = \"{diag}\"\ng12 = \"0\"\ng13 = \"0\"\ng14 = \"0\"\ng22 = \"{diag}\"\ng23 = \"0\"\ng24 = \"0\"\ng33 = \"{diag}\"\ng34 = \"0\"\ng44 = \"{diag}\"\n"
    )
}

fn model_file(body: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".toml").tempfile().unwrap();
    f.write_all(body.as_bytes()).unwrap();
    f
}

fn torus_file() -> tempfile::NamedTempFile {
    model_file(&format!(
        "name = \"user-torus\"\nhomogeneous = true\nclosed = true\nknown_chi = 0\nknown_sigma = 0\nvolume = 1.0\n\n[domain]\nlower = [0.0, 0.0, 0.0, 0.0]\nupper = [1.0, 1.0, 1.0, 1.0]\nperiodic = [true, true, true, true]\n\n{}{J_STANDARD}",
        metric("1")
    ))
}

#[test]
fn analyze_torus_is_zero() {
    let out = curvlab(&["analyze", "--model", "torus", "--points", "0,0,0,0"]);
    assert!(out.status.success());
    let r = &json_lines(&out)[0];
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["structural_ok"], true);
    assert_eq!(r["blocks"]["s_g"], 0.0);
    assert_eq!(r["hsc"]["k_estimate"], 0.0);
}

#[test]
fn analyze_cp2_origin_and_kt() {
    let out = curvlab(&["analyze", "--model", "cp2", "--k", "4", "--points", "0,0,0,0"]);
    assert!(out.status.success());
    let r = &json_lines(&out)[0];
    assert!(r["kahler"]["gap"].as_f64().unwrap().abs() < 1e-9);
    assert!(r["theorem3"]["w_minus_norm"].as_f64().unwrap() < 1e-9);

    let out = curvlab(&["analyze", "--model", "kt", "--points", "3", "--seed", "5"]);
    assert!(out.status.success());
    let rs = json_lines(&out);
    assert_eq!(rs.len(), 3);
    for (i, r) in rs.iter().enumerate() {
        assert_eq!(r["index"], i);
        assert!(r["gauge"]["a_norm2"].as_f64().unwrap() > 0.0);
        assert!(r["ricci"]["duality_residual"].as_f64().unwrap() > 1e-3);
    }
}

#[test]
fn negative_k_flag_and_ball() {
    let out = curvlab(&["analyze", "--model", "ball", "--k", "-4", "--points", "-0.1,0.2,0,0.1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = &json_lines(&out)[0];
    assert!((r["hsc"]["k_estimate"].as_f64().unwrap() + 4.0).abs() < 1e-8);
}

#[test]
fn out_of_domain_point_is_an_error() {
    let out = curvlab(&["analyze", "--model", "ball", "--points", "2,0,0,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("outside"));
}

#[test]
fn index_commands() {
    let out = curvlab(&["index", "--model", "torus"]);
    assert!(out.status.success());
    let r = &json_lines(&out)[0];
    for key in [
        "sigma_from_lc",
        "sigma_from_hermitian",
        "chi_from_lc",
        "chi_from_hermitian",
    ] {
        assert_eq!(r[key], 0.0);
    }
    let out = curvlab(&["index", "--model", "cp2"]);
    let r = &json_lines(&out)[0];
    assert!((r["sigma_from_hermitian"].as_f64().unwrap() - 1.0).abs() < 1e-3);
    assert!((r["chi_from_lc"].as_f64().unwrap() - 3.0).abs() < 1e-3);
    let out = curvlab(&["index", "--model", "ball"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_builtins() {
    for args in [["verify", "--model", "cp2"], ["verify", "--model", "kt"]] {
        let out = curvlab(&[&args[..], &["--points", "10", "--n", "1000"]].concat());
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        for row in json_lines(&out) {
            assert!(row["passed"] == true || row["gating"] == false, "{row}");
        }
    }
}

#[test]
fn verify_bad_user_model_reports_location() {
    // J^2 != -1
    let bad = J_STANDARD.replace("J12 = \"-1\"", "J12 = \"-2\"");
    let f = model_file(&format!(
        "name = \"bad\"\n[domain]\nlower = [-1.0, -1.0, -1.0, -1.0]\nupper = [1.0, 1.0, 1.0, 1.0]\n{}{bad}",
        metric("1")
    ));
    let out = curvlab(&["verify", "--user", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("J^2") && err.contains("at ["), "{err}");
}

#[test]
fn user_torus_matches_builtin() {
    let f = torus_file();
    let path = f.path().to_str().unwrap();
    let user = curvlab(&["index", "--user", path]);
    assert!(user.status.success(), "{}", String::from_utf8_lossy(&user.stderr));
    let u = &json_lines(&user)[0];
    let b = &json_lines(&curvlab(&["index", "--model", "torus"]))[0];
    for key in [
        "sigma_from_lc",
        "chi_from_lc",
        "sigma_from_hermitian",
        "chi_from_hermitian",
    ] {
        assert_eq!(u[key], b[key]);
    }
    let ua = json_lines(&curvlab(&["analyze", "--user", path, "--points", "0.1,0.2,0.3,0.4"]));
    assert_eq!(ua[0]["regime"], "user");
    assert_eq!(ua[0]["tolerances"]["axiom"], 1e-8);
    assert_eq!(ua[0]["blocks"]["s_g"], 0.0);
}

#[test]
fn conformal_user_model_has_torsion_potential() {
    let f = model_file(&format!(
        "name = \"conformal\"\n[domain]\nlower = [-1.0, -1.0, -1.0, -1.0]\nupper = [1.0, 1.0, 1.0, 1.0]\n{}{J_STANDARD}",
        metric("exp(2*sin(x1))")
    ));
    let out = curvlab(&["analyze", "--user", f.path().to_str().unwrap(), "--points", "0.3,0,0,0"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = &json_lines(&out)[0];
    assert!(r["gauge"]["a_norm2"].as_f64().unwrap() > 1e-3);
    assert!(r["structure"]["almost_kahler_residual"].as_f64().unwrap() > 1e-3);
    assert_eq!(r["structural_ok"], true);
    let idx = curvlab(&["index", "--user", f.path().to_str().unwrap()]);
    assert_eq!(idx.status.code(), Some(2));
}

#[test]
fn csv_and_json_carry_the_same_numbers() {
    let json = curvlab(&["analyze", "--model", "kt", "--points", "2", "--seed", "9"]);
    let csv = curvlab(&[
        "analyze", "--model", "kt", "--points", "2", "--seed", "9", "--format", "csv",
    ]);
    let text = String::from_utf8(csv.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    for (line, obj) in lines.zip(json_lines(&json)) {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), header.len());
        for (h, cell) in header.iter().zip(cells) {
            let mut v = &obj;
            for part in h.split('.') {
                v = match part.parse::<usize>() {
                    Ok(i) if v.is_array() => &v[i],
                    _ => &v[part],
                };
            }
            let expect = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            assert_eq!(cell, expect, "column {h}");
        }
    }
}

#[test]
fn reports_are_byte_identical_across_thread_counts() {
    let a = curvlab(&[
        "analyze",
        "--model",
        "cp2",
        "--points",
        "6",
        "--seed",
        "2",
        "--threads",
        "1",
    ]);
    let b = curvlab(&[
        "analyze",
        "--model",
        "cp2",
        "--points",
        "6",
        "--seed",
        "2",
        "--threads",
        "4",
    ]);
    let c = Command::new(env!("CARGO_BIN_EXE_curvlab"))
        .args(["analyze", "--model", "cp2", "--points", "6", "--seed", "2"])
        .env("CURVLAB_THREADS", "3")
        .output()
        .unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn config_file_and_unknown_keys() {
    let good = model_file("model = \"cp2\"\nk = 2.0\npoints = [[0.0, 0.0, 0.0, 0.0]]\n");
    let out = curvlab(&["analyze", "--config", good.path().to_str().unwrap()]);
    assert!(out.status.success());
    let r = &json_lines(&out)[0];
    assert!((r["hsc"]["k_estimate"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    // flags override the file
    let out = curvlab(&["analyze", "--config", good.path().to_str().unwrap(), "--k", "3"]);
    assert!((json_lines(&out)[0]["hsc"]["k_estimate"].as_f64().unwrap() - 3.0).abs() < 1e-9);
    let bad = model_file("model = \"cp2\"\nsamples = 3\n");
    let out = curvlab(&["analyze", "--config", bad.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("samples"));
}

#[test]
fn fuzz_commands() {
    let out = curvlab(&["fuzz", "--n", "1", "--seed", "0"]);
    assert!(out.status.success());
    let r = &json_lines(&out)[0];
    assert_eq!(r["sweep"]["agree_count"], 1);
    assert!(r["first_block"].as_str().unwrap().starts_with("k="));
    let out = curvlab(&["fuzz", "--n", "10000", "--seed", "1", "--exhaustive"]);
    assert!(out.status.success());
    let r = &json_lines(&out)[0];
    assert_eq!(r["sweep"]["agree_count"], 10000);
    assert_eq!(r["sweep"]["grid_agree_count"], r["sweep"]["grid_checked"]);
    assert_eq!(r["sweep"]["disagree_examples"].as_array().unwrap().len(), 0);
    let out = curvlab(&["fuzz", "--n", "0"]);
    assert_eq!(out.status.code(), Some(2));
}
