use std::path::PathBuf;
use std::process::{Command, Output};

fn g2forms(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g2forms"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("g2forms-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn diag(label: &str, d: [f64; 7]) -> String {
    let mut s = format!("matrix {label}\n");
    for i in 0..7 {
        let row: Vec<String> = (0..7).map(|j| if i == j { d[i].to_string() } else { "0".into() }).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

fn key<'a>(text: &'a str, k: &str) -> Vec<&'a str> {
    text.lines().filter_map(|l| l.strip_prefix(k)).map(str::trim).collect()
}

#[test]
fn normal_form_reports_type_and_angle() {
    let p = write("nf.txt", &diag("D", [1.0, 1.0, 2.0, 1.0, 2.0, 2.0, 2.0]));
    let o = g2forms(&["normal-form", p.to_str().unwrap()]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(key(&out, "type "), ["(3,4)"]);
    assert_eq!(key(&out, "angle alpha "), ["1.570796326795"]);
    assert_eq!(key(&out, "near_boundary "), ["false"]);
}

#[test]
fn orbit_samples_return_to_source() {
    let src = diag("S", [0.5, 1.0, 1.0, 2.0, 2.0, 3.0, 3.0]);
    let p = write("src.txt", &src);
    let base = stdout(&g2forms(&["normal-form", p.to_str().unwrap()]));
    let o = g2forms(&["orbit-sample", p.to_str().unwrap(), "--count", "4", "--seed", "9"]);
    assert!(o.status.success());
    let q = write("orbit.txt", &stdout(&o));
    let nf = stdout(&g2forms(&["normal-form", q.to_str().unwrap()]));
    assert_eq!(key(&nf, "type ").len(), 4);
    let canon = |t: &str| -> Vec<f64> {
        let start = t.find("canonical\n").unwrap() + 10;
        t[start..].lines().take(7).flat_map(|l| l.split_whitespace().map(|x| x.parse::<f64>().unwrap()).collect::<Vec<_>>()).collect()
    };
    let want = canon(&base);
    for block in nf.split("\n\n") {
        let got = canon(block);
        let err = want.iter().zip(&got).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-8, "{err}");
    }
}

#[test]
fn conjugate_distinguishes_alpha() {
    let a = write("a.txt", &diag("A", [1.0, 1.0, 1.0, 2.0, 2.0, 2.0, 2.0]));
    let b = write("b.txt", &diag("B", [1.0, 1.0, 2.0, 1.0, 2.0, 2.0, 2.0]));
    let o = g2forms(&["conjugate", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("NOT_CONJUGATE\n"));
    let o = g2forms(&["conjugate", a.to_str().unwrap(), a.to_str().unwrap()]);
    assert!(stdout(&o).starts_with("CONJUGATE\n"));
    let o = g2forms(&["iso", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(stdout(&o), "NOT_ISOMORPHIC\n");
}

#[test]
fn param_handles_both_kinds() {
    let rot = write("rot.txt", "0.6 -0.8\n0.8 0.6\n");
    let out = stdout(&g2forms(&["param", rot.to_str().unwrap(), "--n", "2"]));
    assert_eq!(key(&out, "kind "), ["orthogonal"]);
    let err: f64 = key(&out, "compose_error ")[0].parse().unwrap();
    assert!(err < 1e-12);
    let sym = write("sym.txt", "2 1 0\n1 2 0\n0 0 3\n");
    let out = stdout(&g2forms(&["param", sym.to_str().unwrap(), "--diag", "1,2"]));
    assert_eq!(key(&out, "kind "), ["symmetric"]);
    assert_eq!(key(&out, "in_k "), ["true"]);
    let o = g2forms(&["param", sym.to_str().unwrap(), "--diag", "2,1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn algebra_verdicts() {
    let p = write("pds.txt", &diag("P", [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]));
    let out = stdout(&g2forms(&["algebra", p.to_str().unwrap(), "--samples", "200"]));
    assert_eq!(key(&out, "flexible "), ["true"]);
    assert_eq!(key(&out, "division "), ["true"]);
    let n = write("neg.txt", &diag("N", [-1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]));
    assert_eq!(g2forms(&["algebra", n.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn exit_codes() {
    assert_eq!(g2forms(&["normal-form", "/definitely/missing"]).status.code(), Some(2));
    assert_eq!(g2forms(&["frobnicate"]).status.code(), Some(2));
    let bad = write("bad.txt", "1 2\n3\n");
    assert_eq!(g2forms(&["normal-form", bad.to_str().unwrap()]).status.code(), Some(2));
    let small = write("small.txt", "1 0\n0 1\n");
    assert_eq!(g2forms(&["normal-form", small.to_str().unwrap()]).status.code(), Some(2));
    let p = write("ok.txt", &diag("D", [1.0; 7]));
    let o = g2forms(&["--cluster-tol", "0", "normal-form", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn tolerance_flags_and_env_agree() {
    let p = write("near.txt", &diag("D", [1.0, 1.0 + 1e-8, 2.0, 3.0, 4.0, 5.0, 6.0]));
    let tight = stdout(&g2forms(&["--cluster-tol", "1e-10", "normal-form", p.to_str().unwrap()]));
    assert_eq!(key(&tight, "type "), ["(1,1,1,1,1,1,1)"]);
    let loose = stdout(&g2forms(&["normal-form", p.to_str().unwrap()]));
    assert_eq!(key(&loose, "type "), ["(1,1,1,1,1,2)"]);
    let env = Command::new(env!("CARGO_BIN_EXE_g2forms"))
        .env("G2FORMS_CLUSTER_TOL", "1e-10")
        .args(["normal-form", p.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(stdout(&env), tight);
}

#[test]
fn selftest_is_green() {
    let o = g2forms(&["selftest"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS ")));
}
