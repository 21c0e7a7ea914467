use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_approxdeg")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Degree column of the single data row.
fn degree_of(args: &[&str]) -> usize {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    row.split(',').nth(7).unwrap().parse().unwrap()
}

#[test]
fn degree_examples() {
    assert_eq!(degree_of(&["degree", "--family", "and", "--n", "2", "--eps", "1/3"]), 1);
    assert_eq!(degree_of(&["degree", "--family", "and", "--n", "3", "--eps", "0"]), 3);
    let ptp = ["degree", "--family", "ptp", "--n", "3", "--alpha", "1/2", "--eps", "0"];
    let one: Vec<&str> = ptp.iter().copied().chain(["--sided", "one"]).collect();
    assert_eq!(degree_of(&ptp), degree_of(&one));
}

#[test]
fn degree_witness_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    let p = path.to_str().unwrap();
    run(&["degree", "--family", "and", "--n", "2", "--eps", "1/3", "--witness", p]);
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(json["orth"], 1);
    assert_eq!(json["eps"], "1/3");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["degree", "--family", "and", "--n", "2", "--eps", "0.3"][..],
        &["degree", "--family", "ptp", "--n", "3", "--eps", "0"],
        &["scan", "--family", "and", "--n", "3"],
        &["scan", "--family", "and", "--n", "3", "--eps", "1/9,1/3"],
        &["simulate", "--trials", "0"],
        &["verify", "/nonexistent/bundle.json"],
        &["bogus"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn size_limit_env_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_approxdeg"))
        .args(["degree", "--family", "ed", "--n", "3", "--eps", "1/3"])
        .env("APPROXDEG_SIZE_LIMIT", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("size limit"));
}

fn certify(dir: &Path, name: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    let out = run(&["certify", "--pipeline", "ed", "--n", "4", "--k", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    path
}

#[test]
fn certify_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let a = certify(dir.path(), "a.json");
    let b = certify(dir.path(), "b.json");
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let out = run(&["verify", a.to_str().unwrap(), "--replay"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("result=PASS") && text.contains("replay=match"));
    assert!(text.contains("correlation=") && text.contains("orth=4"));
}

#[test]
fn perturbed_bundle_fails_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = certify(dir.path(), "b.json");
    let mut json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let v = approxdeg::parse_rational(json["witness"]["values"][0].as_str().unwrap()).unwrap()
        + approxdeg::rational::rat(1, 1_000_000);
    json["witness"]["values"][0] = approxdeg::format_rational(&v).into();
    std::fs::write(&path, json.to_string()).unwrap();
    let out = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("result=FAIL"));
}

#[test]
fn truncated_bundle_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = certify(dir.path(), "b.json");
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, &text[..text.len() / 3]).unwrap();
    assert_eq!(run(&["verify", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn simulate_is_deterministic() {
    let args = ["simulate", "--n", "64..128", "--eps", "1/3,1/9", "--trials", "200", "--seed", "5"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("n,alpha,eps_num,eps_den,s,trials"));
    assert!(text.trim_end().lines().last().unwrap().starts_with("fitted_exponent="));
}

#[test]
fn scan_svg_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for name in ["a.svg", "b.svg"] {
        let path = dir.path().join(name);
        let out = run(&["scan", "--family", "and", "--n", "3", "--eps", "1/3,1/9,1/27,0", "--svg", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        let degs: Vec<usize> = stdout(&out).lines().skip(1).map(|l| l.split(',').nth(7).unwrap().parse().unwrap()).collect();
        assert!(degs.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(*degs.last().unwrap(), 3);
        outputs.push((stdout(&out), std::fs::read_to_string(&path).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0].1.matches("<polyline").count(), 1);
}
