use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use supergerbe::examples;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_supergerbe"));
    c.env_remove("SUPERGERBE_PARALLEL");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn emit(dir: &TempDir, name: &str) -> PathBuf {
    let p = dir.path().join(format!("{}.sg", name));
    let o = run(&["examples", "emit", name]);
    assert!(o.status.success());
    std::fs::write(&p, &o.stdout).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn examples_list_names_the_corpus() {
    let o = run(&["examples", "list"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.lines().count() >= 8);
    for (n, _) in examples::NAMES {
        assert!(out.lines().any(|l| l.split_whitespace().next() == Some(n)), "{}", n);
    }
}

#[test]
fn every_builtin_gerbe_checks_decomposes_and_verifies() {
    let dir = TempDir::new().unwrap();
    for (name, _) in examples::NAMES {
        let path = emit(&dir, name);
        let m = examples::build(name).unwrap();
        for g in m.gerbes.keys() {
            let o = run(&["check", s(&path), g]);
            assert!(o.status.success(), "check {}/{}: {}", name, g, stdout(&o));
            let out = dir.path().join(format!("{}-{}.dec", name, g));
            let o = run(&["decompose", s(&path), g, "-o", s(&out)]);
            assert!(o.status.success(), "decompose {}/{}: {}", name, g, stdout(&o));
            let o = run(&["verify", s(&path), g, s(&out)]);
            assert!(o.status.success(), "verify {}/{}: {}", name, g, stdout(&o));
        }
    }
}

#[test]
fn dd_on_level_two_torus_pairs_to_two() {
    let dir = TempDir::new().unwrap();
    let p = emit(&dir, "torus3_level2");
    let o = run(&["dd", s(&p), "G"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("\"pairing.fundamental\": \"2\""), "{}", stdout(&o));
}

#[test]
fn integral_half_area_fails_with_witness() {
    let dir = TempDir::new().unwrap();
    let p = emit(&dir, "torus2");
    let o = run(&["integral", s(&p), "half"]);
    assert!(!o.status.success());
    let out = stdout(&o);
    assert!(out.contains("error: \"NotIntegral\"") && out.contains("witness: \"1/2\""), "{}", out);
    let o = run(&["integral", s(&p), "tau*e1*e2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("\"pairing.fundamental\": \"1\""));
}

#[test]
fn construct_then_inspect() {
    let dir = TempDir::new().unwrap();
    let p = emit(&dir, "torus3");
    let out = dir.path().join("built.sg");
    let o = run(&["construct", s(&p), "vol", "-o", s(&out), "--name", "L"]);
    assert!(o.status.success(), "{}", stdout(&o));
    for cmd in ["check", "rep-identity", "curvature"] {
        let o = run(&[cmd, s(&out), "L"]);
        assert!(o.status.success(), "{}: {}", cmd, stdout(&o));
    }
    let o = run(&["dd", s(&out), "L"]);
    assert!(stdout(&o).contains("\"pairing.fundamental\": \"1\""));
    let o = run(&["construct", s(&p), "1/2*tau*e1*e2*e3", "-o", s(&out)]);
    assert!(!o.status.success());
}

#[test]
fn trivialize_certificates_verify_and_tampering_is_caught() {
    let dir = TempDir::new().unwrap();
    let p = emit(&dir, "torus2");
    let cert = dir.path().join("c.sg");
    let o = run(&["trivialize", s(&p), "Iarea", "-o", s(&cert)]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(run(&["verify", s(&p), "Iarea", s(&cert)]).status.success());
    assert!(!run(&["verify", s(&p), "Iexact", s(&cert)]).status.success());

    let text = std::fs::read_to_string(&cert).unwrap();
    let i = text.find("m {").expect("integer section");
    let j = i + text[i..].find(": ").unwrap() + 2;
    let end = j + text[j..].find('\n').unwrap();
    let bumped: i64 = text[j..end].trim_matches('"').parse::<i64>().unwrap() + 1;
    let tampered = format!("{}{}{}", &text[..j], bumped, &text[end..]);
    std::fs::write(&cert, tampered).unwrap();
    let o = run(&["verify", s(&p), "Iarea", s(&cert)]);
    assert!(!o.status.success());

    let o = run(&["trivialize", s(&p), "Ihalf"]);
    assert!(!o.status.success());
}

#[test]
fn diagnostics_carry_positions() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.sg");
    let text = examples::emit("circle").unwrap().replacen("format: 1", "format: 1\nname: 0.5", 1);
    std::fs::write(&bad, text).unwrap();
    let o = run(&["check", s(&bad), "I0"]);
    assert!(!o.status.success());
    let err = stderr(&o);
    assert!(err.contains("2:"), "{}", err);
    assert!(stdout(&o).contains("status: fail"));

    let p = emit(&dir, "torus2");
    let o = run(&["integral", s(&p), "tau*e1*"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("1:"), "{}", stderr(&o));
}

#[test]
fn reports_are_deterministic_across_worker_counts() {
    let dir = TempDir::new().unwrap();
    let p = emit(&dir, "torus3_level1");
    let mut texts = Vec::new();
    for n in ["1", "4"] {
        let r = dir.path().join(format!("r{}.txt", n));
        let o = run(&["--parallel", n, "--report", s(&r), "rep-identity", s(&p), "G"]);
        assert!(o.status.success());
        let text = std::fs::read_to_string(&r).unwrap();
        assert_eq!(text, stdout(&o));
        assert!(text.starts_with("format: 1\n"));
        texts.push(text);
    }
    let o = bin().env("SUPERGERBE_PARALLEL", "2").args(["rep-identity", s(&p), "G"]).output().unwrap();
    assert!(o.status.success());
    texts.push(stdout(&o));
    assert!(texts.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn builtin_prefix_and_selftest() {
    let o = run(&["check", "builtin:pi_circle", "Isoul"]);
    assert!(o.status.success());
    let o = run(&["selftest", "--cases", "4"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(!stdout(&o).contains("status: fail"));
}
