use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use secrecy_regions::dist::noiseless_switch_channel;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_secrecy-regions"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("secrecy-regions-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write(name: &str, text: &str) -> PathBuf {
    let p = scratch(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const UNIFORM: &str = r#"{"variables":[{"name":"X1","card":2},{"name":"X2","card":2}],"probs":[0.25,0.25,0.25,0.25]}"#;

#[test]
fn builtin_list_and_emit() {
    let out = run(&["builtin", "--list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("THM1_INNER")));
    assert!(text.lines().any(|l| l.starts_with("APPC_RAW")));

    let out = run(&["builtin", "--emit", "THM8_MACWT"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("rates: R1, R2, Rd1, Rd2"));
    assert!(text.contains("# (105)"));
}

#[test]
fn emitted_systems_parse_back_unchanged() {
    let emitted = run(&["builtin", "--emit", "THM1_INNER"]).stdout;
    let path = write("thm1.txt", std::str::from_utf8(&emitted).unwrap());
    let parsed = run(&["parse", s(&path)]);
    assert!(parsed.status.success());
    assert_eq!(parsed.stdout, emitted);
}

#[test]
fn eval_noiseless_switch_reaches_the_closed_form() {
    let joint = write("uniform.json", UNIFORM);
    let out = run(&[
        "eval",
        "--region",
        "THM5_NOISELESS_SWITCH",
        "--joint",
        s(&joint),
        "--tau1",
        "0.7",
        "--tau2",
        "0.3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "R1,R2\n0,0\n0.4,0\n"
    );
}

#[test]
fn outputs_are_byte_stable() {
    let joint = write("uniform-stable.json", UNIFORM);
    let args = [
        "eval",
        "--region",
        "THM5_NOISELESS_SWITCH",
        "--joint",
        s(&joint),
        "--tau1",
        "0.7",
        "--tau2",
        "0.3",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let derive = ["derive", "--raw", "APPC_RAW"];
    let (a, b) = (run(&derive), run(&derive));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn violated_assumption_exits_with_two() {
    let joint = write("uniform-violated.json", UNIFORM);
    let region = write(
        "needs-two-bits.txt",
        "rates: R1, R2\nR1 <= H(X1)\nR2 <= H(X2)\n0 <= H(X1) - 2\n",
    );
    let out = run(&["eval", "--region", s(&region), "--joint", s(&joint)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("violated"));
    // the region is still printed
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "R1,R2\n0,0\n1,0\n1,1\n0,1\n"
    );
}

#[test]
fn errors_exit_with_one() {
    let joint = write("uniform-errors.json", UNIFORM);
    let out = run(&["eval", "--region", "NOT_A_REGION", "--joint", s(&joint)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("error:"));

    let bad = write("undeclared.txt", "rates: R1\nR1 + Rt <= H(X1)\n");
    let out = run(&["parse", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("Rt"));
}

#[test]
fn toy_derive_eliminates_a_key_rate() {
    let raw = write(
        "toy.txt",
        "rates: R1, R2, Rt\nR1 + Rt <= H(X1)\nRt <= 1\nR2 <= H(X2)\n",
    );
    let target = write(
        "toy-target.txt",
        "rates: R1, R2\nR1 <= H(X1)\nR2 <= H(X2)\n",
    );
    let out = run(&[
        "derive",
        "--raw",
        s(&raw),
        "--eliminate",
        "Rt",
        "--target",
        s(&target),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# eliminate Rt"));
    assert!(text.contains("R1 <= H(X1)"));
    assert!(text.contains("equal"));
    assert!(!text.contains("different"));
}

#[test]
fn search_envelope_contains_itself() {
    let channel = noiseless_switch_channel(0.7, 0.3, 2).unwrap();
    let channel = write("switch.json", &serde_json::to_string(&channel).unwrap());
    let config = write("search.json", r#"{"samples": 40, "refinement_passes": 0}"#);
    let env = scratch("envelope.csv");
    let out = run(&[
        "search",
        "--region",
        "THM5_NOISELESS_SWITCH",
        "--channel",
        s(&channel),
        "--config",
        s(&config),
        "--tau1",
        "0.7",
        "--tau2",
        "0.3",
        "--seed",
        "3",
        "--out",
        s(&env),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let out = run(&["compare", "--inner", s(&env), "--outer", s(&env)]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(
        report["contained"],
        serde_json::Value::Bool(true),
        "{report}"
    );
}
