use std::path::Path;
use std::process::{Command, Output};

use persuade_core::io::{parse_instance, parse_scheme, Scheme};
use persuade_core::model::{is_persuasive, sender_utility};
use persuade_core::rational::{int, rat};

fn persuade(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_persuade"))
        .args(args)
        .current_dir(dir)
        .env_remove("PERSUADE_SIZE_LIMIT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

const ASYMMETRIC: &str = r#"{
  "kind": "single", "actions": 3,
  "states": [
    {"prob": "1/2", "sender": [1, 0, 2], "receiver": [0, 1, -1]},
    {"prob": "1/2", "sender": [0, 3, 1], "receiver": [2, 0, 0]}
  ]
}"#;

const MULTI: &str = r#"{
  "kind": "multi", "receivers": 2, "payment_model": "budget_balanced",
  "states": [
    {"prob": 1, "sender": [0, 1, 1, 2], "receivers": [[0, -1, 0, 1], [0, 0, -2, -2]]}
  ]
}"#;

#[test]
fn binary_types_arbitrary_fast_is_nine_eighths() {
    let dir = tempfile::tempdir().unwrap();
    let o = persuade(&["solve", "--example", "sec4_1", "--model", "arbitrary", "--method", "fast", "--out", "s.json"], dir.path());
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("objective  9/8 (~1.125)"));
    assert!(stdout(&o).contains("matches LP            yes"));
}

#[test]
fn zero_sum_budget_balanced_lp_is_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&persuade(&["examples", "sec4_2"], dir.path())), 0);
    let o = persuade(&["solve", "sec4_2.json", "--model", "budget_balanced", "--method", "lp"], dir.path());
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("objective  1 (~1)"));
    let fast = persuade(&["solve", "sec4_2.json", "--model", "budget-balanced", "--method", "fast"], dir.path());
    assert_eq!(code(&fast), 0, "{}", stdout(&fast));
    assert!(stdout(&fast).contains("objective  1 (~1)"));
}

#[test]
fn zero_sum_models() {
    let dir = tempfile::tempdir().unwrap();
    for (model, method, value) in [("zero", "lp", "1/2"), ("nonnegative", "lp", "1/2"), ("arbitrary", "fast", "3/2")] {
        let o = persuade(&["solve", "--example", "sec4_2", "--model", model, "--method", method], dir.path());
        assert_eq!(code(&o), 0, "{model}: {}", stdout(&o));
        assert!(stdout(&o).contains(&format!("objective  {value} ")), "{model}: {}", stdout(&o));
    }
    // the zero-sum example is not symmetric under action permutations
    let o = persuade(&["solve", "--example", "sec4_2", "--model", "zero", "--method", "fast"], dir.path());
    assert_eq!(code(&o), 3);
}

#[test]
fn scheme_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    persuade(&["examples", "sec4_1", "--out", "inst/b.json"], dir.path());
    let o = persuade(&["solve", "inst/b.json", "--model", "arbitrary", "--out", "out/s.json"], dir.path());
    assert_eq!(code(&o), 0);
    let inst = parse_instance(&std::fs::read_to_string(dir.path().join("inst/b.json")).unwrap()).unwrap();
    let single = inst.instance.single().unwrap().unwrap();
    let Scheme::Single { scheme, dual, sender_utility: u } =
        parse_scheme(&std::fs::read_to_string(dir.path().join("out/s.json")).unwrap()).unwrap()
    else {
        panic!("expected a single-receiver scheme")
    };
    assert_eq!(u, rat(9, 8));
    assert_eq!(sender_utility(&single, &scheme).unwrap(), u);
    assert!(is_persuasive(&single, &scheme).unwrap().persuasive);
    assert!(persuade_core::single::verify_argmax_certificate(&single, &scheme, &dual.unwrap()));
}

#[test]
fn multi_round_trip_and_defaults_to_file_model() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("m.json"), MULTI).unwrap();
    let o = persuade(&["solve", "m.json", "--method", "fast", "--out", "m_s.json"], dir.path());
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("gamma* = 1/2"));
    let inst = parse_instance(MULTI).unwrap();
    let persuade_core::io::Instance::Multi(m) = inst.instance else { panic!() };
    let Scheme::Multi { scheme, gamma_star, sender_utility } =
        parse_scheme(&std::fs::read_to_string(dir.path().join("m_s.json")).unwrap()).unwrap()
    else {
        panic!("expected a multi-receiver scheme")
    };
    assert_eq!(gamma_star, Some(rat(1, 2)));
    assert_eq!(sender_utility, rat(3, 2));
    assert!(scheme.is_feasible(&m));
    assert_eq!(scheme.realized.unwrap().expected_total(), int(0));
}

#[test]
fn cutting_plane_matches_lp() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("m.json"), MULTI).unwrap();
    let o = persuade(&["solve", "m.json", "--model", "zero", "--method", "cutting-plane"], dir.path());
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("matches LP            yes"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("a.json"), ASYMMETRIC).unwrap();
    std::fs::write(dir.path().join("m.json"), MULTI).unwrap();
    std::fs::write(dir.path().join("bad.json"), r#"{"kind": "single", "actions": 2, "states": [{"prob": "1/3", "sender": [0, 1], "receiver": [0, 1]}]}"#).unwrap();
    let fast = persuade(&["solve", "a.json", "--model", "zero", "--method", "fast"], dir.path());
    assert_eq!(code(&fast), 3);
    assert_eq!(code(&persuade(&["solve", "a.json", "--model", "zero"], dir.path())), 0);
    assert_eq!(code(&persuade(&["solve", "bad.json", "--model", "zero"], dir.path())), 2);
    assert_eq!(code(&persuade(&["solve", "missing.json", "--model", "zero"], dir.path())), 2);
    assert_eq!(code(&persuade(&["solve", "a.json"], dir.path())), 2);
    assert_eq!(code(&persuade(&["solve", "m.json", "--model", "zero", "--method", "fast"], dir.path())), 3);
    assert_eq!(code(&persuade(&["solve", "a.json", "--model", "zero", "--method", "cutting-plane"], dir.path())), 3);
    assert_eq!(code(&persuade(&["solve", "m.json", "--size-limit", "3"], dir.path())), 5);
    let env = Command::new(env!("CARGO_BIN_EXE_persuade"))
        .args(["solve", "m.json"])
        .current_dir(dir.path())
        .env("PERSUADE_SIZE_LIMIT", "2")
        .output()
        .unwrap();
    assert_eq!(code(&env), 5);
    assert_eq!(code(&persuade(&["examples", "sec9"], dir.path())), 2);
}

#[test]
fn verify_small_campaign() {
    let dir = tempfile::tempdir().unwrap();
    let o = persuade(&["verify", "--suite", "all", "--seeds", "4"], dir.path());
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.lines().count() >= 8);
    assert!(out.lines().all(|l| l.starts_with("PASS")), "{out}");
    assert!(!dir.path().join("counterexamples").exists());
    assert_eq!(code(&persuade(&["verify", "--suite", "nope"], dir.path())), 2);
}
