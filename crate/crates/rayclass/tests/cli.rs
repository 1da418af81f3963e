//! The binary end to end: exit codes and output shapes.

use std::process::Command;

fn rayclass(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_rayclass"))
        .args(args)
        .env_remove("RAYCLASS_DIGITS")
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

#[test]
fn compare_mode_prints_both_polynomials() {
    let (code, out) = rayclass(&["--d", "-10", "--modulus", "6", "--mode", "compare", "--twist", "12:5"]);
    assert_eq!(code, 0);
    assert!(out.contains("x^16 + (8) x^15 + (-18) x^14"));
    assert!(out.contains("x^16 + (20560) x^15"));
    assert!(out.contains("reduction factor = 8.57913"));
}

#[test]
fn exit_codes() {
    assert_eq!(rayclass(&["--d", "-7", "--modulus", "2"]).0, 2);
    assert_eq!(rayclass(&["--d", "-1", "--modulus", "5"]).0, 3);
    assert_eq!(rayclass(&["--d", "-3", "--modulus", "5"]).0, 3);
    assert_eq!(rayclass(&["--d", "-91", "--modulus", "1"]).0, 1);
    assert_eq!(rayclass(&["--d", "12", "--modulus", "5"]).0, 1);
    assert_eq!(rayclass(&["--d", "-91", "--ideal", "5,1,1"]).0, 1);
    assert_eq!(rayclass(&["--d", "-40", "--modulus", "6", "--twist", "5:1"]).0, 1);
    assert_ne!(rayclass(&["--d", "-91"]).0, 0);
}

#[test]
fn degenerate_json_has_no_polynomials() {
    let (code, out) = rayclass(&["--d", "-7", "--modulus", "2", "--emit", "json"]);
    assert_eq!(code, 2);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["ray"]["degenerate"], true);
    assert!(v.get("poly_K").is_none());
    assert!(v.get("poly_Q").is_none());
}

#[test]
fn ideal_and_generator_inputs_agree() {
    // the prime of norm 31 over 31 in Q(sqrt -11), as HNF and as generators
    let (c1, a) = rayclass(&["--d", "-11", "--ideal", "31,15,1", "--emit", "json", "--digits", "100"]);
    let (c2, b) = rayclass(&["--d", "-11", "--gens", "31,0;10,1", "--emit", "json", "--digits", "100"]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
}

#[test]
fn digits_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_rayclass"))
        .args(["--d", "-40", "--modulus", "6", "--emit", "json"])
        .env("RAYCLASS_DIGITS", "80")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["diagnostics"]["precision_bits"], 266);
}
