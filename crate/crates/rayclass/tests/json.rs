//! JSON schema: round trips, key order, determinism across thread counts.

use rayclass::{run, Emit, ModulusInput, Report, RunConfig};

fn config(d: i64, n: i64) -> RunConfig {
    let mut c = RunConfig::new(d, ModulusInput::Rational(n));
    c.digits = 100;
    c.emit = Emit::Json;
    c
}

#[test]
fn round_trip_field_by_field() {
    let mut c = config(-40, 6);
    c.twist = Some((12, 5));
    c.include_conjugates = true;
    let r = run(&c).report.unwrap();
    let back = Report::from_json(&r.to_json()).unwrap();
    assert_eq!(back, r);
    assert_eq!(back.twist.as_ref().map(|t| (t.n, t.k)), Some((12, 5)));
    assert_eq!(back.conjugates.as_ref().map(|c| c.len()), Some(16));
}

#[test]
fn key_order_is_fixed() {
    let r = run(&config(-91, 5)).report.unwrap();
    let s = r.to_json();
    let keys = ["\"mode\"", "\"field\"", "\"modulus\"", "\"ray\"", "\"class\"", "\"args\"", "\"poly_K\"", "\"poly_Q\"", "\"heights\"", "\"diagnostics\""];
    let pos: Vec<usize> = keys.iter().map(|k| s.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    let q: Vec<&str> = v["poly_Q"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert_eq!(q.len(), 33);
    assert!(q.contains(&"910425") || q.contains(&"-910425"));
    assert_eq!(v["args"]["uc"], "2/5");
}

#[test]
fn identical_configs_give_identical_bytes() {
    let mut c = config(-11, 9);
    c.exhaustive = true;
    c.include_conjugates = true;
    c.threads = 1;
    let a = run(&c).report.unwrap().to_json();
    c.threads = 4;
    let b = run(&c).report.unwrap().to_json();
    c.threads = 3;
    let d = run(&c).report.unwrap().to_json();
    assert_eq!(a, b);
    assert_eq!(a, d);
}
