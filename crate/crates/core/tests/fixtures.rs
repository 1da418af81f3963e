//! Worked examples: Q(sqrt -91) mod 5, Q(sqrt -10) mod 6, Q(sqrt -11) mod 9.

use num_bigint::BigInt;
use rayclass_core::exec::Sequential;
use rayclass_core::pipeline::{run_classical, run_epsilon, EpsilonOptions};
use rayclass_core::polyrecon::{height_report, max_abs};
use rayclass_core::{AlgebraicPoly, Field, FieldElement, Modulus, QuadForm};

fn big(s: &str) -> BigInt {
    s.parse().unwrap()
}

fn setup(d: i64, n: i64) -> (Field, Modulus) {
    let k = Field::new(d).unwrap();
    let m = Modulus::rational(&k, n).unwrap();
    (k, m)
}

#[test]
fn q91_mod5_both_classes() {
    let (k, m) = setup(-91, 5);
    let run = run_epsilon(&k, &m, &EpsilonOptions::new(850), &Sequential).unwrap();
    assert_eq!(run.class.class, (2, 1));
    assert_eq!(run.poly_q.len(), 33);
    assert_eq!(max_abs(&run.poly_q), big("910425"));
    assert_eq!(run.poly_k.multiplicity, 1);

    let mut o = EpsilonOptions::new(1700);
    o.class = Some((2, 1));
    o.class_form = Some(QuadForm::new(5, 3, 5));
    let hard = run_epsilon(&k, &m, &o, &Sequential).unwrap();
    assert_eq!(hard.class.e_c, 5);
    assert_eq!(max_abs(&hard.poly_q), big("14039306026984320878929721009202946"));

    let h = height_report(&run.poly_q, Some(&hard.poly_q));
    assert!((h.reduction_factor.unwrap() - 5.73015).abs() < 1e-5);
}

#[test]
fn q10_mod6_twisted_and_classical() {
    let (k, m) = setup(-40, 6);
    let mut o = EpsilonOptions::new(850);
    o.twist = Some((12, 5));
    let run = run_epsilon(&k, &m, &o, &Sequential).unwrap();
    let want: Vec<BigInt> = [1, 8, -18, -68, 50, 108, -44, -28, 63, -28, -44, 108, 50, -68, -18, 8, 1]
        .iter()
        .map(|&x| x.into())
        .collect();
    assert_eq!(run.poly_q, want);
    assert!(run.poly_k.is_rational());

    let cl = run_classical(&k, &m, 850, 3, &Sequential).unwrap();
    let desc = [
        "1",
        "20560",
        "-1252488",
        "-829016560",
        "-8751987701092",
        "217535583987600",
        "181262520621110344",
        "43806873084101200",
        "-278616280004972730",
        "139245187265282800",
        "-8883048242697656",
        "352945014869040",
        "23618989732508",
        "-1848032773840",
        "49965941112",
        "-425670800",
        "1",
    ];
    let want: Vec<BigInt> = desc.iter().rev().map(|s| big(s)).collect();
    assert_eq!(cl.poly_q, want);
    let h = height_report(&run.poly_q, Some(&cl.poly_q));
    assert!((h.reduction_factor.unwrap() - 8.57913).abs() < 1e-5);
}

#[test]
fn q11_mod9_exhaustive() {
    let (k, m) = setup(-11, 9);
    let mut o = EpsilonOptions::new(850);
    o.exhaustive = true;
    let run = run_epsilon(&k, &m, &o, &Sequential).unwrap();
    let desc: [(i64, i64); 19] = [
        (1, 0),
        (3, 0),
        (3, -6),
        (-4, 5),
        (18, -6),
        (-3, 3),
        (40, -12),
        (6, -6),
        (63, -15),
        (-2, 0),
        (78, 15),
        (12, 6),
        (52, 12),
        (-6, -3),
        (24, 6),
        (-9, -5),
        (9, 6),
        (3, 0),
        (1, 0),
    ];
    let want: Vec<(BigInt, BigInt)> = desc.iter().rev().map(|&(a, b)| (a.into(), b.into())).collect();
    assert_eq!(run.poly_k.coeffs, want);
    assert_eq!(run.poly_k.coeffs[17], (3.into(), 0.into()));
    assert_eq!(run.class.class, (3, 7));
}

#[test]
fn doubling_precision_keeps_every_integer() {
    let (k, m) = setup(-40, 6);
    let mut o = EpsilonOptions::new(300);
    o.twist = Some((12, 5));
    let a = run_epsilon(&k, &m, &o, &Sequential).unwrap();
    o.prec = 600;
    let b = run_epsilon(&k, &m, &o, &Sequential).unwrap();
    assert_eq!(a.poly_k, AlgebraicPoly { residuals_log2: a.poly_k.residuals_log2.clone(), ..b.poly_k.clone() });
    assert!(a.grid.norm_defect_log2() < -150.0);
    assert!(b.grid.norm_defect_log2() < -300.0);
}

#[test]
fn split_prime_modulus() {
    let k = Field::new(-11).unwrap();
    let p = k.make_ideal(&[FieldElement::int(31), k.from_tau(10, 1)]).unwrap();
    let m = Modulus::new(&k, p).unwrap();
    let run = run_epsilon(&k, &m, &EpsilonOptions::new(600), &Sequential).unwrap();
    assert_eq!(run.poly_k.degree(), run.ray.h_f);
    assert_eq!(run.poly_k.multiplicity, 1);
    let c0 = &run.poly_k.coeffs[0];
    let n = &c0.0 * &c0.0 - &c0.0 * &c0.1 + BigInt::from(3) * &c0.1 * &c0.1;
    assert_eq!(n, BigInt::from(1));
}
