//! Randomized invariants: transformation laws of the Siegel function,
//! multiplier consistency, group counts and exact arithmetic identities.

use num_rational::Ratio;
use proptest::prelude::*;
use rayclass_core::arith::gcd;
use rayclass_core::bigfloat::{BigComplex, Ctx};
use rayclass_core::quadfield::{Field, FieldElement};
use rayclass_core::rayclass::{galois_elements, ray_class_number, Modulus};
use rayclass_core::reciprocity::{herglotz_omega, Gen, SL2Word};
use rayclass_core::siegel::{rel_close, PhiArgs, PhiEvaluator, Rat, PHI_SLACK_BITS};

const PREC: u32 = 160;
const TOL: i64 = (PREC - PHI_SLACK_BITS - 8) as i64;

fn field_strategy() -> impl Strategy<Value = Field> {
    (-200i64..=-5).prop_filter_map("not an admissible field", |d| Field::new(d).ok())
}

fn rat_strategy() -> impl Strategy<Value = Rat> {
    (-40i64..40, 1i64..13).prop_map(|(a, b)| Ratio::new(a, b))
}

fn args_strategy() -> impl Strategy<Value = PhiArgs> {
    (rat_strategy(), rat_strategy())
        .prop_map(|(u, v)| PhiArgs::new(u, v))
        .prop_filter("lattice point", |a| !a.is_lattice())
}

/// Points with `Im z >= 1/2` and `|z| <= 3/2`.
fn point_strategy() -> impl Strategy<Value = (f64, f64)> {
    (-0.9f64..0.9, 0.5f64..1.2).prop_filter("outside the disc", |(x, y)| x * x + y * y <= 2.25)
}

fn point(x: f64, y: f64) -> BigComplex {
    BigComplex::from_f64(x, y, PREC + 64)
}

fn phi_at(z: &BigComplex, a: &PhiArgs) -> BigComplex {
    PhiEvaluator::new(z, PREC).unwrap().eval(a).unwrap()
}

fn turns(ctx: &Ctx, r: Rat) -> BigComplex {
    ctx.cis_turns(&r)
}

fn word_strategy() -> impl Strategy<Value = SL2Word> {
    proptest::collection::vec(prop_oneof![Just(None), (-3i64..=3).prop_map(Some)], 1..8).prop_map(|v| {
        SL2Word(
            v.into_iter()
                .map(|g| match g {
                    None => Gen::S,
                    Some(k) => Gen::T(k),
                })
                .collect(),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn shift_in_u(a in args_strategy(), (x, y) in point_strategy()) {
        let z = point(x, y);
        let ctx = Ctx::new(PREC + 32);
        let lhs = phi_at(&z, &PhiArgs::new(a.u + 1, a.v));
        let rhs = phi_at(&z, &a).mul(&turns(&ctx, Ratio::new(1, 2) - a.v / 2));
        prop_assert!(rel_close(&lhs, &rhs, TOL));
    }

    #[test]
    fn shift_in_v(a in args_strategy(), (x, y) in point_strategy()) {
        let z = point(x, y);
        let ctx = Ctx::new(PREC + 32);
        let lhs = phi_at(&z, &PhiArgs::new(a.u, a.v + 1));
        let rhs = phi_at(&z, &a).mul(&turns(&ctx, Ratio::new(1, 2) + a.u / 2));
        prop_assert!(rel_close(&lhs, &rhs, TOL));
    }

    #[test]
    fn translation_of_z(a in args_strategy(), (x, y) in point_strategy()) {
        let z = point(x, y);
        let ctx = Ctx::new(PREC + 32);
        let z1 = z.add(&BigComplex::one(PREC + 64));
        let lhs = phi_at(&z1, &a);
        let rhs = phi_at(&z, &PhiArgs::new(a.u, a.u + a.v)).mul(&turns(&ctx, Ratio::new(1, 12)));
        prop_assert!(rel_close(&lhs, &rhs, TOL));
    }

    #[test]
    fn inversion_of_z(a in args_strategy(), (x, y) in point_strategy()) {
        let z = point(x, y);
        let ctx = Ctx::new(PREC + 32);
        let zi = BigComplex::one(PREC + 64).div(&z).neg();
        let lhs = phi_at(&zi, &a);
        let rhs = phi_at(&z, &PhiArgs::new(a.v, -a.u)).mul(&turns(&ctx, Ratio::new(-1, 4)));
        prop_assert!(rel_close(&lhs, &rhs, TOL));
    }

    #[test]
    fn odd_symmetry(a in args_strategy(), (x, y) in point_strategy()) {
        let z = point(x, y);
        let lhs = phi_at(&z, &PhiArgs::new(-a.u, -a.v));
        prop_assert!(rel_close(&lhs, &phi_at(&z, &a).neg(), TOL));
    }

    #[test]
    fn general_multiplier(a in args_strategy(), w in word_strategy(), (x, y) in point_strategy()) {
        let m = w.product();
        let z = point(x, y);
        let p = PREC + 64;
        let c = |v: i128| BigComplex::from_i64(v as i64, p);
        let az = c(m[0]).mul(&z).add(&c(m[1])).div(&c(m[2]).mul(&z).add(&c(m[3])));
        prop_assume!(az.im.to_f64() > 0.05);
        let ctx = Ctx::new(PREC + 32);
        let lhs = phi_at(&az, &a);
        let rhs = phi_at(&z, &a.act(&m)).mul(&turns(&ctx, Ratio::new(herglotz_omega(&m), 12)));
        prop_assert!(rel_close(&lhs, &rhs, TOL - 16));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn herglotz_agrees_with_words(w in word_strategy()) {
        prop_assert_eq!(herglotz_omega(&w.product()), w.omega_exponent().rem_euclid(12));
    }

    #[test]
    fn norm_is_multiplicative(k in field_strategy(), a in -50i64..50, b in -50i64..50, c in -50i64..50, d in -50i64..50) {
        let x = FieldElement::new(a, b);
        let y = FieldElement::new(c, d);
        prop_assert_eq!(k.norm(k.mul(x, y)), k.norm(x) * k.norm(y));
        prop_assert_eq!(k.conj(k.conj(x)), x);
    }

    #[test]
    fn form_ideal_round_trip(k in field_strategy()) {
        let forms = k.class_group();
        prop_assert!(forms.iter().all(|q| q.is_reduced() && q.discriminant() == k.discriminant()));
        for q in &forms {
            prop_assert_eq!(k.form_from_ideal(&k.ideal_from_form(q)), *q);
        }
    }

    #[test]
    fn class_products_stay_in_the_group(k in field_strategy()) {
        let forms = k.class_group();
        let h = forms.len();
        let i0 = k.ideal_from_form(&forms[h - 1]);
        let mut seen: Vec<_> = forms
            .iter()
            .map(|q| k.form_from_ideal(&k.ideal_mul(&i0, &k.ideal_from_form(q))))
            .collect();
        seen.sort();
        seen.dedup();
        // multiplication by a fixed class permutes the group
        prop_assert_eq!(seen.len(), h);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn galois_count_matches_ray_class_number(k in field_strategy(), n in 2i64..=12) {
        let m = Modulus::rational(&k, n).unwrap();
        let els = galois_elements(&k, &m).unwrap();
        prop_assert_eq!(els.len(), ray_class_number(&k, &m).unwrap());
        for g in &els {
            prop_assert_eq!(gcd(g.gamma.det(), m.level), 1);
        }
    }
}
