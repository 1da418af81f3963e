//! Ray class data for a modulus: roots of unity, degeneracy, choice of the
//! class `c`, and the Galois group as pairs (unit matrix, reduced form).

use alloc::vec::Vec;

use crate::arith::{crt, factor, gcd, inv_mod, modp, valuation};
use crate::quadfield::{Field, FieldElement, Ideal, QuadForm};
use crate::reciprocity::{gee_uq, lift_with_det, ResidueMatrix, WClassMatrix};
use crate::{Error, Result};

/// A modulus `f` together with its minimal integer `f` and level `12 f^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Modulus {
    pub ideal: Ideal,
    pub f: i64,
    pub level: i64,
    pub norm: i64,
}

impl Modulus {
    pub fn new(field: &Field, ideal: Ideal) -> Result<Modulus> {
        let f = field.minimal_integer(&ideal)?;
        Ok(Modulus {
            ideal,
            f,
            level: 12 * f * f,
            norm: ideal.norm(),
        })
    }

    pub fn rational(field: &Field, n: i64) -> Result<Modulus> {
        if n == 0 {
            return Err(Error::ZeroIdeal);
        }
        Self::new(field, field.int_ideal(n.abs())?)
    }

    /// `12 f`, the modulus of all determinant conditions.
    pub fn twelve_f(&self) -> i64 {
        12 * self.f
    }
}

/// Numerical invariants of the ray class field `K_f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RayData {
    /// number of roots of unity in `K_f`
    pub w: i64,
    /// `12 f / w`
    pub ell: i64,
    pub degenerate: bool,
    /// `[K_f : K]`
    pub h_f: usize,
}

/// `N(a + b tau)` for the principal form.
pub fn tau_norm(field: &Field, a: i128, b: i128) -> i128 {
    let (b0, c0) = field.tau_poly();
    a * a - b0 as i128 * a * b + c0 as i128 * b * b
}

/// Number of roots of unity in `K_f`: the largest `n | 12 f` such that every
/// `alpha = 1 (mod f)` prime to `n` has norm `1 (mod n)`.
pub fn roots_of_unity_count(field: &Field, m: &Modulus) -> i64 {
    let (fm, nt, k) = field.tau_hnf(&m.ideal);
    let mut w = 1i64;
    for (p, e) in factor(m.twelve_f() as u64) {
        let p = p as i64;
        let mut best = 1;
        for j in 1..=e {
            let n = p.pow(j);
            if passes_norm_test(field, fm, nt, k, n, p) {
                best = n;
            } else {
                break;
            }
        }
        w *= best;
    }
    w
}

fn passes_norm_test(field: &Field, fm: i64, nt: i64, k: i64, n: i64, p: i64) -> bool {
    for i in 0..n {
        for j in 0..n {
            // 1 + i*fm + j*(nt + k tau)
            let a = 1 + i as i128 * fm as i128 + j as i128 * nt as i128;
            let b = j as i128 * k as i128;
            let nn = modp(tau_norm(field, a, b), n);
            if nn % p == 0 {
                continue;
            }
            if nn != 1 % n {
                return false;
            }
        }
    }
    true
}

/// `N(x') mod w` for a lift `x'` of `t + s tau` that is prime to the level.
pub fn class_norm(field: &Field, m: &Modulus, st: (i64, i64), w: i64) -> Result<i64> {
    let id = ResidueMatrix::identity(m.level);
    let (s, t) = lift_with_det(field, &m.ideal, st, m.level, &id, 1)?;
    let n = WClassMatrix::new(s, t, field.principal_form()).det();
    Ok(modp(n, w))
}

/// Units of `O/f` modulo sign whose norm is `1 (mod w)`, excluding `+-1`,
/// in lexicographic `(s, t)` order.
pub fn admissible_classes(field: &Field, m: &Modulus, w: i64) -> Result<Vec<(i64, i64)>> {
    let res = field.invertible_residues(&m.ideal)?;
    let one = field.reduce_mod(&m.ideal, 0, 1);
    let minus = field.reduce_mod(&m.ideal, 0, -1);
    let mut out = Vec::new();
    for st in res.representatives() {
        if st == one || st == minus {
            continue;
        }
        if class_norm(field, m, st, w)? == 1 % w {
            out.push(st);
        }
    }
    Ok(out)
}

pub fn is_degenerate(field: &Field, m: &Modulus, w: i64) -> Result<bool> {
    Ok(admissible_classes(field, m, w)?.is_empty())
}

/// First admissible class in lexicographic order.
pub fn select_class(field: &Field, m: &Modulus, w: i64) -> Result<(i64, i64)> {
    admissible_classes(field, m, w)?
        .first()
        .copied()
        .ok_or(Error::NoClassFound)
}

/// `e_c = W / gcd(W, d_c - 1)`.
pub fn e_value(w: i64, d_c: i64) -> i64 {
    w / gcd(w, d_c - 1)
}

/// `[K_f : K] = h_K |(O/f)^*| / |{+-1} mod f|`.
pub fn ray_class_number(field: &Field, m: &Modulus) -> Result<usize> {
    let units = field.invertible_residues(&m.ideal)?.len();
    let signs = if m.ideal.contains(FieldElement::int(2)) { 1 } else { 2 };
    Ok(field.class_number() * units / signs)
}

pub fn ray_data(field: &Field, m: &Modulus) -> Result<RayData> {
    let w = roots_of_unity_count(field, m);
    Ok(RayData {
        w,
        ell: m.twelve_f() / w,
        degenerate: is_degenerate(field, m, w)?,
        h_f: ray_class_number(field, m)?,
    })
}

/// A unit `t + s tau` of `O/level` paired with a reduced form; acts on level
/// `level` functions through `h(y) u_Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClassPair {
    pub s: i64,
    pub t: i64,
    pub form: QuadForm,
    pub level: i64,
}

impl ClassPair {
    pub fn new(s: i64, t: i64, form: QuadForm, level: i64) -> Self {
        ClassPair {
            s: s.rem_euclid(level),
            t: t.rem_euclid(level),
            form,
            level,
        }
    }

    pub fn unit_matrix(&self, field: &Field) -> ResidueMatrix {
        WClassMatrix::new(self.s, self.t, field.principal_form()).at_level(self.level)
    }

    /// `h(y) u_Q` modulo the level.
    pub fn matrix(&self, field: &Field) -> ResidueMatrix {
        self.unit_matrix(field).mul(&gee_uq(&self.form, self.level))
    }
}

type Tau = (i128, i128);

fn tmul(field: &Field, x: Tau, y: Tau) -> Tau {
    let (b0, c0) = field.tau_poly();
    let (a, b) = x;
    let (c, d) = y;
    (a * c - b * d * c0 as i128, a * d + b * c - b * d * b0 as i128)
}

fn tconj(field: &Field, x: Tau) -> Tau {
    let (b0, _) = field.tau_poly();
    (x.0 - b0 as i128 * x.1, -x.1)
}

/// Local generator of the ideal of `Q` at `p`.
fn local_generator(field: &Field, q: &QuadForm, p: i64) -> Tau {
    let (b0, _) = field.tau_poly();
    let a_tau = (((b0 - q.b) / 2) as i128, 1);
    if q.a % p != 0 {
        (q.a as i128, 0)
    } else if q.c % p != 0 {
        a_tau
    } else {
        (a_tau.0 - q.a as i128, 1)
    }
}

/// Group law on pairs: `(y1, Q1) (y2, Q2) = (y1 y2 y12, Q3)` where `Q3`
/// represents the class of the product ideal and `y12` corrects the local
/// generators by the global generator of `a1 a2 conj(a3)`.
pub fn compose(field: &Field, x: &ClassPair, y: &ClassPair) -> Result<ClassPair> {
    let level = x.level;
    let i1 = field.ideal_from_form(&x.form);
    let i2 = field.ideal_from_form(&y.form);
    let prod = field.ideal_mul(&i1, &i2);
    let q3 = field.form_from_ideal(&prod);
    let i3c = field.ideal_conj(&field.ideal_from_form(&q3));
    let beta = field.principal_generator(&field.ideal_mul(&prod, &i3c))?;
    let beta = {
        let (a, b) = field.to_tau(beta);
        (a as i128, b as i128)
    };
    let beta_bar = tconj(field, beta);
    let nb = tau_norm(field, beta.0, beta.1);
    let mut parts_a = Vec::new();
    let mut parts_b = Vec::new();
    for (p, e) in factor(level as u64) {
        let p = p as i64;
        let pe = p.pow(e);
        let x1 = local_generator(field, &x.form, p);
        let x2 = local_generator(field, &y.form, p);
        let x3 = local_generator(field, &q3, p);
        let mut num = tmul(field, tmul(field, x1, x2), (q3.a as i128, 0));
        num = tmul(field, num, tmul(field, beta_bar, tconj(field, x3)));
        let mut den = nb * tau_norm(field, x3.0, x3.1);
        let v = valuation(den, p);
        for _ in 0..v {
            if num.0 % p as i128 != 0 || num.1 % p as i128 != 0 {
                return Err(Error::Invalid("local correction is not integral"));
            }
            num = (num.0 / p as i128, num.1 / p as i128);
            den /= p as i128;
        }
        let inv = inv_mod(modp(den, pe), pe).ok_or(Error::Invalid("local correction is not a unit"))?;
        parts_a.push((modp(modp(num.0, pe) as i128 * inv as i128, pe), pe));
        parts_b.push((modp(modp(num.1, pe) as i128 * inv as i128, pe), pe));
    }
    let y12 = (crt(&parts_a) as i128, crt(&parts_b) as i128);
    let y1 = (x.t as i128, x.s as i128);
    let y2 = (y.t as i128, y.s as i128);
    let r = tmul(field, y1, y2);
    let r = (modp(r.0, level) as i128, modp(r.1, level) as i128);
    let r = tmul(field, r, y12);
    Ok(ClassPair::new(modp(r.1, level), modp(r.0, level), q3, level))
}

/// One element of `Gal(K_f / K)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GaloisElement {
    /// lift of the unit class, `t + s tau` at the level
    pub pair: ClassPair,
    pub beta: ResidueMatrix,
    pub uq: ResidueMatrix,
    /// `beta u_Q`
    pub gamma: ResidueMatrix,
    /// `det(beta u_Q) mod 12 f`
    pub d_det: i64,
}

impl GaloisElement {
    pub fn form(&self) -> QuadForm {
        self.pair.form
    }
}

/// All pairs (unit class modulo sign, reduced form), units outer.
pub fn galois_elements(field: &Field, m: &Modulus) -> Result<Vec<GaloisElement>> {
    let res = field.invertible_residues(&m.ideal)?;
    let forms = field.class_group();
    let id = ResidueMatrix::identity(m.level);
    let uqs: Vec<ResidueMatrix> = forms.iter().map(|q| gee_uq(q, m.level)).collect();
    let mut out = Vec::with_capacity(res.orbit_count() * forms.len());
    for st in res.representatives() {
        let (s, t) = lift_with_det(field, &m.ideal, st, m.level, &id, 1)?;
        let beta = WClassMatrix::new(s, t, field.principal_form()).at_level(m.level);
        for (q, uq) in forms.iter().zip(&uqs) {
            let gamma = beta.mul(uq);
            out.push(GaloisElement {
                pair: ClassPair::new(s, t, *q, m.level),
                beta,
                uq: *uq,
                gamma,
                d_det: gamma.det() % m.twelve_f(),
            });
        }
    }
    Ok(out)
}

/// A class `c` lifted to the level: `alpha` in `W_{M,tau}` with
/// `det(alpha u_Q) = 1 (mod ell)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LiftedClass {
    /// class of `t + s tau` modulo `f`
    pub class: (i64, i64),
    pub pair: ClassPair,
    pub alpha: ResidueMatrix,
    pub d_c: i64,
    pub e_c: i64,
}

pub fn lift_class(
    field: &Field,
    m: &Modulus,
    ray: &RayData,
    class: (i64, i64),
    form: QuadForm,
) -> Result<LiftedClass> {
    let uq = gee_uq(&form, m.level);
    let (s, t) = lift_with_det(field, &m.ideal, class, m.level, &uq, ray.ell)?;
    let alpha = WClassMatrix::new(s, t, field.principal_form()).at_level(m.level);
    let d_c = modp(alpha.mul(&uq).det() as i128, ray.w);
    Ok(LiftedClass {
        class,
        pair: ClassPair::new(s, t, form, m.level),
        alpha,
        d_c,
        e_c: e_value(ray.w, d_c),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(d: i64, n: i64) -> (Field, Modulus) {
        let k = Field::new(d).unwrap();
        let m = Modulus::rational(&k, n).unwrap();
        (k, m)
    }

    #[test]
    fn roots_of_unity() {
        let (k, m) = setup(-91, 5);
        assert_eq!(roots_of_unity_count(&k, &m), 10);
        let (k, m) = setup(-10, 6);
        assert_eq!(roots_of_unity_count(&k, &m), 24);
        let (k, m) = setup(-11, 9);
        assert_eq!(roots_of_unity_count(&k, &m), 18);
    }

    #[test]
    fn degeneracy_and_classes() {
        let (k, m) = setup(-91, 5);
        assert!(!is_degenerate(&k, &m, 10).unwrap());
        assert_eq!(select_class(&k, &m, 10), Ok((2, 1)));
        let (k, m) = setup(-10, 6);
        assert_eq!(admissible_classes(&k, &m, 24).unwrap(), [(2, 3)]);
        let (k, m) = setup(-7, 2);
        let w = roots_of_unity_count(&k, &m);
        assert!(is_degenerate(&k, &m, w).unwrap());
        assert_eq!(select_class(&k, &m, w), Err(Error::NoClassFound));
    }

    #[test]
    fn e_values() {
        assert_eq!(e_value(10, 3), 5);
        assert_eq!(e_value(10, 1), 1);
        assert_eq!(e_value(24, 49 % 24), 1);
    }

    #[test]
    fn class_numbers() {
        for (d, n, h) in [(-91, 5, 16), (-10, 6, 16), (-11, 9, 18)] {
            let (k, m) = setup(d, n);
            assert_eq!(ray_class_number(&k, &m), Ok(h));
            assert_eq!(galois_elements(&k, &m).unwrap().len(), h);
        }
    }

    #[test]
    fn lifted_class_with_nontrivial_e() {
        let (k, m) = setup(-91, 5);
        let ray = ray_data(&k, &m).unwrap();
        let c = lift_class(&k, &m, &ray, (2, 1), QuadForm::new(5, 3, 5)).unwrap();
        assert_eq!(c.alpha.entries(), [9, 254, 2, 11]);
        assert_eq!((c.d_c, c.e_c), (3, 5));
    }

    #[test]
    fn composition_identity_and_class_group_law() {
        let (k, m) = setup(-91, 5);
        let q1 = QuadForm::new(1, 1, 23);
        let q2 = QuadForm::new(5, 3, 5);
        let one = ClassPair::new(0, 1, q1, m.level);
        let x = ClassPair::new(2, 11, q2, m.level);
        let r = compose(&k, &one, &x).unwrap();
        assert_eq!(r.form, q2);
        let r2 = compose(&k, &x, &x).unwrap();
        assert_eq!(r2.form, q1);
    }
}
