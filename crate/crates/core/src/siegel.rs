//! The Siegel function
//!
//! `phi(u, v, z) = -i q^{1/12} e^{pi i u g} (e^{pi i g} - e^{-pi i g})
//!                 prod_{n>=1} (1 - q^n e^{2 pi i g}) (1 - q^n e^{-2 pi i g})`
//!
//! with `g = u z + v` and `q = e^{2 pi i z}`, evaluated to a requested number
//! of bits after exact reduction of `(u, v)` into `[0, 1)^2`.

use alloc::vec::Vec;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;

use crate::bigfloat::{BigComplex, BigFloat, Ctx};
use crate::quadfield::QuadForm;
use crate::{Error, Result};

pub type Rat = Ratio<i64>;

/// Relative error of [`PhiEvaluator::eval`] is below `2^(-prec + PHI_SLACK_BITS)`.
pub const PHI_SLACK_BITS: u32 = 8;

/// Largest product length accepted before reporting [`Error::PrecisionTooLow`].
pub const MAX_TERMS: usize = 1 << 20;

/// A root of unity `exp(2 pi i r)`, stored as `r` in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Phase(Rat);

impl Phase {
    pub fn one() -> Self {
        Phase(Rat::zero())
    }

    pub fn turns(r: Rat) -> Self {
        Phase(r - r.floor())
    }

    /// The twelfth root of unity `exp(2 pi i e / 12)`.
    pub fn twelfth(e: i64) -> Self {
        Self::turns(Rat::new(e, 12))
    }

    pub fn angle(&self) -> Rat {
        self.0
    }

    pub fn mul(&self, o: &Phase) -> Phase {
        Self::turns(self.0 + o.0)
    }

    pub fn pow(&self, k: i64) -> Phase {
        Self::turns(self.0 * k)
    }

    pub fn value(&self, ctx: &Ctx) -> BigComplex {
        ctx.cis_turns(&self.0)
    }
}

/// Arguments `(u, v)` of the Siegel function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PhiArgs {
    pub u: Rat,
    pub v: Rat,
}

impl PhiArgs {
    pub fn new(u: Rat, v: Rat) -> Self {
        PhiArgs { u, v }
    }

    pub fn is_lattice(&self) -> bool {
        self.u.is_integer() && self.v.is_integer()
    }

    /// Row vector times integer matrix `(a b; c d)`.
    pub fn act(&self, m: &[i128; 4]) -> PhiArgs {
        let r = |x: i128| Rat::from_integer(i64::try_from(x).expect("matrix entry overflow"));
        PhiArgs {
            u: self.u * r(m[0]) + self.v * r(m[2]),
            v: self.u * r(m[1]) + self.v * r(m[3]),
        }
    }
}

/// `phi(u, v, z) = phase * phi(u0, v0, z)` with `u0, v0` in `[0, 1)`.
///
/// Uses `phi(u + 1, v) = -e^{-pi i v} phi(u, v)` for the integer part of `u`,
/// then `phi(u, v + 1) = -e^{pi i u} phi(u, v)` for the integer part of `v`.
pub fn reduce_args(u: Rat, v: Rat) -> (Rat, Rat, Phase) {
    let half = Rat::new(1, 2);
    let ku = u.floor();
    let mut phase = ku * (half - v / 2);
    let u0 = u - ku;
    let kv = v.floor();
    phase += kv * (half + u0 / 2);
    (u0, v - kv, Phase::turns(phase))
}

/// A CM point `re + i sqrt(im_sq)` with rational data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CmPoint {
    pub re: Rat,
    pub im_sq: Rat,
}

impl CmPoint {
    /// `tau_Q = (-b + sqrt d) / 2a`.
    pub fn of_form(q: &QuadForm) -> Self {
        let d = q.discriminant();
        CmPoint {
            re: Rat::new(-q.b, 2 * q.a),
            im_sq: Rat::new(-d, 4 * q.a * q.a),
        }
    }

    pub fn to_complex(&self, prec: u32) -> BigComplex {
        let wp = prec + 8;
        let im = BigFloat::from_ratio(&self.im_sq, wp).sqrt();
        BigComplex::new(BigFloat::from_ratio(&self.re, prec), im.with_prec(prec))
    }
}

fn bitlen(n: usize) -> u32 {
    usize::BITS - n.leading_zeros()
}

/// Evaluates `phi(., ., z)` at a fixed `z`, sharing powers of `q`.
#[derive(Debug, Clone)]
pub struct PhiEvaluator {
    prec: u32,
    wp: u32,
    ctx: Ctx,
    z: BigComplex,
    q_pows: Vec<BigComplex>,
    pre: BigComplex,
}

impl PhiEvaluator {
    pub fn new(z: &BigComplex, prec: u32) -> Result<Self> {
        let y = z.im.to_f64();
        if !(y > 0.0) {
            return Err(Error::Invalid("z must lie in the upper half plane"));
        }
        let terms = |guard: u32| -> f64 {
            libm::ceil((prec + guard) as f64 * core::f64::consts::LN_2 / (2.0 * core::f64::consts::PI * y)) + 2.0
        };
        let n0 = terms(32);
        if !(n0 < MAX_TERMS as f64) {
            return Err(Error::PrecisionTooLow);
        }
        let guard = 32 + bitlen(n0 as usize);
        let n = terms(guard) as usize;
        if n > MAX_TERMS {
            return Err(Error::PrecisionTooLow);
        }
        let wp = prec + guard;
        let ctx = Ctx::new(wp);
        let z = z.with_prec(wp);
        let two_pi_i = BigComplex::new(BigFloat::zero(wp), ctx.pi().mul_2exp(1));
        let q = two_pi_i.mul(&z).exp();
        let mut q_pows = Vec::with_capacity(n);
        let mut qn = q.clone();
        for _ in 0..n {
            let next = qn.mul(&q);
            q_pows.push(qn);
            qn = next;
        }
        // -i e^{pi i z / 6}
        let pre = two_pi_i.mul(&z).mul_2exp(-2).scale(&BigFloat::from_ratio(&Rat::new(1, 3), wp));
        let pre = pre.exp().mul_i_pow(3);
        Ok(PhiEvaluator {
            prec,
            wp,
            ctx,
            z,
            q_pows,
            pre,
        })
    }

    pub fn for_form(q: &QuadForm, prec: u32) -> Result<Self> {
        let z = CmPoint::of_form(q).to_complex(prec + 64);
        Self::new(&z, prec)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn terms(&self) -> usize {
        self.q_pows.len()
    }

    /// Value at working precision, before final rounding.
    pub fn eval_raw(&self, a: &PhiArgs) -> Result<BigComplex> {
        if a.is_lattice() {
            return Err(Error::LatticeArgument);
        }
        let wp = self.wp;
        let (u0, v0, phase) = reduce_args(a.u, a.v);
        let uf = BigFloat::from_ratio(&u0, wp);
        let vf = BigFloat::from_ratio(&v0, wp);
        // g = u0 z + v0
        let g = self.z.scale(&uf).add(&BigComplex::from_real(vf));
        let pi_i = BigComplex::new(BigFloat::zero(wp), self.ctx.pi().clone());
        let pig = pi_i.mul(&g);
        let e_half = pig.exp();
        let e_half_inv = e_half.recip();
        let e1 = pig.scale(&uf).exp();
        let e = e_half.mul(&e_half);
        let e_inv = e_half_inv.mul(&e_half_inv);
        let one = BigComplex::one(wp);
        let mut val = self.pre.mul(&e1).mul(&e_half.sub(&e_half_inv));
        for qn in &self.q_pows {
            let f1 = one.sub(&qn.mul(&e));
            let f2 = one.sub(&qn.mul(&e_inv));
            val = val.mul(&f1.mul(&f2));
        }
        if phase != Phase::one() {
            val = val.mul(&phase.value(&self.ctx));
        }
        Ok(val)
    }

    pub fn eval(&self, a: &PhiArgs) -> Result<BigComplex> {
        Ok(self.eval_raw(a)?.with_prec(self.prec))
    }

    /// `phi(num) / phi(den)` at the shared point.
    pub fn quotient(&self, num: &PhiArgs, den: &PhiArgs) -> Result<BigComplex> {
        let n = self.eval_raw(num)?;
        let d = self.eval_raw(den)?;
        Ok(n.div(&d).with_prec(self.prec))
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }
}

/// `phi(u, v, z)` to `prec` bits.
pub fn phi(a: &PhiArgs, z: &BigComplex, prec: u32) -> Result<BigComplex> {
    PhiEvaluator::new(z, prec)?.eval(a)
}

pub fn phi_quotient(num: &PhiArgs, den: &PhiArgs, z: &BigComplex, prec: u32) -> Result<BigComplex> {
    PhiEvaluator::new(z, prec)?.quotient(num, den)
}

/// `12 N / gcd(6, N)`.
pub fn classical_exponent(n: i64) -> u64 {
    (12 * n / n.gcd(&6)) as u64
}

/// `phi(0, 1/N, tau)^{12N / gcd(6, N)}`.
pub fn classical_generator(n: i64, tau: &BigComplex, prec: u32) -> Result<BigComplex> {
    if n < 2 {
        return Err(Error::Invalid("level must be at least 2"));
    }
    let e = classical_exponent(n);
    let extra = 64 - e.leading_zeros();
    let v = phi(&PhiArgs::new(Rat::zero(), Rat::new(1, n)), tau, prec + extra)?;
    Ok(v.powu(e).with_prec(prec))
}

/// `true` if `|a - b| <= 2^(-bits) * max(1, |b|)`.
pub fn rel_close(a: &BigComplex, b: &BigComplex, bits: i64) -> bool {
    let d = a.sub(b);
    if d.is_zero() {
        return true;
    }
    let scale = b.log2_abs().max(0.0);
    d.log2_abs() <= scale - bits as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    #[test]
    fn reduction_phases() {
        let (u, v, p) = reduce_args(Rat::new(0, 1), Rat::new(1, 5));
        assert_eq!((u, v, p), (Rat::zero(), Rat::new(1, 5), Phase::one()));
        let (u, v, _) = reduce_args(Rat::new(3622, 5), Rat::new(877, 5));
        assert_eq!((u, v), (Rat::new(2, 5), Rat::new(2, 5)));
        // one v-step: -e^{pi i u}
        let (_, _, p) = reduce_args(Rat::new(1, 3), Rat::new(6, 5));
        assert_eq!(p, Phase::turns(Rat::new(1, 2) + Rat::new(1, 6)));
    }

    #[test]
    fn reduced_phase_matches_direct_evaluation() {
        // direct evaluation of the product at moderately large arguments
        let z = CmPoint::of_form(&QuadForm::new(1, 1, 23)).to_complex(P);
        let ev = PhiEvaluator::new(&z, P).unwrap();
        for (u, v) in [(Rat::new(7, 5), Rat::new(-3, 5)), (Rat::new(-2, 3), Rat::new(5, 3))] {
            let reduced = ev.eval(&PhiArgs::new(u, v)).unwrap();
            let direct = direct_phi(&ev, u, v);
            assert!(rel_close(&reduced, &direct, P as i64 - 40));
        }
    }

    fn direct_phi(ev: &PhiEvaluator, u: Rat, v: Rat) -> BigComplex {
        let wp = ev.wp;
        let uf = BigFloat::from_ratio(&u, wp);
        let g = ev.z.scale(&uf).add(&BigComplex::from_real(BigFloat::from_ratio(&v, wp)));
        let pi_i = BigComplex::new(BigFloat::zero(wp), ev.ctx.pi().clone());
        let eh = pi_i.mul(&g).exp();
        let ehi = eh.recip();
        let e1 = pi_i.mul(&g).scale(&uf).exp();
        let e = eh.mul(&eh);
        let ei = ehi.mul(&ehi);
        let one = BigComplex::one(wp);
        let mut val = ev.pre.mul(&e1).mul(&eh.sub(&ehi));
        for qn in &ev.q_pows {
            val = val.mul(&one.sub(&qn.mul(&e))).mul(&one.sub(&qn.mul(&ei)));
        }
        val.with_prec(ev.prec)
    }

    #[test]
    fn odd_symmetry() {
        let z = CmPoint::of_form(&QuadForm::new(1, 1, 23)).to_complex(P);
        let ev = PhiEvaluator::new(&z, P).unwrap();
        let a = ev.eval(&PhiArgs::new(Rat::new(1, 5), Rat::new(2, 5))).unwrap();
        let b = ev.eval(&PhiArgs::new(Rat::new(-1, 5), Rat::new(-2, 5))).unwrap();
        assert!(rel_close(&a, &b.neg(), (P - PHI_SLACK_BITS) as i64));
    }

    #[test]
    fn lattice_arguments_rejected() {
        let z = CmPoint::of_form(&QuadForm::new(1, 0, 10)).to_complex(P);
        assert_eq!(
            phi(&PhiArgs::new(Rat::from_integer(1), Rat::zero()), &z, P),
            Err(Error::LatticeArgument)
        );
    }

    #[test]
    fn quotient_of_equal_arguments_is_one() {
        let z = CmPoint::of_form(&QuadForm::new(1, 0, 10)).to_complex(P);
        let a = PhiArgs::new(Rat::zero(), Rat::new(1, 6));
        let q = phi_quotient(&a, &a, &z, P).unwrap();
        assert!(rel_close(&q, &BigComplex::one(P), P as i64 - 4));
    }

    #[test]
    fn classical_exponents() {
        assert_eq!(classical_exponent(6), 12);
        assert_eq!(classical_exponent(5), 60);
        assert_eq!(classical_exponent(12), 24);
        assert_eq!(classical_exponent(2), 12);
    }
}
