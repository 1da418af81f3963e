//! Binary floating point numbers on top of `BigInt` mantissas, and complex
//! numbers built from them.
//!
//! A value is `m * 2^e` together with the number of mantissa bits it is
//! allowed to carry. Results of binary operations take the smaller precision of
//! the operands; rounding truncates.

use alloc::string::String;
use core::cmp::Ordering;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug)]
pub struct BigFloat {
    m: BigInt,
    e: i64,
    prec: u32,
}

fn bits(m: &BigInt) -> i64 {
    m.bits() as i64
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        BigFloat {
            m: BigInt::zero(),
            e: 0,
            prec,
        }
    }

    pub fn from_i64(x: i64, prec: u32) -> Self {
        Self::from_bigint(BigInt::from(x), prec)
    }

    pub fn from_bigint(m: BigInt, prec: u32) -> Self {
        BigFloat { m, e: 0, prec }.normalized()
    }

    /// `m * 2^e`.
    pub fn from_parts(m: BigInt, e: i64, prec: u32) -> Self {
        BigFloat { m, e, prec }.normalized()
    }

    pub fn from_ratio(r: &Ratio<i64>, prec: u32) -> Self {
        let n = Self::from_i64(*r.numer(), prec + 8);
        let d = Self::from_i64(*r.denom(), prec + 8);
        n.div(&d).with_prec(prec)
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        if x == 0.0 {
            return Self::zero(prec);
        }
        let (fr, ex) = libm::frexp(x);
        let m = libm::ldexp(fr, 53) as i64;
        Self::from_parts(BigInt::from(m), ex as i64 - 53, prec)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn sign(&self) -> Sign {
        self.m.sign()
    }

    pub fn is_negative(&self) -> bool {
        self.m.is_negative()
    }

    fn normalized(mut self) -> Self {
        if self.m.is_zero() {
            self.e = 0;
            return self;
        }
        let b = bits(&self.m);
        if b > self.prec as i64 {
            let sh = b - self.prec as i64;
            self.m >>= sh as usize;
            self.e += sh;
        }
        self
    }

    /// Same value rounded to (or allowed to grow to) `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Self {
        BigFloat {
            m: self.m.clone(),
            e: self.e,
            prec,
        }
        .normalized()
    }

    /// Upper bound of `log2 |x|` (exact up to one), `i64::MIN` for zero.
    pub fn mag(&self) -> i64 {
        if self.m.is_zero() {
            i64::MIN
        } else {
            self.e + bits(&self.m)
        }
    }

    pub fn mul_2exp(&self, k: i64) -> Self {
        BigFloat {
            m: self.m.clone(),
            e: self.e + k,
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            m: self.m.abs(),
            e: self.e,
            prec: self.prec,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let prec = self.prec.min(o.prec);
        if o.m.is_zero() {
            return self.with_prec(prec);
        }
        if self.m.is_zero() {
            return o.with_prec(prec);
        }
        let (ta, tb) = (self.mag(), o.mag());
        if ta > tb + prec as i64 + 2 {
            return self.with_prec(prec);
        }
        if tb > ta + prec as i64 + 2 {
            return o.with_prec(prec);
        }
        let e = self.e.min(o.e);
        let m = (&self.m << (self.e - e) as usize) + (&o.m << (o.e - e) as usize);
        BigFloat { m, e, prec }.normalized()
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        BigFloat {
            m: -&self.m,
            e: self.e,
            prec: self.prec,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        BigFloat {
            m: &self.m * &o.m,
            e: self.e + o.e,
            prec: self.prec.min(o.prec),
        }
        .normalized()
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        BigFloat {
            m: &self.m * k,
            e: self.e,
            prec: self.prec,
        }
        .normalized()
    }

    pub fn div(&self, o: &Self) -> Self {
        assert!(!o.m.is_zero(), "division by zero");
        let prec = self.prec.min(o.prec);
        if self.m.is_zero() {
            return Self::zero(prec);
        }
        let sh = (prec as i64 + 2 + bits(&o.m) - bits(&self.m)).max(0);
        let m = (&self.m << sh as usize) / &o.m;
        BigFloat {
            m,
            e: self.e - o.e - sh,
            prec,
        }
        .normalized()
    }

    pub fn div_i64(&self, k: i64) -> Self {
        assert!(k != 0, "division by zero");
        let sh = (self.prec as i64 + 66 - bits(&self.m)).max(0);
        BigFloat {
            m: (&self.m << sh as usize) / k,
            e: self.e - sh,
            prec: self.prec,
        }
        .normalized()
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.m.is_negative(), "square root of a negative number");
        if self.m.is_zero() {
            return self.clone();
        }
        // shift so that the mantissa has about 2*prec bits and even exponent
        let mut sh = (2 * self.prec as i64 + 4 - bits(&self.m)).max(0);
        if (self.e - sh).rem_euclid(2) != 0 {
            sh += 1;
        }
        let m = (&self.m << sh as usize).sqrt();
        BigFloat {
            m,
            e: (self.e - sh) / 2,
            prec: self.prec,
        }
        .normalized()
    }

    /// Nearest integer, ties rounded up.
    pub fn round(&self) -> BigInt {
        if self.e >= 0 {
            &self.m << self.e as usize
        } else {
            let sh = (-self.e) as usize;
            let half = BigInt::one() << (sh - 1);
            (&self.m + half) >> sh
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.m.is_zero() {
            return 0.0;
        }
        let b = bits(&self.m);
        let sh = (b - 60).max(0);
        let top = (&self.m >> sh as usize).to_i64().unwrap_or(0) as f64;
        libm::ldexp(top, (self.e + sh).clamp(-100_000, 100_000) as i32)
    }

    /// Approximate `log2 |x|` as a float; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.m.is_zero() {
            return f64::NEG_INFINITY;
        }
        let b = bits(&self.m);
        let sh = (b - 60).max(0);
        let top = (self.m.abs() >> sh as usize).to_f64().unwrap_or(1.0);
        libm::log2(top) + (self.e + sh) as f64
    }

    pub fn cmp_abs(&self, o: &Self) -> Ordering {
        let p = self.prec.max(o.prec) + 8;
        let d = self.abs().with_prec(p).sub(&o.abs().with_prec(p));
        d.m.sign().cmp(&Sign::NoSign)
    }

    /// Decimal expansion with `digits` digits after the point.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let wp = self.prec + (digits as f64 * 3.33) as u32 + 16;
        let x = self
            .with_prec(wp)
            .mul(&BigFloat::from_bigint(scale, wp))
            .round();
        let neg = x.is_negative();
        let mut s = x.abs().to_str_radix(10);
        if digits > 0 {
            while s.len() <= digits {
                s.insert(0, '0');
            }
            s.insert(s.len() - digits, '.');
        }
        if neg {
            s.insert(0, '-');
        }
        s
    }

    /// Parses a decimal string as produced by [`BigFloat::to_decimal`].
    pub fn parse_decimal(s: &str, prec: u32) -> Option<Self> {
        let (neg, body) = match s.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, s),
        };
        let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
        let digits: String = ip.chars().chain(fp.chars()).collect();
        let mut m = BigInt::parse_bytes(digits.as_bytes(), 10)?;
        if neg {
            m = -m;
        }
        let wp = prec + 16;
        let den = BigFloat::from_bigint(BigInt::from(10u32).pow(fp.len() as u32), wp);
        Some(BigFloat::from_bigint(m, wp).div(&den).with_prec(prec))
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }
}

impl<'a> Add<&'a BigFloat> for &'a BigFloat {
    type Output = BigFloat;
    fn add(self, o: &BigFloat) -> BigFloat {
        BigFloat::add(self, o)
    }
}

impl<'a> Sub<&'a BigFloat> for &'a BigFloat {
    type Output = BigFloat;
    fn sub(self, o: &BigFloat) -> BigFloat {
        BigFloat::sub(self, o)
    }
}

impl<'a> Mul<&'a BigFloat> for &'a BigFloat {
    type Output = BigFloat;
    fn mul(self, o: &BigFloat) -> BigFloat {
        BigFloat::mul(self, o)
    }
}

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat::neg(self)
    }
}

/// Arbitrary precision complex number.
#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        BigComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Self::new(BigFloat::zero(prec), BigFloat::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(x: i64, prec: u32) -> Self {
        Self::new(BigFloat::from_i64(x, prec), BigFloat::zero(prec))
    }

    pub fn from_real(re: BigFloat) -> Self {
        let p = re.prec();
        Self::new(re, BigFloat::zero(p))
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Self::new(BigFloat::from_f64(re, prec), BigFloat::from_f64(im, prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().min(self.im.prec())
    }

    pub fn with_prec(&self, p: u32) -> Self {
        Self::new(self.re.with_prec(p), self.im.with_prec(p))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), self.im.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        Self::new(re, im)
    }

    pub fn scale(&self, k: &BigFloat) -> Self {
        Self::new(self.re.mul(k), self.im.mul(k))
    }

    pub fn mul_2exp(&self, k: i64) -> Self {
        Self::new(self.re.mul_2exp(k), self.im.mul_2exp(k))
    }

    /// Multiplication by `i^j`, exact.
    pub fn mul_i_pow(&self, j: i64) -> Self {
        match j.rem_euclid(4) {
            0 => self.clone(),
            1 => Self::new(self.im.neg(), self.re.clone()),
            2 => self.neg(),
            _ => Self::new(self.im.clone(), self.re.neg()),
        }
    }

    pub fn norm_sqr(&self) -> BigFloat {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt()
    }

    /// Approximate `log2 |z|`.
    pub fn log2_abs(&self) -> f64 {
        let m = self.re.mag().max(self.im.mag());
        if m == i64::MIN {
            return f64::NEG_INFINITY;
        }
        // rescale before squaring to stay in range
        let p = 80;
        let a = self.re.with_prec(p).mul_2exp(-m);
        let b = self.im.with_prec(p).mul_2exp(-m);
        let r = a.mul(&a).add(&b.mul(&b)).to_f64();
        0.5 * libm::log2(r) + m as f64
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        Self::new(self.re.div(&n), self.im.neg().div(&n))
    }

    pub fn div(&self, o: &Self) -> Self {
        let p = self.prec().min(o.prec());
        let wp = p + 8;
        let n = o.norm_sqr().with_prec(wp);
        let num = self.with_prec(wp).mul(&o.conj().with_prec(wp));
        Self::new(num.re.div(&n), num.im.div(&n)).with_prec(p)
    }

    pub fn powu(&self, mut n: u64) -> Self {
        let p = self.prec();
        let wp = p + 2 * (64 - n.leading_zeros()) + 4;
        let mut base = self.with_prec(wp);
        let mut acc = Self::one(wp);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc.with_prec(p)
    }

    /// Complex exponential by argument halving and a Taylor series.
    pub fn exp(&self) -> Self {
        let p = self.prec();
        let mag = self.re.mag().max(self.im.mag());
        if mag == i64::MIN {
            return Self::one(p);
        }
        let extra = (isqrt_u32(p) / 2).max(4) as i64;
        let s = (mag + extra).max(0);
        let wp = p + s as u32 + 24;
        let w = self.with_prec(wp).mul_2exp(-s);
        let mut sum = Self::one(wp);
        let mut term = Self::one(wp);
        let mut k = 1i64;
        loop {
            term = term.mul(&w);
            term = Self::new(term.re.div_i64(k), term.im.div_i64(k));
            sum = sum.add(&term);
            let tm = term.re.mag().max(term.im.mag());
            if tm == i64::MIN || tm < -(wp as i64) - 2 {
                break;
            }
            k += 1;
        }
        for _ in 0..s {
            sum = sum.mul(&sum);
        }
        sum.with_prec(p)
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

fn isqrt_u32(n: u32) -> u32 {
    crate::arith::isqrt(n as u128) as u32
}

/// Per-precision constants.
#[derive(Clone, Debug)]
pub struct Ctx {
    prec: u32,
    pi: BigFloat,
}

impl Ctx {
    pub fn new(prec: u32) -> Self {
        Ctx {
            prec,
            pi: pi(prec + 16).with_prec(prec),
        }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn pi(&self) -> &BigFloat {
        &self.pi
    }

    /// `exp(2 pi i r)` for a rational number of turns. Quarter turns are exact.
    pub fn cis_turns(&self, r: &Ratio<i64>) -> BigComplex {
        let p = self.prec;
        let four = *r * 4;
        let j = round_ratio(&four);
        let rest = *r - Ratio::new(j, 4);
        let base = if rest.is_zero() {
            BigComplex::one(p)
        } else {
            let wp = p + 8;
            let ang = self
                .pi
                .with_prec(wp)
                .mul(&BigFloat::from_ratio(&(rest * 2), wp));
            BigComplex::new(BigFloat::zero(wp), ang).exp().with_prec(p)
        };
        base.mul_i_pow(j)
    }
}

fn round_ratio(r: &Ratio<i64>) -> i64 {
    let two = *r * 2 + Ratio::from_integer(1);
    two.numer().div_floor(&(two.denom() * 2))
}

/// `pi` by Machin's formula in fixed point.
pub fn pi(prec: u32) -> BigFloat {
    let wp = prec as usize + 32;
    let one = BigInt::one() << wp;
    let atan_inv = |x: i64| -> BigInt {
        let x2 = BigInt::from(x * x);
        let mut power = &one / x;
        let mut sum = power.clone();
        let mut n = 1i64;
        while !power.is_zero() {
            power /= &x2;
            let t = &power / (2 * n + 1);
            if n % 2 == 1 {
                sum -= t;
            } else {
                sum += t;
            }
            n += 1;
        }
        sum
    };
    let v = atan_inv(5) * 16 - atan_inv(239) * 4;
    BigFloat::from_parts(v, -(wp as i64), prec)
}

/// Sum of many values with pairwise summation.
pub fn sum(xs: &[BigComplex], prec: u32) -> BigComplex {
    match xs.len() {
        0 => BigComplex::zero(prec),
        1 => xs[0].clone(),
        n => {
            let (a, b) = xs.split_at(n / 2);
            sum(a, prec).add(&sum(b, prec))
        }
    }
}

/// Decimal digits to bits.
pub fn digits_to_bits(digits: u32) -> u32 {
    libm::ceil(digits as f64 * core::f64::consts::LOG2_10) as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 300;

    fn close(a: &BigComplex, b: &BigComplex, bits: i64) -> bool {
        let d = a.sub(b);
        d.re.mag() < -bits && d.im.mag() < -bits || d.is_zero()
    }

    #[test]
    fn pi_digits() {
        let s = pi(200).to_decimal(50);
        assert_eq!(s, "3.14159265358979323846264338327950288419716939937511");
    }

    #[test]
    fn arithmetic() {
        let a = BigFloat::from_i64(7, P);
        let b = BigFloat::from_i64(3, P);
        let q = a.div(&b);
        assert!(q.mul(&b).sub(&a).mag() < -(P as i64) + 8);
        assert_eq!(BigFloat::from_i64(2, P).sqrt().to_decimal(20), "1.41421356237309504880");
        assert_eq!(BigFloat::from_f64(-2.5, P).round(), BigInt::from(-2));
        assert_eq!(BigFloat::from_f64(2.5, P).round(), BigInt::from(3));
        assert_eq!(BigFloat::from_i64(-1234, P).to_decimal(2), "-1234.00");
        let x = BigFloat::parse_decimal("-0.125", P).unwrap();
        assert_eq!(x.to_f64(), -0.125);
    }

    #[test]
    fn exp_and_roots_of_unity() {
        let ctx = Ctx::new(P);
        let z = ctx.cis_turns(&Ratio::new(1, 3));
        let w = z.powu(3);
        assert!(close(&w, &BigComplex::one(P), P as i64 - 8));
        let i = ctx.cis_turns(&Ratio::new(1, 4));
        assert_eq!(i, BigComplex::from_i64(1, P).mul_i_pow(1));
        let e = BigComplex::from_i64(1, P).exp();
        assert!(e.re.to_decimal(40).starts_with("2.71828182845904523536028747135266249775"));
        let big = BigComplex::from_i64(-40, P).exp().mul(&BigComplex::from_i64(40, P).exp());
        assert!(close(&big, &BigComplex::one(P), P as i64 - 16));
    }
}
