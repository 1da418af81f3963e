//! Polynomials from numerical conjugates, exact recognition of their
//! coefficients in `O_K = Z[tau]`, norms down to `Q`, and height statistics.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::bigfloat::{BigComplex, BigFloat};
use crate::quadfield::Field;
use crate::{Error, Result};

/// Monic `prod (x - r)`, coefficients in ascending degree. Roots are
/// multiplied in order of increasing modulus.
pub fn poly_from_roots(roots: &[BigComplex]) -> Vec<BigComplex> {
    assert!(!roots.is_empty(), "need at least one root");
    let prec = roots.iter().map(|r| r.prec()).min().unwrap_or(64);
    let mut order: Vec<(f64, usize)> = roots.iter().enumerate().map(|(i, r)| (r.log2_abs(), i)).collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut p = alloc::vec![BigComplex::one(prec)];
    for &(_, i) in &order {
        let r = &roots[i];
        let mut next = alloc::vec![BigComplex::zero(prec); p.len() + 1];
        for (k, c) in p.iter().enumerate() {
            next[k + 1] = next[k + 1].add(c);
            next[k] = next[k].sub(&c.mul(r));
        }
        p = next;
    }
    p
}

/// `tau` of the field as a complex number.
pub fn tau_value(field: &Field, prec: u32) -> BigComplex {
    let (b0, _) = field.tau_poly();
    let d = -field.discriminant();
    let im = BigFloat::from_i64(d, prec + 8).sqrt().mul_2exp(-1).with_prec(prec);
    BigComplex::new(BigFloat::from_i64(-b0, prec).mul_2exp(-1), im)
}

/// `c = a + b tau` with integers `a, b`, or a failure carrying the residual.
/// The tolerance is `2^(-tol_bits) max(1, |c|)`.
pub fn recognize_ok(c: &BigComplex, field: &Field, tol_bits: u32) -> Result<(BigInt, BigInt, f64)> {
    let prec = c.prec();
    let tau = tau_value(field, prec);
    let (b0, _) = field.tau_poly();
    let b = c.im.div(&tau.im).round();
    // a = Re c + b * b0 / 2
    let bf = BigFloat::from_bigint(b.clone(), prec);
    let a = c.re.add(&bf.mul_i64(b0).mul_2exp(-1)).round();
    let approx = BigComplex::from_real(BigFloat::from_bigint(a.clone(), prec))
        .add(&tau.scale(&bf));
    let resid = c.sub(&approx).log2_abs();
    let scale = c.log2_abs().max(0.0);
    if resid > scale - tol_bits as f64 {
        return Err(Error::RecognitionFailure {
            residual_log2: resid - scale,
        });
    }
    Ok((a, b, resid))
}

/// Monic polynomial over `O_K`; coefficient `i` is `a_i + b_i tau`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraicPoly {
    pub coeffs: Vec<(BigInt, BigInt)>,
    /// `log2` of the recognition residual per coefficient
    pub residuals_log2: Vec<f64>,
    /// each distinct root occurs this many times among the conjugates
    pub multiplicity: usize,
}

impl AlgebraicPoly {
    pub fn from_coeffs(coeffs: Vec<(BigInt, BigInt)>) -> Self {
        let n = coeffs.len();
        AlgebraicPoly {
            coeffs,
            residuals_log2: alloc::vec![f64::NEG_INFINITY; n],
            multiplicity: 1,
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(|(_, b)| b.is_zero())
    }

    /// Coefficients in the `{1, omega}` basis.
    pub fn omega_coeffs(&self, field: &Field) -> Vec<(BigInt, BigInt)> {
        let sh = BigInt::from(field.tau_shift());
        self.coeffs
            .iter()
            .map(|(a, b)| (a - b * &sh, b.clone()))
            .collect()
    }

    /// Largest `max(|a|, |b|)` over all coefficients.
    pub fn max_entry(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|(a, b)| a.abs().max(b.abs()))
            .max()
            .unwrap_or_default()
    }

    /// Largest complex modulus `|a + b tau|` over all coefficients.
    pub fn max_modulus(&self, field: &Field) -> f64 {
        self.coeffs
            .iter()
            .map(|(a, b)| libm::sqrt(norm_big(field, a, b).to_f64().unwrap_or(f64::INFINITY)))
            .fold(0.0, f64::max)
    }

    /// Evaluation at a complex point.
    pub fn eval(&self, field: &Field, x: &BigComplex) -> BigComplex {
        let prec = x.prec();
        let tau = tau_value(field, prec);
        let mut acc = BigComplex::zero(prec);
        for (a, b) in self.coeffs.iter().rev() {
            let c = BigComplex::from_real(BigFloat::from_bigint(a.clone(), prec))
                .add(&tau.scale(&BigFloat::from_bigint(b.clone(), prec)));
            acc = acc.mul(x).add(&c);
        }
        acc
    }
}

fn norm_big(field: &Field, a: &BigInt, b: &BigInt) -> BigInt {
    let (b0, c0) = field.tau_poly();
    a * a - a * b * b0 + b * b * c0
}

/// Absolute norm of the constant coefficient.
pub fn constant_norm(field: &Field, p: &AlgebraicPoly) -> BigInt {
    let (a, b) = &p.coeffs[0];
    norm_big(field, a, b)
}

/// Groups numerically equal values; returns one index per group and the
/// group sizes.
pub fn distinct_roots(values: &[BigComplex], tol_bits: u32) -> (Vec<usize>, Vec<usize>) {
    let mut reps: Vec<usize> = Vec::new();
    let mut sizes: Vec<usize> = Vec::new();
    'outer: for (i, v) in values.iter().enumerate() {
        for (g, &r) in reps.iter().enumerate() {
            let d = v.sub(&values[r]);
            let scale = values[r].log2_abs().max(0.0);
            if d.is_zero() || d.log2_abs() < scale - tol_bits as f64 {
                sizes[g] += 1;
                continue 'outer;
            }
        }
        reps.push(i);
        sizes.push(1);
    }
    (reps, sizes)
}

/// Minimal polynomial over `K` of a complete conjugate set. Repeated values
/// are collapsed and reported through [`AlgebraicPoly::multiplicity`].
pub fn min_poly_over_k(values: &[BigComplex], field: &Field) -> Result<AlgebraicPoly> {
    let prec = values.iter().map(|v| v.prec()).min().unwrap_or(64);
    let tol = prec / 2;
    let (reps, sizes) = distinct_roots(values, tol);
    let roots: Vec<BigComplex> = reps.iter().map(|&i| values[i].clone()).collect();
    let coeffs = poly_from_roots(&roots);
    let mut out = Vec::with_capacity(coeffs.len());
    let mut res = Vec::with_capacity(coeffs.len());
    for c in &coeffs {
        let (a, b, r) = recognize_ok(c, field, tol)?;
        out.push((a, b));
        res.push(r);
    }
    Ok(AlgebraicPoly {
        coeffs: out,
        residuals_log2: res,
        multiplicity: sizes.iter().copied().max().unwrap_or(1),
    })
}

/// `p(x) * conj(p)(x)`, an integer polynomial (ascending degree). A rational
/// `p` is returned unchanged.
pub fn min_poly_over_q(p: &AlgebraicPoly, field: &Field) -> Vec<BigInt> {
    if p.is_rational() {
        return p.coeffs.iter().map(|(a, _)| a.clone()).collect();
    }
    let (b0, c0) = field.tau_poly();
    let n = p.coeffs.len();
    let mut out = alloc::vec![(BigInt::zero(), BigInt::zero()); 2 * n - 1];
    for (i, (a, b)) in p.coeffs.iter().enumerate() {
        for (j, (c, d)) in p.coeffs.iter().enumerate() {
            // conj(c + d tau) = (c - b0 d) - d tau
            let c2 = c - d * b0;
            let d2 = -d;
            let x = a * &c2 - b * &d2 * c0;
            let y = a * &d2 + b * &c2 - b * &d2 * b0;
            out[i + j].0 += x;
            out[i + j].1 += y;
        }
    }
    debug_assert!(out.iter().all(|(_, y)| y.is_zero()));
    out.into_iter().map(|(x, _)| x).collect()
}

/// Natural logarithm of a positive big integer.
pub fn ln_big(x: &BigInt) -> f64 {
    let b = x.bits() as i64;
    let sh = (b - 60).max(0);
    let top = (x.abs() >> sh as usize).to_f64().unwrap_or(1.0);
    libm::log(top) + sh as f64 * core::f64::consts::LN_2
}

/// Coefficient size statistics of integer polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct HeightReport {
    pub max_abs_coeff: BigInt,
    pub log_height: f64,
    /// `log(c_classical) / log(c_epsilon)`
    pub reduction_factor: Option<f64>,
    pub classical_max_abs_coeff: Option<BigInt>,
}

pub fn max_abs(p: &[BigInt]) -> BigInt {
    p.iter().map(|c| c.abs()).max().unwrap_or_default()
}

pub fn height_report(p_eps: &[BigInt], p_classical: Option<&[BigInt]>) -> HeightReport {
    let c = max_abs(p_eps);
    let lh = ln_big(&c);
    let cc = p_classical.map(max_abs);
    let rf = cc.as_ref().map(|x| ln_big(x) / lh);
    HeightReport {
        max_abs_coeff: c,
        log_height: lh,
        reduction_factor: rf,
        classical_max_abs_coeff: cc,
    }
}

/// Runs `f` at `prec`, doubling up to `retries` times on recognition failure.
pub fn with_retries<T>(prec: u32, retries: u32, mut f: impl FnMut(u32) -> Result<T>) -> Result<T> {
    let mut p = prec;
    let mut last = None;
    for _ in 0..=retries {
        match f(p) {
            Err(e @ Error::RecognitionFailure { .. }) => {
                last = Some(e);
                p *= 2;
            }
            r => return r,
        }
    }
    Err(last.expect("at least one attempt"))
}
