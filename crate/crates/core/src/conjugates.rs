//! Galois conjugates of elliptic units: starting arguments, the conjugate
//! grid over `Gal(K_f / K)`, the full modular action with its root-of-unity
//! prefactors, classical generators and root-of-unity twists.

use alloc::vec::Vec;

use num_integer::Integer;

use crate::bigfloat::{BigComplex, Ctx};
use crate::exec::Executor;
use crate::polyrecon::tau_value;
use crate::quadfield::{Field, FieldElement, Ideal, QuadForm};
use crate::rayclass::{compose, ClassPair, GaloisElement, LiftedClass, Modulus};
use crate::reciprocity::{glm_split, herglotz_omega, ResidueMatrix};
use crate::siegel::{classical_exponent, Phase, PhiArgs, PhiEvaluator, Rat};
use crate::{Error, Result};

/// Largest norm scanned for the auxiliary ideal in [`initial_args_nth`].
pub const START_SEARCH_NORM: i64 = 400;

/// Arguments `(u1, v1)` with `E(c0) = phi(u1, v1, tau)^{12 f}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StartArgs {
    pub u1: Rat,
    pub v1: Rat,
}

impl StartArgs {
    pub fn args(&self) -> PhiArgs {
        PhiArgs::new(self.u1, self.v1)
    }
}

/// Starting arguments for the modulus. Rational moduli use `(0, 1/N)`; other
/// moduli go through the search in [`initial_args_nth`].
pub fn initial_args(field: &Field, m: &Modulus) -> Result<StartArgs> {
    if m.norm == 1 {
        return Err(Error::UnitIdeal);
    }
    if m.ideal.is_rational() {
        return Ok(StartArgs {
            u1: Rat::from_integer(0),
            v1: Rat::new(1, m.f),
        });
    }
    if let Some(s) = split_start(field, m) {
        return Ok(s);
    }
    initial_args_nth(field, m, 0)
}

/// `f` of norm `f` coprime to `6 conj(f)`: `(1/f, t/f)` with `tau + t` in
/// `conj(f)`.
fn split_start(field: &Field, m: &Modulus) -> Option<StartArgs> {
    if m.norm != m.f || m.f.gcd(&6) != 1 {
        return None;
    }
    let fc = field.ideal_conj(&m.ideal);
    if field.ideal_sum(&m.ideal, &fc).norm() != 1 {
        return None;
    }
    let (_, nt, _) = field.tau_hnf(&fc);
    Some(StartArgs {
        u1: Rat::new(1, m.f),
        v1: Rat::new(nt, m.f),
    })
}

fn primitive_ideals(field: &Field, bound: i64) -> impl Iterator<Item = Ideal> + '_ {
    (1..=bound).flat_map(move |a| {
        (0..a).filter_map(move |n| {
            // [a, n + omega] is an ideal iff a | N(n + omega)
            let e = FieldElement::new(n, 1);
            if field.norm(e) % a as i128 == 0 {
                Some(Ideal { m: a, n, k: 1 })
            } else {
                None
            }
        })
    })
}

/// The `choice`-th admissible pair `(b, a)`: `b` coprime to `f` with
/// `b f = (mu)`, `a b = (alpha)` with `a` coprime to `f`, giving the
/// coordinates of `alpha / mu` in the basis `[tau, 1]`.
pub fn initial_args_nth(field: &Field, m: &Modulus, choice: usize) -> Result<StartArgs> {
    if m.norm == 1 {
        return Err(Error::UnitIdeal);
    }
    let mut seen = 0;
    for b in primitive_ideals(field, START_SEARCH_NORM) {
        if field.ideal_sum(&b, &m.ideal).norm() != 1 {
            continue;
        }
        let Ok(mu) = field.principal_generator(&field.ideal_mul(&b, &m.ideal)) else {
            continue;
        };
        let Some(alpha) = small_coprime_element(field, &b, m) else {
            continue;
        };
        if seen < choice {
            seen += 1;
            continue;
        }
        let nmu = field.norm(mu);
        let (x, y) = field.to_tau(field.mul(alpha, field.conj(mu)));
        let nmu = i64::try_from(nmu).map_err(|_| Error::Invalid("norm overflow"))?;
        let s = StartArgs {
            u1: Rat::new(y, nmu),
            v1: Rat::new(x, nmu),
        };
        if s.args().is_lattice() {
            continue;
        }
        return Ok(s);
    }
    Err(Error::SearchExhausted)
}

/// Some `alpha` in `b` with `(alpha) b^{-1}` coprime to `f`.
fn small_coprime_element(field: &Field, b: &Ideal, m: &Modulus) -> Option<FieldElement> {
    let [g1, g2] = b.basis();
    for r in 1..=8i64 {
        for i in -r..=r {
            for j in -r..=r {
                if i.abs().max(j.abs()) != r {
                    continue;
                }
                let x = field.add(
                    FieldElement::new(g1.x * i, g1.y * i),
                    FieldElement::new(g2.x * j, g2.y * j),
                );
                if x.is_zero() {
                    continue;
                }
                // (x) b^{-1} = (x) conj(b) / N(b), and N(b) is prime to f
                let a = field.ideal_mul(&field.principal_ideal(x).ok()?, &field.ideal_conj(b));
                if field.ideal_sum(&a, &m.ideal).norm() == 1 {
                    return Some(x);
                }
            }
        }
    }
    None
}

/// `(u_c, v_c) = (u1, v1) alpha` for an integer matrix `alpha`.
pub fn conjugate_args(start: &StartArgs, alpha: &[i64; 4]) -> PhiArgs {
    start.args().act(&alpha.map(|x| x as i128))
}

/// The level-`M` action of `gamma` on `phi(u, v, .)`, evaluated at the point
/// of `ev`, at working precision.
///
/// `gamma = A diag(1, d)` with `A` in `SL_2(Z)`: the `A` part contributes the
/// multiplier `omega(A)` and the argument change, and `diag(1, d)` acts on the
/// multiplier as `sigma_d` and on the arguments by `v -> d v`, with the extra
/// sign `(-1)^{(d-1)/2}` from the constant `-i`.
pub fn full_action_raw(ev: &PhiEvaluator, a: &PhiArgs, gamma: &ResidueMatrix) -> Result<BigComplex> {
    let (lift, d) = glm_split(gamma)?;
    let e = herglotz_omega(&lift);
    let mut w = a.act(&lift);
    w.v *= Rat::from_integer(d);
    let mut phase = Phase::twelfth(e * d);
    if d.rem_euclid(4) != 1 {
        phase = phase.mul(&Phase::turns(Rat::new(1, 2)));
    }
    let val = ev.eval_raw(&w)?;
    Ok(val.mul(&phase.value(ev.ctx())))
}

pub fn full_action_value(a: &PhiArgs, gamma: &ResidueMatrix, q: &QuadForm, prec: u32) -> Result<BigComplex> {
    let ev = PhiEvaluator::for_form(q, prec)?;
    Ok(full_action_raw(&ev, a, gamma)?.with_prec(prec))
}

/// Conjugate values laid out row-major, one row per unit class and one
/// column per reduced form.
#[derive(Debug, Clone)]
pub struct ConjugateGrid {
    pub rows: usize,
    pub cols: usize,
    pub values: Vec<BigComplex>,
    pub labels: Vec<GaloisElement>,
    /// numerator and denominator arguments per cell, before reduction
    pub args: Vec<(PhiArgs, PhiArgs)>,
}

impl ConjugateGrid {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> &BigComplex {
        &self.values[i * self.cols + j]
    }

    /// `log2 |prod |value|^2 - 1|`; very negative for a unit.
    pub fn norm_defect_log2(&self) -> f64 {
        let prec = self.values.iter().map(|v| v.prec()).min().unwrap_or(64);
        let mut p = BigComplex::one(prec + 32);
        for v in &self.values {
            p = p.mul(&BigComplex::from_real(v.norm_sqr()));
        }
        p.sub(&BigComplex::one(prec + 32)).log2_abs()
    }
}

fn evaluators<X: Executor>(forms: &[QuadForm], prec: u32, exec: &X) -> Result<Vec<PhiEvaluator>> {
    exec.map(forms.len(), |j| PhiEvaluator::for_form(&forms[j], prec))
        .into_iter()
        .collect()
}

fn shape(field: &Field, elements: &[GaloisElement]) -> (Vec<QuadForm>, usize, usize) {
    let forms = field.class_group();
    let cols = forms.len();
    (forms, elements.len() / cols, cols)
}

fn form_index(forms: &[QuadForm], q: &QuadForm) -> usize {
    forms.iter().position(|x| x == q).expect("reduced form in the class group")
}

fn int_matrix(g: &ResidueMatrix) -> [i128; 4] {
    g.entries().map(|x| x as i128)
}

/// The grid of `phi((u_c, v_c) gamma, tau_Q) / phi((u1, v1) gamma, tau_Q)`
/// over all Galois elements, valid when the class has `e_c = 1` and lives in
/// the principal form so the multipliers of numerator and denominator cancel.
pub fn epsilon_grid<X: Executor>(
    field: &Field,
    start: &StartArgs,
    uc: &PhiArgs,
    elements: &[GaloisElement],
    prec: u32,
    exec: &X,
) -> Result<ConjugateGrid> {
    let (forms, rows, cols) = shape(field, elements);
    let evs = evaluators(&forms, prec, exec)?;
    let u1 = start.args();
    let cells = exec.map(elements.len(), |i| {
        let g = &elements[i];
        let gam = int_matrix(&g.gamma);
        let num = uc.act(&gam);
        let den = u1.act(&gam);
        let ev = &evs[form_index(&forms, &g.form())];
        ev.quotient(&num, &den).map(|v| (v, (num, den)))
    });
    assemble(rows, cols, elements, cells)
}

fn assemble(
    rows: usize,
    cols: usize,
    elements: &[GaloisElement],
    cells: Vec<Result<(BigComplex, (PhiArgs, PhiArgs))>>,
) -> Result<ConjugateGrid> {
    let mut values = Vec::with_capacity(cells.len());
    let mut args = Vec::with_capacity(cells.len());
    for c in cells {
        let (v, a) = c?;
        values.push(v);
        args.push(a);
    }
    Ok(ConjugateGrid {
        rows,
        cols,
        values,
        labels: elements.to_vec(),
        args,
    })
}

/// The grid for an arbitrary class: `sigma(eps(c)) = (act(sigma c) / act(sigma))^{e_c}`
/// with the full action of each pair on `phi(u1, v1, .)`.
pub fn epsilon_grid_general<X: Executor>(
    field: &Field,
    start: &StartArgs,
    class: &LiftedClass,
    elements: &[GaloisElement],
    prec: u32,
    exec: &X,
) -> Result<ConjugateGrid> {
    let (forms, rows, cols) = shape(field, elements);
    let evs = evaluators(&forms, prec, exec)?;
    let u1 = start.args();
    let act = |p: &ClassPair| -> Result<(BigComplex, PhiArgs)> {
        let g = p.matrix(field);
        let ev = &evs[form_index(&forms, &p.form)];
        Ok((full_action_raw(ev, &u1, &g)?, u1.act(&int_matrix(&g))))
    };
    let cells = exec.map(elements.len(), |i| {
        let sigma = &elements[i].pair;
        let comp = compose(field, sigma, &class.pair)?;
        let (num, an) = act(&comp)?;
        let (den, ad) = act(sigma)?;
        let v = num.div(&den).powu(class.e_c as u64).with_prec(prec);
        Ok((v, (an, ad)))
    });
    assemble(rows, cols, elements, cells)
}

/// Conjugates of `phi(0, 1/N, tau)^{12N / gcd(6, N)}` over the full pair set.
pub fn classical_conjugates<X: Executor>(
    field: &Field,
    m: &Modulus,
    elements: &[GaloisElement],
    prec: u32,
    exec: &X,
) -> Result<ConjugateGrid> {
    if !m.ideal.is_rational() {
        return Err(Error::Invalid("classical generators need a rational modulus"));
    }
    let (forms, rows, cols) = shape(field, elements);
    let evs = evaluators(&forms, prec, exec)?;
    let u1 = PhiArgs::new(Rat::from_integer(0), Rat::new(1, m.f));
    let k = classical_exponent(m.f);
    let cells = exec.map(elements.len(), |i| {
        let g = &elements[i];
        let a = u1.act(&int_matrix(&g.gamma));
        let ev = &evs[form_index(&forms, &g.form())];
        let v = ev.eval_raw(&a)?.powu(k).with_prec(prec);
        Ok((v, (a, a)))
    });
    assemble(rows, cols, elements, cells)
}

/// Multiplies each cell by `zeta_n^{k det(gamma)}`. `w` is the number of
/// roots of unity in `K_f`.
pub fn rou_twist(grid: &ConjugateGrid, n: i64, k: i64, w: i64) -> Result<ConjugateGrid> {
    if n <= 0 || w % n != 0 {
        return Err(Error::RootNotInField(n));
    }
    let prec = grid.values.iter().map(|v| v.prec()).min().unwrap_or(64);
    let ctx = Ctx::new(prec + 16);
    let mut out = grid.clone();
    for (v, g) in out.values.iter_mut().zip(&grid.labels) {
        let e = (k as i128 * g.gamma.det() as i128).rem_euclid(n as i128) as i64;
        if e != 0 {
            *v = v.mul(&ctx.cis_turns(&Rat::new(e, n))).with_prec(prec);
        }
    }
    Ok(out)
}

/// `phi(u1, v1, tau)^{12 f}`.
pub fn stark_e_value(field: &Field, m: &Modulus, start: &StartArgs, prec: u32) -> Result<BigComplex> {
    let tau = tau_value(field, prec + 64);
    let ev = PhiEvaluator::new(&tau, prec)?;
    Ok(ev.eval_raw(&start.args())?.powu(m.twelve_f() as u64).with_prec(prec))
}
