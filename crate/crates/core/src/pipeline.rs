//! End-to-end runs: modulus data, class choice, conjugate grid and exact
//! minimal polynomials, with precision escalation on recognition failure.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::conjugates::{
    classical_conjugates, conjugate_args, epsilon_grid, epsilon_grid_general, initial_args, rou_twist,
    ConjugateGrid, StartArgs,
};
use crate::exec::Executor;
use crate::polyrecon::{min_poly_over_k, min_poly_over_q, AlgebraicPoly};
use crate::quadfield::{Field, QuadForm};
use crate::rayclass::{admissible_classes, galois_elements, lift_class, ray_data, select_class, LiftedClass, Modulus, RayData};
use crate::reciprocity::WClassMatrix;
use crate::siegel::PhiArgs;
use crate::{Error, Result};

/// Number of precision doublings tried after a recognition failure.
pub const DEFAULT_RETRIES: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonOptions {
    pub prec: u32,
    pub retries: u32,
    /// multiply by `zeta_n^k` (acting through determinants)
    pub twist: Option<(i64, i64)>,
    /// search all admissible classes and `W`-th root twists for the
    /// smallest coefficients
    pub exhaustive: bool,
    /// explicit class `t + s tau` as `(s, t)`
    pub class: Option<(i64, i64)>,
    /// form attached to an explicit class; defaults to the principal form
    pub class_form: Option<QuadForm>,
}

impl EpsilonOptions {
    pub fn new(prec: u32) -> Self {
        EpsilonOptions {
            prec,
            retries: DEFAULT_RETRIES,
            twist: None,
            exhaustive: false,
            class: None,
            class_form: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EpsilonRun {
    pub ray: RayData,
    pub start: StartArgs,
    pub class: LiftedClass,
    pub uc: PhiArgs,
    pub twist: Option<(i64, i64)>,
    pub grid: ConjugateGrid,
    pub poly_k: AlgebraicPoly,
    pub poly_q: Vec<BigInt>,
    /// bits actually used, after any escalation
    pub prec: u32,
}

#[derive(Debug, Clone)]
pub struct ClassicalRun {
    pub grid: ConjugateGrid,
    pub poly_k: AlgebraicPoly,
    pub poly_q: Vec<BigInt>,
    pub prec: u32,
}

fn retry<T>(prec: u32, retries: u32, mut f: impl FnMut(u32) -> Result<T>) -> Result<T> {
    crate::polyrecon::with_retries(prec, retries, &mut f)
}

/// Ranking for the exhaustive search: smallest entry, then a positive
/// rational part of the second coefficient, then the descending list.
fn candidate_key(p: &AlgebraicPoly) -> (BigInt, u8, Vec<(BigInt, BigInt)>) {
    let n = p.coeffs.len();
    let tie = match n.checked_sub(2).map(|i| &p.coeffs[i].0) {
        Some(a) if a.is_positive() => 0,
        _ => 1,
    };
    (p.max_entry(), tie, p.coeffs.iter().rev().cloned().collect())
}

/// The elliptic unit of the modulus, its conjugates and minimal polynomials.
pub fn run_epsilon<X: Executor>(field: &Field, m: &Modulus, opts: &EpsilonOptions, exec: &X) -> Result<EpsilonRun> {
    let ray = ray_data(field, m)?;
    if ray.degenerate && opts.class.is_none() {
        return Err(Error::Degenerate);
    }
    let start = initial_args(field, m)?;
    let elements = galois_elements(field, m)?;
    let principal = field.principal_form();
    let form = opts.class_form.unwrap_or(principal);
    let classes = match opts.class {
        Some(c) => alloc::vec![field.reduce_mod(&m.ideal, c.0, c.1)],
        None if opts.exhaustive => admissible_classes(field, m, ray.w)?,
        None => alloc::vec![select_class(field, m, ray.w)?],
    };
    let lifted: Vec<LiftedClass> = classes
        .iter()
        .map(|&c| lift_class(field, m, &ray, c, form))
        .collect::<Result<_>>()?;
    let twists: Vec<Option<(i64, i64)>> = match opts.twist {
        Some(t) => alloc::vec![Some(t)],
        None if opts.exhaustive => (0..ray.w).map(|k| if k == 0 { None } else { Some((ray.w, k)) }).collect(),
        None => alloc::vec![None],
    };
    retry(opts.prec, opts.retries, |prec| {
        let mut best: Option<(_, EpsilonRun)> = None;
        for c in &lifted {
            let alpha = WClassMatrix::new(c.pair.s, c.pair.t, principal).matrix();
            let uc = conjugate_args(&start, &alpha);
            let grid = if c.e_c == 1 && c.pair.form == principal {
                epsilon_grid(field, &start, &uc, &elements, prec, exec)?
            } else {
                epsilon_grid_general(field, &start, c, &elements, prec, exec)?
            };
            for &tw in &twists {
                let g = match tw {
                    Some((n, k)) => rou_twist(&grid, n, k, ray.w)?,
                    None => grid.clone(),
                };
                let poly_k = min_poly_over_k(&g.values, field)?;
                let key = candidate_key(&poly_k);
                if best.as_ref().is_some_and(|(b, _)| *b <= key) {
                    continue;
                }
                let poly_q = min_poly_over_q(&poly_k, field);
                let run = EpsilonRun {
                    ray,
                    start,
                    class: *c,
                    uc,
                    twist: tw,
                    grid: g,
                    poly_k,
                    poly_q,
                    prec,
                };
                best = Some((key, run));
            }
        }
        best.map(|(_, r)| r).ok_or(Error::NoClassFound)
    })
}

/// Conjugates and minimal polynomials of `phi(0, 1/N, tau)^{12N / gcd(6, N)}`.
pub fn run_classical<X: Executor>(field: &Field, m: &Modulus, prec: u32, retries: u32, exec: &X) -> Result<ClassicalRun> {
    let elements = galois_elements(field, m)?;
    retry(prec, retries, |p| {
        let grid = classical_conjugates(field, m, &elements, p, exec)?;
        let poly_k = min_poly_over_k(&grid.values, field)?;
        let poly_q = min_poly_over_q(&poly_k, field);
        Ok(ClassicalRun {
            grid,
            poly_k,
            poly_q,
            prec: p,
        })
    })
}
