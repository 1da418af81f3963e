//! Orchestrates one run: modulus data, the chosen pipeline and the report.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rayclass_core::bigfloat::digits_to_bits;
use rayclass_core::pipeline::{run_classical, run_epsilon, ClassicalRun, EpsilonOptions, EpsilonRun, DEFAULT_RETRIES};
use rayclass_core::polyrecon::{height_report, AlgebraicPoly};
use rayclass_core::rayclass::ray_data;
use rayclass_core::siegel::Rat;
use rayclass_core::{ConjugateGrid, Error, Field, Ideal, Modulus, QuadForm};

use crate::config::{Mode, ModulusInput, RunConfig};
use crate::pool::ThreadPool;
use crate::report::{ArgsInfo, ClassInfo, Diagnostics, FieldInfo, Heights, ModulusInfo, RayInfo, Report, TwistInfo};

pub const EXIT_OK: i32 = 0;
pub const EXIT_BAD_INPUT: i32 = 1;
pub const EXIT_DEGENERATE: i32 = 2;
pub const EXIT_EXCLUDED: i32 = 3;
pub const EXIT_RECOGNITION: i32 = 4;
pub const EXIT_NO_CLASS: i32 = 5;

#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    /// present whenever the field and modulus were valid
    pub report: Option<Report>,
    pub error: Option<String>,
    pub elapsed: Duration,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ExcludedField => EXIT_EXCLUDED,
        Error::Degenerate => EXIT_DEGENERATE,
        Error::RecognitionFailure { .. } => EXIT_RECOGNITION,
        Error::NoAdmissibleLift | Error::NoClassFound | Error::SearchExhausted => EXIT_NO_CLASS,
        _ => EXIT_BAD_INPUT,
    }
}

pub fn build_modulus(field: &Field, input: &ModulusInput) -> rayclass_core::Result<Modulus> {
    let ideal = match input {
        ModulusInput::Rational(n) => field.int_ideal(n.abs())?,
        ModulusInput::Hnf(m, n, k) => {
            if *m <= 0 || *k <= 0 {
                return Err(Error::Invalid("HNF entries m and k must be positive"));
            }
            let i = Ideal { m: *m, n: n.rem_euclid(*m), k: *k };
            let closed = field.make_ideal(&i.basis())?;
            if closed != i {
                return Err(Error::Invalid("the triple is not the HNF of an ideal"));
            }
            i
        }
        ModulusInput::Gens(g) => {
            let gens: Vec<_> = g.iter().map(|&(a, b)| field.from_tau(a, b)).collect();
            field.make_ideal(&gens)?
        }
    };
    Modulus::new(field, ideal)
}

fn rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn finite(x: f64, floor: f64) -> f64 {
    if x.is_finite() {
        x
    } else {
        floor
    }
}

fn strings(p: &[BigInt]) -> Vec<String> {
    p.iter().map(|c| c.to_string()).collect()
}

fn poly_k_strings(p: &AlgebraicPoly) -> Vec<[String; 2]> {
    p.coeffs.iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect()
}

fn diagnostics(grid: &ConjugateGrid, poly: &AlgebraicPoly, prec: u32, unit: bool) -> Diagnostics {
    let floor = -(prec as f64);
    let res = poly.residuals_log2.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Diagnostics {
        precision_bits: prec,
        multiplicity: poly.multiplicity,
        unit_norm_defect_log2: if unit { finite(grid.norm_defect_log2(), floor).max(floor) } else { 0.0 },
        max_residual_log2: finite(res, floor).max(floor),
    }
}

fn conjugate_strings(grid: &ConjugateGrid, digits: u32) -> Vec<[String; 2]> {
    grid.values
        .iter()
        .map(|v| [v.re.to_decimal(digits as usize), v.im.to_decimal(digits as usize)])
        .collect()
}

fn fill_epsilon(r: &mut Report, run: &EpsilonRun, cfg: &RunConfig) {
    let c = &run.class;
    let f = c.pair.form;
    r.class = Some(ClassInfo {
        s: c.class.0,
        t: c.class.1,
        form: [f.a, f.b, f.c],
        d_c: c.d_c,
        e_c: c.e_c,
    });
    r.twist = run.twist.map(|(n, k)| TwistInfo { n, k });
    r.args = Some(ArgsInfo {
        u1: rat(&run.start.u1),
        v1: rat(&run.start.v1),
        uc: rat(&run.uc.u),
        vc: rat(&run.uc.v),
    });
    r.poly_k = Some(poly_k_strings(&run.poly_k));
    r.poly_q = Some(strings(&run.poly_q));
    r.diagnostics = Some(diagnostics(&run.grid, &run.poly_k, run.prec, true));
    if cfg.include_conjugates {
        r.conjugates = Some(conjugate_strings(&run.grid, cfg.digits));
    }
}

fn fill_classical(r: &mut Report, run: &ClassicalRun, cfg: &RunConfig, f: i64) {
    r.args = Some(ArgsInfo {
        u1: "0/1".into(),
        v1: format!("1/{f}"),
        uc: "0/1".into(),
        vc: format!("1/{f}"),
    });
    r.poly_k = Some(poly_k_strings(&run.poly_k));
    r.poly_q = Some(strings(&run.poly_q));
    r.diagnostics = Some(diagnostics(&run.grid, &run.poly_k, run.prec, false));
    if cfg.include_conjugates {
        r.conjugates = Some(conjugate_strings(&run.grid, cfg.digits));
    }
}

fn heights(p: &[BigInt], classical: Option<&[BigInt]>) -> Heights {
    let h = height_report(p, classical);
    Heights {
        max_abs_coeff: h.max_abs_coeff.to_string(),
        log_height: h.log_height,
        classical_max_abs_coeff: h.classical_max_abs_coeff.map(|c| c.to_string()),
        reduction_factor: h.reduction_factor,
    }
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Epsilon => "epsilon",
        Mode::Classical => "classical",
        Mode::Compare => "compare",
    }
}

/// Runs the configured pipeline. Never panics on bad input; failures are
/// reported through the exit code.
pub fn run(cfg: &RunConfig) -> Outcome {
    let t0 = Instant::now();
    let mut out = Outcome {
        code: EXIT_OK,
        report: None,
        error: None,
        elapsed: Duration::ZERO,
    };
    let fail = |mut out: Outcome, e: Error| {
        out.code = exit_code(&e);
        out.error = Some(e.to_string());
        out.elapsed = t0.elapsed();
        out
    };
    let field = match Field::new(cfg.d) {
        Ok(k) => k,
        Err(e) => return fail(out, e),
    };
    let m = match build_modulus(&field, &cfg.modulus) {
        Ok(m) => m,
        Err(e) => return fail(out, e),
    };
    let ray = match ray_data(&field, &m) {
        Ok(r) => r,
        Err(e) => return fail(out, e),
    };
    let (hm, hn, hk) = m.ideal.triple();
    let mut report = Report {
        mode: mode_name(cfg.mode).into(),
        field: FieldInfo { d_k: field.discriminant() },
        modulus: ModulusInfo {
            hnf: [hm, hn, hk],
            f: m.f,
            norm: m.norm,
        },
        ray: RayInfo {
            w: ray.w,
            ell: ray.ell,
            h_f: ray.h_f,
            degenerate: ray.degenerate,
        },
        message: None,
        class: None,
        twist: None,
        args: None,
        poly_k: None,
        poly_q: None,
        classical_poly_q: None,
        heights: None,
        diagnostics: None,
        conjugates: None,
    };
    let pool = ThreadPool::new(cfg.threads);
    let prec = digits_to_bits(cfg.digits);
    let wants_epsilon = cfg.mode != Mode::Classical;
    if ray.degenerate && wants_epsilon && cfg.class.is_none() {
        report.message = Some("degenerate modulus: K_f = H(zeta_W); use class invariants together with roots of unity".into());
        out.report = Some(report);
        out.code = EXIT_DEGENERATE;
        out.elapsed = t0.elapsed();
        return out;
    }
    let eps = if wants_epsilon {
        let mut o = EpsilonOptions::new(prec);
        o.twist = cfg.twist;
        o.exhaustive = cfg.exhaustive;
        o.class = cfg.class;
        o.class_form = cfg.class_form.map(|(a, b, c)| QuadForm::new(a, b, c).reduce());
        match run_epsilon(&field, &m, &o, &pool) {
            Ok(r) => Some(r),
            Err(e) => {
                out.report = Some(report);
                return fail(out, e);
            }
        }
    } else {
        None
    };
    let classical = if cfg.mode != Mode::Epsilon {
        match run_classical(&field, &m, prec, DEFAULT_RETRIES, &pool) {
            Ok(r) => Some(r),
            Err(e) => {
                out.report = Some(report);
                return fail(out, e);
            }
        }
    } else {
        None
    };
    match (&eps, &classical) {
        (Some(e), None) => {
            fill_epsilon(&mut report, e, cfg);
            report.heights = Some(heights(&e.poly_q, None));
        }
        (None, Some(c)) => {
            fill_classical(&mut report, c, cfg, m.f);
            report.heights = Some(heights(&c.poly_q, None));
        }
        (Some(e), Some(c)) => {
            fill_epsilon(&mut report, e, cfg);
            report.classical_poly_q = Some(strings(&c.poly_q));
            report.heights = Some(heights(&e.poly_q, Some(&c.poly_q)));
        }
        (None, None) => unreachable!("some pipeline always runs"),
    }
    out.report = Some(report);
    out.elapsed = t0.elapsed();
    out
}
