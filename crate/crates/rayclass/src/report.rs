//! Run reports: a fixed-order JSON schema and a plain text rendering.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldInfo {
    #[serde(rename = "d_K")]
    pub d_k: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulusInfo {
    pub hnf: [i64; 3],
    pub f: i64,
    pub norm: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayInfo {
    #[serde(rename = "W")]
    pub w: i64,
    pub ell: i64,
    pub h_f: usize,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassInfo {
    pub s: i64,
    pub t: i64,
    pub form: [i64; 3],
    pub d_c: i64,
    pub e_c: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwistInfo {
    pub n: i64,
    pub k: i64,
}

/// Rationals as `"p/q"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArgsInfo {
    pub u1: String,
    pub v1: String,
    pub uc: String,
    pub vc: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Heights {
    pub max_abs_coeff: String,
    pub log_height: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub classical_max_abs_coeff: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reduction_factor: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub precision_bits: u32,
    /// how often each distinct conjugate value repeats; above 1 means the
    /// unit does not generate the ray class field
    pub multiplicity: usize,
    pub unit_norm_defect_log2: f64,
    pub max_residual_log2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub mode: String,
    pub field: FieldInfo,
    pub modulus: ModulusInfo,
    pub ray: RayInfo,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub class: Option<ClassInfo>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub twist: Option<TwistInfo>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub args: Option<ArgsInfo>,
    /// ascending degree, `[a, b]` meaning `a + b tau`
    #[serde(rename = "poly_K", skip_serializing_if = "Option::is_none", default)]
    pub poly_k: Option<Vec<[String; 2]>>,
    #[serde(rename = "poly_Q", skip_serializing_if = "Option::is_none", default)]
    pub poly_q: Option<Vec<String>>,
    /// classical generator over `Q`, compare mode only
    #[serde(rename = "classical_poly_Q", skip_serializing_if = "Option::is_none", default)]
    pub classical_poly_q: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub heights: Option<Heights>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub diagnostics: Option<Diagnostics>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub conjugates: Option<Vec<[String; 2]>>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Report> {
        serde_json::from_str(s)
    }

    pub fn to_text(&self) -> String {
        let mut o = String::new();
        let [m, n, k] = self.modulus.hnf;
        let _ = writeln!(o, "field        d_K = {}", self.field.d_k);
        let _ = writeln!(o, "modulus      [{m}, {n} + {k} omega], f = {}, norm = {}", self.modulus.f, self.modulus.norm);
        let r = &self.ray;
        let _ = writeln!(o, "ray data     W = {}, ell = {}, h_f = {}, degenerate = {}", r.w, r.ell, r.h_f, r.degenerate);
        if let Some(msg) = &self.message {
            let _ = writeln!(o, "{msg}");
        }
        if let Some(c) = &self.class {
            let [a, b, cc] = c.form;
            let _ = writeln!(o, "class        t + s tau with (s, t) = ({}, {}), form [{a}, {b}, {cc}], d_c = {}, e_c = {}", c.s, c.t, c.d_c, c.e_c);
        }
        if let Some(t) = &self.twist {
            let _ = writeln!(o, "twist        zeta_{}^{}", t.n, t.k);
        }
        if let Some(a) = &self.args {
            let _ = writeln!(o, "arguments    (u1, v1) = ({}, {}), (uc, vc) = ({}, {})", a.u1, a.v1, a.uc, a.vc);
        }
        if let Some(p) = &self.poly_k {
            let _ = writeln!(o, "poly over K  {}", render_k(p));
        }
        if let Some(p) = &self.poly_q {
            let _ = writeln!(o, "poly over Q  {}", render_q(p));
        }
        if let Some(p) = &self.classical_poly_q {
            let _ = writeln!(o, "classical    {}", render_q(p));
        }
        if let Some(h) = &self.heights {
            let _ = writeln!(o, "height       max |coeff| = {}, log = {:.5}", h.max_abs_coeff, h.log_height);
            if let (Some(c), Some(f)) = (&h.classical_max_abs_coeff, h.reduction_factor) {
                let _ = writeln!(o, "classical    max |coeff| = {c}, reduction factor = {f:.5}");
            }
        }
        if let Some(d) = &self.diagnostics {
            let _ = writeln!(
                o,
                "diagnostics  {} bits, multiplicity {}, unit norm defect 2^{:.0}, residual 2^{:.0}",
                d.precision_bits, d.multiplicity, d.unit_norm_defect_log2, d.max_residual_log2
            );
            if d.multiplicity > 1 {
                let _ = writeln!(o, "warning      conjugates repeat; the unit does not generate the ray class field");
            }
        }
        if let Some(cs) = &self.conjugates {
            for (i, [re, im]) in cs.iter().enumerate() {
                let _ = writeln!(o, "conjugate {i:<3} {re} + {im} i");
            }
        }
        o
    }
}

fn term(coeff: &str, i: usize) -> String {
    match i {
        0 => coeff.to_string(),
        1 if coeff == "1" => "x".into(),
        _ if coeff == "1" => format!("x^{i}"),
        1 => format!("({coeff}) x"),
        _ => format!("({coeff}) x^{i}"),
    }
}

fn render_q(p: &[String]) -> String {
    let parts: Vec<String> = p
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| c.as_str() != "0")
        .map(|(i, c)| term(c, i))
        .collect();
    parts.join(" + ")
}

fn render_k(p: &[[String; 2]]) -> String {
    let parts: Vec<String> = p
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, [a, b])| a != "0" || b != "0")
        .map(|(i, [a, b])| {
            let c = if b == "0" { a.clone() } else { format!("{a} + {b} tau") };
            term(&c, i)
        })
        .collect();
    parts.join(" + ")
}
