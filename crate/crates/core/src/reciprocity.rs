//! Matrix side of Shimura reciprocity: the groups `W_{N,tau}`, Gee's matrices
//! `u_Q`, determinant constrained lifts, words in `S` and `T`, and the
//! Herglotz multiplier of the Siegel function.

use alloc::vec::Vec;
use core::fmt;

use crate::arith::{crt, ext_gcd, factor, gcd, inv_mod, modp, mul_mod};
use crate::quadfield::{Field, Ideal, QuadForm};
use crate::{Error, Result};

/// A 2x2 matrix over `Z/level`, entries kept in `[0, level)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResidueMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub level: i64,
}

impl ResidueMatrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64, level: i64) -> Self {
        let r = |x: i64| x.rem_euclid(level);
        ResidueMatrix {
            a: r(a),
            b: r(b),
            c: r(c),
            d: r(d),
            level,
        }
    }

    pub fn from_array(m: [i64; 4], level: i64) -> Self {
        Self::new(m[0], m[1], m[2], m[3], level)
    }

    pub fn identity(level: i64) -> Self {
        Self::new(1, 0, 0, 1, level)
    }

    pub fn entries(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn mul(&self, o: &ResidueMatrix) -> ResidueMatrix {
        debug_assert_eq!(self.level, o.level);
        let n = self.level;
        let f = |x: i64, y: i64, z: i64, w: i64| modp(x as i128 * y as i128 + z as i128 * w as i128, n);
        ResidueMatrix {
            a: f(self.a, o.a, self.b, o.c),
            b: f(self.a, o.b, self.b, o.d),
            c: f(self.c, o.a, self.d, o.c),
            d: f(self.c, o.b, self.d, o.d),
            level: n,
        }
    }

    pub fn det(&self) -> i64 {
        modp(
            self.a as i128 * self.d as i128 - self.b as i128 * self.c as i128,
            self.level,
        )
    }

    /// Entrywise reduction to a divisor of the level.
    pub fn reduce_to(&self, level: i64) -> ResidueMatrix {
        assert!(self.level % level == 0, "level must divide");
        Self::new(self.a, self.b, self.c, self.d, level)
    }
}

impl fmt::Display for ResidueMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} {}; {} {}) mod {}",
            self.a, self.b, self.c, self.d, self.level
        )
    }
}

/// The matrix `(t - B s, -C s; s A, t)` attached to `x = s A tau_Q + t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WClassMatrix {
    pub s: i64,
    pub t: i64,
    pub form: QuadForm,
}

impl WClassMatrix {
    pub fn new(s: i64, t: i64, form: QuadForm) -> Self {
        WClassMatrix { s, t, form }
    }

    /// Integer entries, unreduced.
    pub fn matrix(&self) -> [i64; 4] {
        let QuadForm { a, b, c } = self.form;
        [self.t - b * self.s, -c * self.s, self.s * a, self.t]
    }

    pub fn det(&self) -> i128 {
        let QuadForm { a, b, c } = self.form;
        let (s, t) = (self.s as i128, self.t as i128);
        t * t - b as i128 * s * t + (a * c) as i128 * s * s
    }

    pub fn at_level(&self, level: i64) -> ResidueMatrix {
        ResidueMatrix::from_array(self.matrix(), level)
    }
}

/// Representatives of `W_{N,tau_Q} / {+-1}`: for every invertible pair the
/// lexicographically smaller of `(s, t)` and `(-s, -t)`, scanned in
/// lexicographic order.
pub fn w_matrices(n: i64, q: &QuadForm) -> Vec<WClassMatrix> {
    let mut out = Vec::new();
    for s in 0..n {
        for t in 0..n {
            let w = WClassMatrix::new(s, t, *q);
            if gcd(modp(w.det(), n), n) != 1 {
                continue;
            }
            if (s, t) <= ((-s).rem_euclid(n), (-t).rem_euclid(n)) {
                out.push(w);
            }
        }
    }
    out
}

/// Gee's matrix `u_Q` modulo `level`, assembled prime by prime.
pub fn gee_uq(q: &QuadForm, level: i64) -> ResidueMatrix {
    let QuadForm { a, b, c } = *q;
    let d = q.discriminant();
    let mut parts: [Vec<(i64, i64)>; 4] = Default::default();
    for (p, e) in factor(level as u64) {
        let p = p as i64;
        let pe = p.pow(e);
        let m: [i64; 4] = if d.rem_euclid(4) == 0 {
            if a % p != 0 {
                [a, b / 2, 0, 1]
            } else if c % p != 0 {
                [-b / 2, -c, 1, 0]
            } else {
                [-a - b / 2, -c - b / 2, 1, -1]
            }
        } else if a % p != 0 {
            [a, (b - 1) / 2, 0, 1]
        } else if c % p != 0 {
            [-(b + 1) / 2, -c, 1, 0]
        } else {
            [-a - (b + 1) / 2, (1 - b) / 2 - c, 1, -1]
        };
        for i in 0..4 {
            parts[i].push((m[i].rem_euclid(pe), pe));
        }
    }
    ResidueMatrix::new(
        crt(&parts[0]),
        crt(&parts[1]),
        crt(&parts[2]),
        crt(&parts[3]),
        level,
    )
}

/// Lifts the class of `t + s*tau` modulo `f` to level `level` inside
/// `W_{level,tau}`: the first shift `x + i*(n_t + k tau) + j*m` (row-major in
/// `(i, j)`) whose determinant is a unit modulo `level` and satisfies
/// `det(alpha) * det(u) = 1 (mod ell)`. Returns the lifted `(s, t)`.
pub fn lift_with_det(
    field: &Field,
    f: &Ideal,
    st: (i64, i64),
    level: i64,
    u: &ResidueMatrix,
    ell: i64,
) -> Result<(i64, i64)> {
    let (m, nt, k) = field.tau_hnf(f);
    let q = field.principal_form();
    let du = u.det();
    for i in 0..(level / k) {
        for j in 0..(level / m) {
            let s = st.0 + i * k;
            let t = st.1 + i * nt + j * m;
            let det = modp(WClassMatrix::new(s, t, q).det(), level);
            if gcd(det, level) != 1 {
                continue;
            }
            if ell > 1 && mul_mod(det, du, ell) != 1 % ell {
                continue;
            }
            return Ok((s.rem_euclid(level), t.rem_euclid(level)));
        }
    }
    Err(Error::NoAdmissibleLift)
}

/// Generators of `SL_2(Z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gen {
    /// `(0 -1; 1 0)`
    S,
    /// `(1 n; 0 1)` for the stored exponent
    T(i64),
}

/// A word in `S` and powers of `T`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SL2Word(pub Vec<Gen>);

pub type IntMatrix = [i128; 4];

pub fn mat_mul(x: &IntMatrix, y: &IntMatrix) -> IntMatrix {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

impl Gen {
    pub fn matrix(&self) -> IntMatrix {
        match *self {
            Gen::S => [0, -1, 1, 0],
            Gen::T(n) => [1, n as i128, 0, 1],
        }
    }
}

impl SL2Word {
    pub fn product(&self) -> IntMatrix {
        self.0
            .iter()
            .fold([1, 0, 0, 1], |acc, g| mat_mul(&acc, &g.matrix()))
    }

    /// Herglotz exponent of the word as a sum of generator images.
    pub fn omega_exponent(&self) -> i64 {
        self.0
            .iter()
            .map(|g| match g {
                Gen::S => 9,
                Gen::T(n) => n.rem_euclid(12),
            })
            .sum::<i64>()
            .rem_euclid(12)
    }
}

/// Euclid on the first column: `A = T^{q1} S T^{q2} S ... T^{b}` up to `S^2`.
pub fn sl2_decompose(a: &IntMatrix) -> SL2Word {
    assert_eq!(a[0] * a[3] - a[1] * a[2], 1, "matrix must lie in SL2(Z)");
    let mut m = *a;
    let mut word = Vec::new();
    while m[2] != 0 {
        let q = m[0].div_euclid(m[2]);
        if q != 0 {
            word.push(Gen::T(q as i64));
            // T^{-q} m
            m = [m[0] - q * m[2], m[1] - q * m[3], m[2], m[3]];
        }
        word.push(Gen::S);
        // S^{-1} m
        m = [m[2], m[3], -m[0], -m[1]];
    }
    if m[0] == -1 {
        word.push(Gen::S);
        word.push(Gen::S);
        m = [-m[0], -m[1], -m[2], -m[3]];
    }
    if m[1] != 0 {
        word.push(Gen::T(m[1] as i64));
    }
    SL2Word(word)
}

/// The exponent `e` with `omega(A) = exp(2 pi i e / 12)`.
pub fn herglotz_omega(m: &IntMatrix) -> i64 {
    let r = |x: i128| x.rem_euclid(12) as i64;
    let (a, b, c, d) = (r(m[0]), r(m[1]), r(m[2]), r(m[3]));
    let p3 = a * c * (b * b + 1) + b * d * (a * a + 1);
    let p4 = (b * b - a + 2) * c + (a * a - b + 2) * d + a * d;
    (3 * p4 - 4 * p3).rem_euclid(12)
}

/// Lifts a matrix of determinant one modulo `n` to `SL_2(Z)`.
pub fn sl2_lift(g: &ResidueMatrix) -> IntMatrix {
    let n = g.level as i128;
    let (a, b) = (g.a as i128, g.b as i128);
    let mut c = g.c as i128;
    let mut d = g.d as i128;
    if c == 0 && (d == 1 || d == n - 1) {
        let e = if d == 1 { 1 } else { -1 };
        return [e, b, 0, e];
    }
    if c == 0 {
        c = n;
    }
    while gcd_i(c, d) != 1 {
        d += n;
    }
    let (_, lam, mu) = ext_gcd(c, d);
    let (a0, b0) = (mu, -lam);
    let t = (lam * (a - a0) + mu * (b - b0)).rem_euclid(n);
    let out = [a0 + t * c, b0 + t * d, c, d];
    debug_assert_eq!(out[0] * out[3] - out[1] * out[2], 1);
    out
}

fn gcd_i(a: i128, b: i128) -> i128 {
    ext_gcd(a, b).0
}

/// Splits `gamma = A * diag(1, d)` with `A` in `SL_2(Z)` and `d = det(gamma)`.
pub fn glm_split(g: &ResidueMatrix) -> Result<(IntMatrix, i64)> {
    let d = g.det();
    let dinv = inv_mod(d, g.level).ok_or(Error::NonInvertibleDeterminant {
        det: d,
        level: g.level,
    })?;
    let n = g.level;
    let s = ResidueMatrix::new(g.a, mul_mod(g.b, dinv, n), g.c, mul_mod(g.d, dinv, n), n);
    Ok((sl2_lift(&s), d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mats(n: i64, q: QuadForm) -> Vec<[i64; 4]> {
        w_matrices(n, &q).iter().map(|w| w.matrix()).collect()
    }

    #[test]
    fn w_sets_match_known_lists() {
        let got = mats(5, QuadForm::new(1, 1, 23));
        let want = [
            [1, 0, 0, 1],
            [2, 0, 0, 2],
            [-1, -23, 1, 0],
            [0, -23, 1, 1],
            [2, -23, 1, 3],
            [-2, -46, 2, 0],
            [-1, -46, 2, 1],
            [0, -46, 2, 2],
        ];
        assert_eq!(got, want);
        let got = mats(6, QuadForm::new(1, 0, 10));
        let want = [
            [1, 0, 0, 1],
            [1, -10, 1, 1],
            [3, -10, 1, 3],
            [5, -10, 1, 5],
            [1, -20, 2, 1],
            [3, -20, 2, 3],
            [5, -20, 2, 5],
            [1, -30, 3, 1],
        ];
        assert_eq!(got, want);
        assert_eq!(w_matrices(2, &QuadForm::new(1, 1, 3)).len(), 3);
    }

    #[test]
    fn gee_matrices() {
        let u = gee_uq(&QuadForm::new(5, 3, 5), 300);
        assert_eq!(u.entries(), [293, 169, 276, 49]);
        let u = gee_uq(&QuadForm::new(1, 1, 23), 300);
        assert_eq!(u, ResidueMatrix::identity(300));
        let u = gee_uq(&QuadForm::new(2, 0, 5), 432);
        assert_eq!(u.reduce_to(16).entries(), [0, 11, 1, 0]);
        assert_eq!(u.reduce_to(27).entries(), [2, 0, 0, 1]);
    }

    #[test]
    fn herglotz_generators() {
        assert_eq!(herglotz_omega(&[1, 1, 0, 1]), 1);
        assert_eq!(herglotz_omega(&[0, -1, 1, 0]), 9);
        assert_eq!(herglotz_omega(&[-1, 0, 0, -1]), 6);
    }

    #[test]
    fn decompositions() {
        for m in [[1, 1, 0, 1], [-1, 0, 0, -1], [2, 1, 1, 1], [0, -1, 1, 0], [5, 7, -3, -4]] {
            let w = sl2_decompose(&m);
            assert_eq!(w.product(), m);
            assert_eq!(w.omega_exponent(), herglotz_omega(&m));
        }
        assert_eq!(sl2_decompose(&[1, 1, 0, 1]).0, [Gen::T(1)]);
    }

    #[test]
    fn split_reproduces_matrix() {
        let g = ResidueMatrix::new(293, 169, 276, 49, 300);
        let (a, d) = glm_split(&g).unwrap();
        assert_eq!(a[0] * a[3] - a[1] * a[2], 1);
        let back = ResidueMatrix::new(
            a[0] as i64,
            (a[1] * d as i128 % 300) as i64,
            a[2] as i64,
            (a[3] * d as i128 % 300) as i64,
            300,
        );
        assert_eq!(back, g);
        assert_eq!(glm_split(&ResidueMatrix::identity(12)).unwrap(), ([1, 0, 0, 1], 1));
        assert_eq!(
            glm_split(&ResidueMatrix::new(1, 0, 0, 7, 12)).unwrap(),
            ([1, 0, 0, 1], 7)
        );
        assert!(glm_split(&ResidueMatrix::new(2, 0, 0, 1, 12)).is_err());
    }

    #[test]
    fn lifts() {
        let k = Field::new(-91).unwrap();
        let f = k.int_ideal(5).unwrap();
        let id = ResidueMatrix::identity(300);
        assert_eq!(lift_with_det(&k, &f, (2, 1), 300, &id, 6), Ok((2, 1)));
        let uq = gee_uq(&QuadForm::new(5, 3, 5), 300);
        assert_eq!(lift_with_det(&k, &f, (2, 1), 300, &uq, 6), Ok((2, 11)));
        let k = Field::new(-10).unwrap();
        let f = k.int_ideal(6).unwrap();
        let id = ResidueMatrix::identity(432);
        assert_eq!(lift_with_det(&k, &f, (2, 3), 432, &id, 3), Ok((2, 3)));
        assert_eq!(lift_with_det(&k, &f, (0, 1), 432, &id, 3), Ok((0, 1)));
    }
}
