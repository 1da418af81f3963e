//! Exact arithmetic in imaginary quadratic fields: elements, HNF ideals,
//! reduced forms and the form class group.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::arith::{ext_gcd, gcd, is_square, is_squarefree};
use crate::{Error, Result};

/// An imaginary quadratic field given by its fundamental discriminant.
///
/// Two bases of the maximal order are in play: `{1, omega}` with
/// `omega = (d + sqrt d)/2`, used for ideals, and `{1, tau}` with
/// `tau = (-b0 + sqrt d)/2`, `b0 = d mod 2`, used for display and for the
/// reciprocity matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Field {
    d: i64,
    b0: i64,
    c0: i64,
}

/// `x + y*omega`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    pub x: i64,
    pub y: i64,
}

impl FieldElement {
    pub const fn new(x: i64, y: i64) -> Self {
        FieldElement { x, y }
    }
    pub const fn int(x: i64) -> Self {
        FieldElement { x, y: 0 }
    }
    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }
}

impl Field {
    /// Builds the field `Q(sqrt d)`. Accepts a squarefree `d` or a fundamental
    /// discriminant.
    pub fn new(d: i64) -> Result<Field> {
        if d >= 0 {
            return Err(Error::NotFundamental(d));
        }
        let n = d.unsigned_abs();
        let dk = if is_squarefree(n) {
            if d.rem_euclid(4) == 1 {
                d
            } else {
                4 * d
            }
        } else if d % 4 == 0 {
            let e = d / 4;
            let r = e.rem_euclid(4);
            if (r == 2 || r == 3) && is_squarefree(e.unsigned_abs()) {
                d
            } else {
                return Err(Error::NotFundamental(d));
            }
        } else {
            return Err(Error::NotFundamental(d));
        };
        if dk == -3 || dk == -4 {
            return Err(Error::ExcludedField);
        }
        let b0 = dk.rem_euclid(2);
        Ok(Field {
            d: dk,
            b0,
            c0: (b0 - dk) / 4,
        })
    }

    pub fn discriminant(&self) -> i64 {
        self.d
    }

    /// Coefficients `(b0, c0)` of the minimal polynomial `x^2 + b0 x + c0` of tau.
    pub fn tau_poly(&self) -> (i64, i64) {
        (self.b0, self.c0)
    }

    pub fn w_units(&self) -> u32 {
        2
    }

    pub fn principal_form(&self) -> QuadForm {
        QuadForm::new(1, self.b0, self.c0)
    }

    /// `omega - tau`, an integer.
    pub fn tau_shift(&self) -> i64 {
        (self.d + self.b0) / 2
    }

    fn omega_norm(&self) -> i64 {
        (self.d * self.d - self.d) / 4
    }

    /// The element `a + b*tau`.
    pub fn from_tau(&self, a: i64, b: i64) -> FieldElement {
        FieldElement::new(a - b * self.tau_shift(), b)
    }

    /// Coordinates `(a, b)` with `x = a + b*tau`.
    pub fn to_tau(&self, e: FieldElement) -> (i64, i64) {
        (e.x + e.y * self.tau_shift(), e.y)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement::new(a.x + b.x, a.y + b.y)
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let (x1, y1, x2, y2) = (a.x as i128, a.y as i128, b.x as i128, b.y as i128);
        let x = x1 * x2 - y1 * y2 * self.omega_norm() as i128;
        let y = x1 * y2 + x2 * y1 + y1 * y2 * self.d as i128;
        FieldElement::new(narrow(x), narrow(y))
    }

    pub fn conj(&self, a: FieldElement) -> FieldElement {
        FieldElement::new(a.x + a.y * self.d, -a.y)
    }

    pub fn norm(&self, a: FieldElement) -> i128 {
        let (x, y) = (a.x as i128, a.y as i128);
        x * x + self.d as i128 * x * y + self.omega_norm() as i128 * y * y
    }

    pub fn trace(&self, a: FieldElement) -> i64 {
        2 * a.x + a.y * self.d
    }

    /// Reduced forms of discriminant `d`, sorted by `(a, b)`; the principal
    /// form comes first.
    pub fn class_group(&self) -> Vec<QuadForm> {
        let d = self.d;
        let mut out = Vec::new();
        let mut a = 1i64;
        while 3 * a * a <= -d {
            for b in (-a + 1)..=a {
                if (b - d).rem_euclid(2) != 0 {
                    continue;
                }
                let num = b * b - d;
                if num % (4 * a) != 0 {
                    continue;
                }
                let c = num / (4 * a);
                if c < a || (c == a && b < 0) || gcd(gcd(a, b), c) != 1 {
                    continue;
                }
                out.push(QuadForm::new(a, b, c));
            }
            a += 1;
        }
        out.sort_by_key(|q| (q.a, q.b));
        out
    }

    pub fn class_number(&self) -> usize {
        self.class_group().len()
    }

    /// The ideal generated over `O_K` by `gens`.
    pub fn make_ideal(&self, gens: &[FieldElement]) -> Result<Ideal> {
        let omega = FieldElement::new(0, 1);
        let mut vs = Vec::with_capacity(2 * gens.len());
        for &g in gens {
            vs.push(g);
            vs.push(self.mul(g, omega));
        }
        Ideal::from_lattice(&vs)
    }

    pub fn principal_ideal(&self, g: FieldElement) -> Result<Ideal> {
        self.make_ideal(&[g])
    }

    pub fn int_ideal(&self, n: i64) -> Result<Ideal> {
        self.make_ideal(&[FieldElement::int(n)])
    }

    pub fn ideal_mul(&self, a: &Ideal, b: &Ideal) -> Ideal {
        let mut vs = Vec::with_capacity(4);
        for x in a.basis() {
            for y in b.basis() {
                vs.push(self.mul(x, y));
            }
        }
        Ideal::from_lattice(&vs).expect("product of nonzero ideals is nonzero")
    }

    pub fn ideal_conj(&self, a: &Ideal) -> Ideal {
        let [x, y] = a.basis();
        Ideal::from_lattice(&[self.conj(x), self.conj(y)]).expect("nonzero")
    }

    pub fn ideal_sum(&self, a: &Ideal, b: &Ideal) -> Ideal {
        let [x1, y1] = a.basis();
        let [x2, y2] = b.basis();
        Ideal::from_lattice(&[x1, y1, x2, y2]).expect("nonzero")
    }

    /// The ideal `[a, (-b + sqrt d)/2]` attached to a form.
    pub fn ideal_from_form(&self, q: &QuadForm) -> Ideal {
        let n = (-(self.d + q.b) / 2).rem_euclid(q.a);
        Ideal { m: q.a, n, k: 1 }
    }

    /// The reduced form whose ideal lies in the class of `a`.
    pub fn form_from_ideal(&self, a: &Ideal) -> QuadForm {
        let m = a.m / a.k;
        let n = a.n / a.k;
        let b = -2 * n - self.d;
        let c = (b as i128 * b as i128 - self.d as i128) / (4 * m as i128);
        QuadForm::new(m, b, narrow(c)).reduce()
    }

    /// A generator of `a` if it is principal. Among the two generators the one
    /// with `y > 0`, or `y = 0` and `x > 0`, is returned.
    pub fn principal_generator(&self, a: &Ideal) -> Result<FieldElement> {
        let n = a.norm() as i128;
        let dd = -(self.d as i128);
        let mut y: i128 = 0;
        while y * y * dd <= 4 * n {
            let mut best: Option<FieldElement> = None;
            let rad = 4 * n - y * y * dd;
            if let Some(s) = is_square(rad) {
                for ys in [y, -y] {
                    for sg in [s, -s] {
                        let two_x = sg - ys * self.d as i128;
                        if two_x % 2 != 0 {
                            continue;
                        }
                        let e = FieldElement::new(narrow(two_x / 2), narrow(ys));
                        if a.contains(e) && better_generator(e, best) {
                            best = Some(e);
                        }
                    }
                }
            }
            if let Some(e) = best {
                return Ok(e);
            }
            y += 1;
        }
        Err(Error::NotPrincipal)
    }

    /// The smallest positive integer in `a`.
    pub fn minimal_integer(&self, a: &Ideal) -> Result<i64> {
        if a.norm() == 1 {
            return Err(Error::UnitIdeal);
        }
        Ok(a.m)
    }

    /// Is `x` a unit modulo `f`?
    pub fn is_invertible_mod(&self, x: FieldElement, f: &Ideal) -> bool {
        if x.is_zero() {
            return f.norm() == 1;
        }
        let n = self.norm(x);
        let nf = f.norm() as i128;
        // fast path: coprime norms settle it
        if gcd((n % nf) as i64, nf as i64) == 1 {
            return true;
        }
        let px = self.principal_ideal(x).expect("nonzero");
        self.ideal_sum(&px, f).norm() == 1
    }

    /// The HNF of `f` in the `{1, tau}` basis, as `(m, n_t, k)` with
    /// `f = [m, n_t + k*tau]`.
    pub fn tau_hnf(&self, f: &Ideal) -> (i64, i64, i64) {
        (f.m, (f.n + f.k * self.tau_shift()).rem_euclid(f.m), f.k)
    }

    /// Canonical representative of `t + s*tau` modulo `f`, returned as `(s, t)`
    /// with `0 <= s < k` and `0 <= t < m`.
    pub fn reduce_mod(&self, f: &Ideal, s: i64, t: i64) -> (i64, i64) {
        let (m, nt, k) = self.tau_hnf(f);
        let s1 = s.rem_euclid(k);
        let q = (s - s1) / k;
        let t1 = (t as i128 - q as i128 * nt as i128).rem_euclid(m as i128) as i64;
        (s1, t1)
    }

    /// The unit group `(O/f)^*` as residues `t + s*tau`, scanned in
    /// lexicographic `(s, t)` order.
    pub fn invertible_residues(&self, f: &Ideal) -> Result<Residues> {
        if f.norm() == 1 {
            return Err(Error::UnitIdeal);
        }
        let (m, _, k) = self.tau_hnf(f);
        let mut elements = Vec::new();
        for s in 0..k {
            for t in 0..m {
                if self.is_invertible_mod(self.from_tau(t, s), f) {
                    elements.push((s, t));
                }
            }
        }
        let mut orbit_of = alloc::vec![usize::MAX; elements.len()];
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        for i in 0..elements.len() {
            if orbit_of[i] != usize::MAX {
                continue;
            }
            let (s, t) = elements[i];
            let neg = self.reduce_mod(f, -s, -t);
            let j = elements
                .binary_search(&neg)
                .expect("negation of a unit is a unit");
            let id = orbits.len();
            orbit_of[i] = id;
            if j == i {
                orbits.push(alloc::vec![i]);
            } else {
                orbit_of[j] = id;
                orbits.push(alloc::vec![i, j]);
            }
        }
        Ok(Residues {
            elements,
            orbits,
        })
    }
}

fn better_generator(e: FieldElement, cur: Option<FieldElement>) -> bool {
    let key = |e: FieldElement| (e.y.abs(), e.x.abs(), e.y < 0 || (e.y == 0 && e.x < 0));
    match cur {
        None => true,
        Some(c) => key(e) < key(c),
    }
}

fn narrow(x: i128) -> i64 {
    i64::try_from(x).expect("integer overflow in field arithmetic")
}

/// Units of `O/f` as `(s, t)` pairs meaning `t + s*tau`, with their orbits
/// under `{1, -1}`. Orbit order follows the first element of each orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Residues {
    pub elements: Vec<(i64, i64)>,
    pub orbits: Vec<Vec<usize>>,
}

impl Residues {
    pub fn len(&self) -> usize {
        self.elements.len()
    }
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
    pub fn orbit_count(&self) -> usize {
        self.orbits.len()
    }
    /// First (lexicographically smallest) element of every orbit.
    pub fn representatives(&self) -> Vec<(i64, i64)> {
        self.orbits.iter().map(|o| self.elements[o[0]]).collect()
    }
}

/// Positive definite binary quadratic form `a x^2 + b xy + c y^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_reduced(&self) -> bool {
        let QuadForm { a, b, c } = *self;
        a > 0 && b.abs() <= a && a <= c && !((b.abs() == a || a == c) && b < 0)
    }

    /// Gauss reduction to the unique reduced form in the proper class.
    pub fn reduce(&self) -> QuadForm {
        let d = self.discriminant() as i128;
        let (mut a, mut b, mut c) = (self.a as i128, self.b as i128, self.c as i128);
        loop {
            if b > a || b <= -a {
                let r = (a - b).div_euclid(2 * a);
                b += 2 * a * r;
                c = (b * b - d) / (4 * a);
            }
            if a > c {
                core::mem::swap(&mut a, &mut c);
                b = -b;
                continue;
            }
            if a == c && b < 0 {
                b = -b;
            }
            break;
        }
        QuadForm::new(narrow(a), narrow(b), narrow(c))
    }
}

impl PartialOrd for QuadForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadForm {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.a, self.b, self.c).cmp(&(other.a, other.b, other.c))
    }
}

/// Ideal with Z-basis `[m, n + k*omega]` in Hermite normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ideal {
    pub m: i64,
    pub n: i64,
    pub k: i64,
}

impl Ideal {
    /// HNF of the Z-lattice spanned by `vs` (coordinates in `{1, omega}`).
    /// The caller guarantees the span is an `O_K`-module.
    pub fn from_lattice(vs: &[FieldElement]) -> Result<Ideal> {
        let mut m: i128 = 0;
        let mut row: Option<(i128, i128)> = None;
        for v in vs {
            let (x, y) = (v.x as i128, v.y as i128);
            if y == 0 {
                m = gcd_i128(m, x);
                continue;
            }
            match row {
                None => row = Some((x, y)),
                Some((n, k)) => {
                    let (g, s, t) = ext_gcd(k, y);
                    let new = (s * n + t * x, g);
                    let zero_x = (y / g) * n - (k / g) * x;
                    m = gcd_i128(m, zero_x);
                    row = Some(new);
                }
            }
        }
        let (n, k) = match row {
            None => return Err(Error::ZeroIdeal),
            Some((n, k)) if k < 0 => (-n, -k),
            Some(r) => r,
        };
        if m == 0 {
            return Err(Error::ZeroIdeal);
        }
        Ok(Ideal {
            m: narrow(m),
            n: narrow(n.rem_euclid(m)),
            k: narrow(k),
        })
    }

    pub fn norm(&self) -> i64 {
        self.m * self.k
    }

    pub fn basis(&self) -> [FieldElement; 2] {
        [FieldElement::int(self.m), FieldElement::new(self.n, self.k)]
    }

    pub fn contains(&self, e: FieldElement) -> bool {
        if e.y % self.k != 0 {
            return false;
        }
        let q = e.y / self.k;
        (e.x as i128 - q as i128 * self.n as i128) % self.m as i128 == 0
    }

    /// `(N)` for a rational integer, i.e. `[N, N omega]`.
    pub fn is_rational(&self) -> bool {
        self.n == 0 && self.k == self.m
    }

    pub fn triple(&self) -> (i64, i64, i64) {
        (self.m, self.n, self.k)
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}
