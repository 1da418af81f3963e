//! Small exact integer helpers shared by the number-theoretic modules.

use alloc::vec::Vec;

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a as i64
}

pub fn lcm(a: i64, b: i64) -> i64 {
    if a == 0 || b == 0 {
        return 0;
    }
    (a / gcd(a, b) * b).abs()
}

/// Returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Least nonnegative residue.
#[inline]
pub fn modp(a: i128, m: i64) -> i64 {
    a.rem_euclid(m as i128) as i64
}

#[inline]
pub fn mul_mod(a: i64, b: i64, m: i64) -> i64 {
    modp(a as i128 * b as i128, m)
}

pub fn inv_mod(a: i64, m: i64) -> Option<i64> {
    if m == 1 {
        return Some(0);
    }
    let (g, x, _) = ext_gcd(a as i128, m as i128);
    (g == 1).then(|| modp(x, m))
}

/// Prime factorisation by trial division, primes ascending.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn valuation(mut n: i128, p: i64) -> u32 {
    if n == 0 {
        return u32::MAX;
    }
    let mut e = 0;
    while n % p as i128 == 0 {
        n /= p as i128;
        e += 1;
    }
    e
}

/// Chinese remainder for pairwise coprime moduli. Returns the residue modulo
/// the product.
pub fn crt(parts: &[(i64, i64)]) -> i64 {
    let modulus: i64 = parts.iter().map(|&(_, m)| m).product();
    let mut acc: i128 = 0;
    for &(r, m) in parts {
        let rest = modulus / m;
        let inv = inv_mod(rest % m, m).expect("crt moduli must be coprime");
        acc += r as i128 * ((rest as i128 * inv as i128) % modulus as i128);
        acc %= modulus as i128;
    }
    modp(acc, modulus)
}

pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (libm::sqrt(n as f64)) as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

pub fn is_square(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = isqrt(n as u128) as i128;
    (r * r == n).then_some(r)
}

pub fn is_squarefree(n: u64) -> bool {
    factor(n).iter().all(|&(_, e)| e == 1)
}
