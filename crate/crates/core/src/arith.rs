//! Exact integer number theory over 64-bit inputs.
//!
//! Factorization uses trial division up to 10^6 and then Brent's variant of
//! Pollard rho with fixed seeds, so every result is reproducible.

use crate::error::{domain, Error, Result};

const TRIAL_LIMIT: u64 = 1_000_000;

/// A nonzero integer as `sign * prod(p^e)`, or zero with an empty product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredInteger {
    sign: i8,
    factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Prime/exponent pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Reassembles the integer. Fits in `i128` for every value produced by
    /// [`factorize`].
    pub fn value(&self) -> i128 {
        let magnitude: i128 = self
            .factors
            .iter()
            .map(|&(p, e)| (p as i128).pow(e))
            .product();
        self.sign as i128 * magnitude
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .binary_search_by_key(&p, |&(q, _)| q)
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }
}

/// Factorizes a nonzero `n` (|n| ≤ 2^63 holds for every `i64`).
pub fn factorize(n: i64) -> Result<FactoredInteger> {
    if n == 0 {
        return Err(Error::ZeroInput);
    }
    let sign = if n < 0 { -1 } else { 1 };
    let mut primes = Vec::new();
    factor_u64(n.unsigned_abs(), &mut primes);
    primes.sort_unstable();

    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(FactoredInteger { sign, factors })
}

fn factor_u64(mut m: u64, out: &mut Vec<u64>) {
    while m.is_multiple_of(2) {
        out.push(2);
        m /= 2;
    }
    let mut p = 3u64;
    while p <= TRIAL_LIMIT && p * p <= m {
        while m.is_multiple_of(p) {
            out.push(p);
            m /= p;
        }
        p += 2;
    }
    if m > 1 {
        split_large(m, out);
    }
}

fn split_large(m: u64, out: &mut Vec<u64>) {
    if m == 1 {
        return;
    }
    if is_prime_u64(m) {
        out.push(m);
        return;
    }
    let d = pollard_brent(m);
    split_large(d, out);
    split_large(m / d, out);
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve prime bases are exact for all
/// 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Finds a nontrivial divisor of an odd composite `n`.
fn pollard_brent(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    for c in 1..u64::MAX {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g, mut q) = (2u64, 2u64, 1u64, 1u64);
        let mut r = 1u64;
        let mut ys = y;
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!("rho exhausted every increment")
}

pub fn is_squarefree(n: i64) -> Result<bool> {
    Ok(factorize(n)?.factors.iter().all(|&(_, e)| e == 1))
}

/// The Kronecker symbol `(a|n)`.
///
/// Conventions: `(a|0) = 1` iff `|a| = 1`; `(a|-1)` is the sign of `a`;
/// `(a|2)` is 0 for even `a`, +1 for `a ≡ ±1 (mod 8)` and -1 for `a ≡ ±3`.
pub fn kronecker(a: i64, n: i64) -> Result<i8> {
    if a == 0 && n == 0 {
        return domain("kronecker symbol (0|0) is undefined");
    }
    Ok(kronecker_i128(a as i128, n as i128))
}

const TAB2: [i8; 8] = [0, 1, 0, -1, 0, -1, 0, 1];

fn kronecker_i128(mut a: i128, mut b: i128) -> i8 {
    if b == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    if a % 2 == 0 && b % 2 == 0 {
        return 0;
    }
    let v = b.trailing_zeros();
    b >>= v;
    let mut k: i8 = if v.is_multiple_of(2) {
        1
    } else {
        TAB2[(a & 7) as usize]
    };
    if b < 0 {
        b = -b;
        if a < 0 {
            k = -k;
        }
    }
    // b is odd and positive from here on.
    loop {
        if a == 0 {
            return if b > 1 { 0 } else { k };
        }
        let v = a.trailing_zeros();
        a >>= v;
        if v % 2 == 1 {
            k *= TAB2[(b & 7) as usize];
        }
        if a & b & 2 != 0 {
            k = -k;
        }
        let r = a.abs();
        a = b % r;
        b = r;
    }
}

/// Discriminant of `Q(sqrt(d))` for squarefree `d ∉ {0, 1}`.
pub fn fundamental_discriminant(d: i64) -> Result<i64> {
    if d == 0 || d == 1 {
        return domain(format!("{d} does not generate a quadratic field"));
    }
    if !is_squarefree(d)? {
        return Err(Error::NotSquarefree(d));
    }
    if d.rem_euclid(4) == 1 {
        Ok(d)
    } else {
        d.checked_mul(4)
            .ok_or_else(|| Error::Domain(format!("4*{d} overflows i64")))
    }
}

/// True when `D` is 1 or the discriminant of a quadratic field.
pub fn is_fundamental_discriminant(disc: i64) -> bool {
    if disc == 1 {
        return true;
    }
    match disc.rem_euclid(4) {
        1 => is_squarefree(disc).unwrap_or(false),
        0 => {
            let m = disc / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m).unwrap_or(false)
        }
        _ => false,
    }
}

/// Decides whether `u^n = v^m` forces `n = m = 0`.
///
/// `±1` is dependent with everything: `1^1 = v^0` and `(-1)^2 = v^0`. For
/// `|u|, |v| ≥ 2` a relation between absolute values needs proportional
/// exponent vectors, and it then always lifts to the signed values by doubling
/// both exponents, so the signs never decide the answer.
pub fn multiplicatively_independent(u: i64, v: i64) -> Result<bool> {
    if u == 0 || v == 0 {
        return Err(Error::ZeroInput);
    }
    if u.unsigned_abs() == 1 || v.unsigned_abs() == 1 {
        return Ok(false);
    }
    let fu = factorize(u)?;
    let fv = factorize(v)?;
    Ok(!exponents_proportional(&fu, &fv))
}

fn exponents_proportional(fu: &FactoredInteger, fv: &FactoredInteger) -> bool {
    if fu.factors.len() != fv.factors.len() {
        return false;
    }
    // Looking for positive n, m with n * e_u(p) = m * e_v(p) for every p.
    let (p0, eu0) = fu.factors[0];
    let ev0 = fv.exponent_of(p0);
    if ev0 == 0 {
        return false;
    }
    fu.factors
        .iter()
        .zip(&fv.factors)
        .all(|(&(p, eu), &(q, ev))| p == q && eu as u64 * ev0 as u64 == ev as u64 * eu0 as u64)
}

/// Exact test of `|u|^m == |v|^n` for positive exponents without forming
/// the powers.
pub fn abs_powers_equal(u: i64, m: u32, v: i64, n: u32) -> Result<bool> {
    if m == 0 || n == 0 {
        return domain("exponents must be positive");
    }
    let fu = factorize(u)?;
    let fv = factorize(v)?;
    if fu.factors.len() != fv.factors.len() {
        return Ok(false);
    }
    Ok(fu
        .factors
        .iter()
        .zip(&fv.factors)
        .all(|(&(p, eu), &(q, ev))| p == q && eu as u64 * m as u64 == ev as u64 * n as u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_small_cases() {
        let f = factorize(12).unwrap();
        assert_eq!((f.sign(), f.factors()), (1, &[(2, 2), (3, 1)][..]));
        let f = factorize(1).unwrap();
        assert_eq!((f.sign(), f.factors().len()), (1, 0));
        let f = factorize(-20).unwrap();
        assert_eq!((f.sign(), f.factors()), (-1, &[(2, 2), (5, 1)][..]));
        assert!(matches!(factorize(0), Err(Error::ZeroInput)));
    }

    #[test]
    fn factorize_hard_64_bit_inputs() {
        for n in [
            i64::MIN,
            i64::MAX,
            1_000_000_007 * 998_244_353,
            4_294_967_291 * 2_147_483_647,
            -(999_999_937i64 * 999_999_929),
        ] {
            let f = factorize(n).unwrap();
            assert_eq!(f.value(), n as i128, "{n}");
            for w in f.factors().windows(2) {
                assert!(w[0].0 < w[1].0);
            }
            assert!(f.factors().iter().all(|&(p, _)| is_prime_u64(p)));
        }
        assert_eq!(factorize(i64::MIN).unwrap().factors(), &[(2, 63)]);
    }

    #[test]
    fn squarefree_examples() {
        assert!(is_squarefree(10).unwrap());
        assert!(!is_squarefree(12).unwrap());
        assert!(is_squarefree(1).unwrap());
        assert!(is_squarefree(0).is_err());
    }

    #[test]
    fn kronecker_examples_and_conventions() {
        assert_eq!(kronecker(1, 7).unwrap(), 1);
        assert_eq!(kronecker(8, 3).unwrap(), -1);
        assert_eq!(kronecker(5, 5).unwrap(), 0);
        assert!(kronecker(0, 0).is_err());
        assert_eq!(kronecker(-7, -1).unwrap(), -1);
        assert_eq!(kronecker(7, -1).unwrap(), 1);
        assert_eq!(kronecker(0, -1).unwrap(), 1);
        assert_eq!(kronecker(1, 0).unwrap(), 1);
        assert_eq!(kronecker(-1, 0).unwrap(), 1);
        assert_eq!(kronecker(2, 0).unwrap(), 0);
        for a in -40i64..40 {
            let expected = match a.rem_euclid(8) {
                1 | 7 => 1,
                3 | 5 => -1,
                _ => 0,
            };
            assert_eq!(kronecker(a, 2).unwrap(), expected, "({a}|2)");
        }
    }

    #[test]
    fn fundamental_discriminant_examples() {
        assert_eq!(fundamental_discriminant(5).unwrap(), 5);
        assert_eq!(fundamental_discriminant(6).unwrap(), 24);
        assert_eq!(fundamental_discriminant(-1).unwrap(), -4);
        assert_eq!(fundamental_discriminant(2).unwrap(), 8);
        assert_eq!(fundamental_discriminant(-3).unwrap(), -3);
        assert!(fundamental_discriminant(1).is_err());
        assert!(fundamental_discriminant(0).is_err());
        assert!(matches!(
            fundamental_discriminant(12),
            Err(Error::NotSquarefree(12))
        ));
    }

    #[test]
    fn fundamental_discriminant_recognizer() {
        for d in [1, -3, -4, 5, -7, 8, -8, 12, 13, 24, -20] {
            assert!(is_fundamental_discriminant(d), "{d}");
        }
        for d in [0, 2, 3, -1, 4, 9, 16, -16, 20, 25] {
            assert!(!is_fundamental_discriminant(d), "{d}");
        }
    }

    #[test]
    fn independence_examples() {
        assert!(!multiplicatively_independent(2, 4).unwrap());
        assert!(multiplicatively_independent(8, 12).unwrap());
        assert!(!multiplicatively_independent(-4, 2).unwrap());
        assert!(!multiplicatively_independent(1, 7).unwrap());
        assert!(!multiplicatively_independent(-1, 7).unwrap());
        assert!(multiplicatively_independent(2, 3).unwrap());
        assert!(!multiplicatively_independent(-8, -32).unwrap());
        assert!(multiplicatively_independent(0, 3).is_err());
    }

    #[test]
    fn abs_powers_equal_matches_direct_powers() {
        assert!(abs_powers_equal(8, 2, 4, 3).unwrap());
        assert!(abs_powers_equal(-8, 2, 4, 3).unwrap());
        assert!(!abs_powers_equal(8, 2, 12, 2).unwrap());
        assert!(abs_powers_equal(1, 3, -1, 5).unwrap());
        assert!(abs_powers_equal(8, 1, 12, 1).is_ok_and(|eq| !eq));
    }
}
