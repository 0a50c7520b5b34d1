//! Reference implementations used only by the tests. None of these share code
//! with the library's evaluation paths.

#![allow(dead_code)]

pub mod suites;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

pub fn bits_for(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 64
}

pub fn float(bits: u32, x: impl Into<Rational>) -> Float {
    Float::with_val(bits, &x.into())
}

/// Euler's constant by the Brent–McMillan sum, error about `π e^(-4n)`.
pub fn euler_gamma(digits: u32) -> Float {
    let bits = bits_for(digits) + 32;
    let n = (bits as f64 * std::f64::consts::LN_2 / 4.0).ceil() as u32 + 2;
    let kmax = (4.98 * n as f64).ceil() as u32;
    let nf = Float::with_val(bits, n);
    let n2 = Float::with_val(bits, &nf * &nf);
    let mut a = -Float::with_val(bits, nf.ln_ref());
    let mut b = Float::with_val(bits, 1);
    let mut u = a.clone();
    let mut v = b.clone();
    for k in 1..=kmax {
        b *= &n2;
        b /= k * k;
        a *= &n2;
        a /= k;
        a += &b;
        a /= k;
        u += &a;
        v += &b;
    }
    u / v
}

/// `Σ_{k≥0} (-1)^k a_k` by the Cohen–Rodriguez Villegas–Zagier acceleration.
pub fn alternating_sum(digits: u32, term: impl Fn(u32, u32) -> Float) -> Float {
    let bits = bits_for(digits) + 32;
    let n = (1.35 * digits as f64).ceil() as u32 + 10;
    let root8 = Float::with_val(bits, 8).sqrt();
    let mut d = Float::with_val(bits, &root8 + 3u32).pow(n);
    d = (Float::with_val(bits, d.recip_ref()) + &d) / 2u32;
    let mut b = Float::with_val(bits, -1);
    let mut c = -d.clone();
    let mut s = Float::new(bits);
    for k in 0..n {
        c = Float::with_val(bits, &b - &c);
        s += Float::with_val(bits, &c * &term(k, bits));
        let (k, nn) = (k as i64, n as i64);
        b *= (k + nn) * (k - nn);
        b *= 2;
        b /= (2 * k + 1) * (k + 1);
    }
    s / d
}

/// `ζ(s)` for real `s > 0`, `s ≠ 1`, through the alternating eta series.
pub fn zeta(s: &Rational, digits: u32) -> Float {
    let bits = bits_for(digits) + 32;
    let sf = float(bits, s.clone());
    let eta = alternating_sum(digits, |k, b| {
        Float::with_val(b, k + 1).pow(&Float::with_val(b, -&sf))
    });
    let factor =
        Float::with_val(bits, 1) - Float::with_val(bits, 2).pow(Float::with_val(bits, 1 - &sf));
    eta / factor
}

/// `L(1/2, χ_-4) = Σ (-1)^k / sqrt(2k+1)`.
pub fn beta_half(digits: u32) -> Float {
    alternating_sum(digits, |k, b| Float::with_val(b, 2 * k + 1).recip_sqrt())
}

/// Kronecker symbol `(D|n)` for fundamental `D` and `n ≥ 1`, by reducing to
/// Legendre symbols via Euler's criterion on the prime factorization of `n`.
pub fn kronecker_slow(disc: i64, n: u64) -> i8 {
    let mut m = n;
    let mut result = 1i8;
    let mut p = 2u64;
    while m > 1 {
        if p * p > m {
            p = m;
        }
        while m.is_multiple_of(p) {
            m /= p;
            result *= legendre_like(disc, p);
        }
        p += 1;
    }
    result
}

fn legendre_like(disc: i64, p: u64) -> i8 {
    if p == 2 {
        if disc % 2 == 0 {
            return 0;
        }
        return if matches!(disc.rem_euclid(8), 1 | 7) {
            1
        } else {
            -1
        };
    }
    let a = disc.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    let e = Integer::from(a)
        .pow_mod(&Integer::from((p - 1) / 2), &Integer::from(p))
        .unwrap();
    if e == 1 {
        1
    } else {
        -1
    }
}

/// `L(s, χ_D)` for a fundamental discriminant `D ≠ 1` from the theta-function
/// smoothed sum
///
/// `Λ(s) = Σ χ(n) [(q/π)^((s+κ)/2) n^-s Γ((s+κ)/2, πn²/q)
///                 + (q/π)^((1-s+κ)/2) n^(s-1) Γ((1-s+κ)/2, πn²/q)]`,
///
/// with `κ = 0` for `D > 0`, `κ = 1` for `D < 0`, and
/// `Λ(s) = (q/π)^((s+κ)/2) Γ((s+κ)/2) L(s, χ)`.
pub fn l_smoothed(disc: i64, s: &Rational, digits: u32) -> Float {
    let bits = bits_for(digits) + 32;
    let q = disc.unsigned_abs();
    let kappa = if disc < 0 { 1 } else { 0 };
    let sf = float(bits, s.clone());
    let pi = Float::with_val(bits, Constant::Pi);
    let q_over_pi = Float::with_val(bits, q) / &pi;
    let a1 = Float::with_val(bits, &sf + kappa) / 2u32;
    let a2 = Float::with_val(bits, 1 - Float::with_val(bits, &sf) + kappa) / 2u32;
    let c1 = Float::with_val(bits, (&q_over_pi).pow(&a1));
    let c2 = Float::with_val(bits, (&q_over_pi).pow(&a2));
    let target = digits as f64 * std::f64::consts::LN_10 + 20.0;
    let mut total = Float::new(bits);
    let mut n = 1u64;
    loop {
        let x = Float::with_val(bits, &pi * (n * n)) / q;
        if x.to_f64() > target {
            break;
        }
        let chi = kronecker_slow(disc, n);
        if chi != 0 {
            let nf = Float::with_val(bits, n);
            let t1 = Float::with_val(bits, (&nf).pow(-Float::with_val(bits, &sf)))
                * Float::with_val(bits, a1.gamma_inc_ref(&x))
                * &c1;
            let t2 = Float::with_val(bits, (&nf).pow(Float::with_val(bits, &sf - 1u32)))
                * Float::with_val(bits, a2.gamma_inc_ref(&x))
                * &c2;
            let t = t1 + t2;
            if chi > 0 {
                total += t;
            } else {
                total -= t;
            }
        }
        n += 1;
    }
    total / (c1 * a1.gamma())
}

/// Central difference `(f(s+h) - f(s-h)) / 2h` with one Richardson step.
pub fn derivative(s: &Rational, h: &Rational, f: impl Fn(&Rational) -> Float) -> Float {
    let d = |h: &Rational| {
        let up = f(&Rational::from(s + h));
        let down = f(&Rational::from(s - h));
        let prec = up.prec();
        (up - down) / Float::with_val(prec, &(2 * h.clone()))
    };
    let h2 = Rational::from(h / 2u32);
    let coarse = d(h);
    let fine = d(&h2);
    (fine.clone() * 4u32 - coarse) / 3u32
}

/// `B_0..B_m` from `Σ_{j=0}^{k} C(k+1, j) B_j = 0`.
pub fn bernoulli_recurrence(m: usize) -> Vec<Rational> {
    let mut b = vec![Rational::from(1)];
    for k in 1..=m {
        let mut acc = Rational::new();
        for (j, bj) in b.iter().enumerate() {
            acc += Rational::from(Integer::from(Integer::binomial_u(k as u32 + 1, j as u32))) * bj;
        }
        b.push(-acc / (k as u32 + 1));
    }
    b
}

pub fn close(a: &Float, b: &Float, tol: f64) -> bool {
    Float::with_val(64, a - b).abs() < tol
}
