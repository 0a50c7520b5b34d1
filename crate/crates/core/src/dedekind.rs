//! The functional-equation factor
//!
//! ```text
//! A_K(s) = |d_K|^(s-1/2) cos(πs/2)^(r1+r2) sin(πs/2)^r2 (2 (2π)^-s Γ(s))^n
//! ```
//!
//! with `ζ_K(1-s) = A_K(s) ζ_K(s)`, its closed-form derivative at `s = 1/2`,
//! and the certification and gap quantities built on it.
//!
//! Since `A_K(1/2) = 1`, differentiating the functional equation gives
//! `ζ_K'(1/2) = -A_K'(1/2) ζ_K(1/2) / 2`, so a nonzero `A_K'(1/2)` means
//! `ζ_K(1/2)` and `ζ_K'(1/2)` vanish together.

use std::fmt;

use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{domain, Error, Result};
use crate::hurwitz;
use crate::mpreal::{constant_gamma, constant_pi, gamma, log_8pi, BoundedReal, PrecisionContext};

/// `(n, r1, r2, d_K)` of a number field, or a hypothetical one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSignature {
    n: u32,
    r1: u32,
    r2: u32,
    d: i64,
}

impl FieldSignature {
    /// Checks `n = r1 + 2 r2`, `|d| ≥ 1`, and `|d| > 1` when `n > 1`.
    pub fn new(n: u32, r1: u32, r2: u32, d: i64) -> Result<Self> {
        if n == 0 {
            return domain("degree must be positive");
        }
        if r1 as u64 + 2 * r2 as u64 != n as u64 {
            return domain(format!("n = {n} differs from r1 + 2 r2 = {}", r1 + 2 * r2));
        }
        if d == 0 {
            return Err(Error::ZeroInput);
        }
        if n > 1 && d.unsigned_abs() == 1 {
            return domain("a field of degree > 1 has |d| > 1");
        }
        Ok(Self { n, r1, r2, d })
    }

    /// [`FieldSignature::new`] plus Stickelberger (`d ≡ 0, 1 mod 4`) and the
    /// sign rule `sign(d) = (-1)^r2`.
    pub fn new_strict(n: u32, r1: u32, r2: u32, d: i64) -> Result<Self> {
        let sig = Self::new(n, r1, r2, d)?;
        if !matches!(d.rem_euclid(4), 0 | 1) {
            return domain(format!("d = {d} is not 0 or 1 mod 4"));
        }
        let expected_negative = r2 % 2 == 1;
        if (d < 0) != expected_negative {
            return domain(format!("sign of d = {d} contradicts r2 = {r2}"));
        }
        Ok(sig)
    }

    /// Signature from degree, number of real embeddings and `|d|`; the sign of
    /// `d` is taken as `(-1)^r2`.
    pub fn from_degree(n: u32, r1: u32, disc_abs: u64) -> Result<Self> {
        if r1 > n || !(n - r1).is_multiple_of(2) {
            return domain(format!("r1 = {r1} is not admissible for degree {n}"));
        }
        let r2 = (n - r1) / 2;
        let mag = i64::try_from(disc_abs)
            .map_err(|_| Error::Domain(format!("|d| = {disc_abs} exceeds i64")))?;
        let d = if r2 % 2 == 1 { -mag } else { mag };
        Self::new(n, r1, r2, d)
    }

    /// `Q` itself: `(1, 1, 0, 1)`.
    pub fn rationals() -> Self {
        Self {
            n: 1,
            r1: 1,
            r2: 0,
            d: 1,
        }
    }

    /// `Q(sqrt(d))` for squarefree `d ∉ {0, 1}`.
    pub fn quadratic(d: i64) -> Result<Self> {
        let disc = arith::fundamental_discriminant(d)?;
        if d > 0 {
            Self::new(2, 2, 0, disc)
        } else {
            Self::new(2, 0, 1, disc)
        }
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn r1(&self) -> u32 {
        self.r1
    }

    pub fn r2(&self) -> u32 {
        self.r2
    }

    pub fn disc(&self) -> i64 {
        self.d
    }

    pub fn disc_abs(&self) -> u64 {
        self.d.unsigned_abs()
    }

    fn log_disc(&self, ctx: &PrecisionContext) -> BoundedReal {
        crate::mpreal::constant_log(&Rational::from(self.disc_abs()), ctx).expect("|d| ≥ 1")
    }
}

impl fmt::Display for FieldSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.n, self.r1, self.r2, self.d)
    }
}

/// `log 8π + γ`.
pub fn log8pi_plus_gamma(ctx: &PrecisionContext) -> BoundedReal {
    log_8pi(ctx).add_ref(&constant_gamma(ctx))
}

fn half_pi(ctx: &PrecisionContext) -> BoundedReal {
    constant_pi(ctx).mul_pow2(-1)
}

/// `A_K(s)` for rational `0 < s ≤ 4`, `s ≠ 1`.
pub fn a_factor(sig: &FieldSignature, s: &Rational, ctx: &PrecisionContext) -> Result<BoundedReal> {
    if *s <= 0 {
        return domain("A_K(s) is evaluated through Γ(s) and needs s > 0");
    }
    hurwitz::check_s(s)?;
    let bits = ctx.bits();
    let sb = BoundedReal::from_rational(s, bits);
    let s_minus_half = BoundedReal::from_rational(&(s - Rational::from((1, 2))), bits);

    let disc_part = if sig.disc_abs() == 1 {
        BoundedReal::from_int(1, bits)
    } else {
        s_minus_half.mul_ref(&sig.log_disc(ctx)).exp()
    };
    let angle = constant_pi(ctx).mul_ref(&sb).mul_pow2(-1);
    let cos_part = angle.cos().powi(sig.r1 + sig.r2);
    let sin_part = angle.sin().powi(sig.r2);
    let two_pi = constant_pi(ctx).mul_pow2(1);
    let gamma_part = (-&sb)
        .mul_ref(&two_pi.ln()?)
        .exp()
        .mul_pow2(1)
        .mul_ref(&gamma(s, ctx)?)
        .powi(sig.n);
    let value = disc_part
        .mul_ref(&cos_part)
        .mul_ref(&sin_part)
        .mul_ref(&gamma_part);
    ctx.finish("a_factor", value)
}

/// `A_K'(1/2) = log|d_K| - r1 π/2 - n (log 8π + γ)`.
pub fn a_prime_half(sig: &FieldSignature, ctx: &PrecisionContext) -> BoundedReal {
    let r1_term = half_pi(ctx).mul_int(sig.r1 as i64);
    let n_term = log8pi_plus_gamma(ctx).mul_int(sig.n as i64);
    sig.log_disc(ctx).sub_ref(&r1_term).sub_ref(&n_term)
}

/// `A_K'(1/2) / n = log|d_K|^(1/n) - r1 π/(2n) - log 8π - γ`, the
/// per-degree quantity compared across Galois fields.
pub fn normalized_a_prime_half(sig: &FieldSignature, ctx: &PrecisionContext) -> BoundedReal {
    a_prime_half(sig, ctx)
        .div_int(sig.n as i64)
        .expect("degree is positive")
}

/// The unique real `x = exp(r1 π/2 + n (log 8π + γ))` at which `A_K'(1/2)`
/// would vanish, with the consecutive integers around it.
#[derive(Debug, Clone)]
pub struct ExceptionalInterval {
    pub lower: Integer,
    pub upper: Integer,
    pub certified_strictly_between: bool,
    pub x: BoundedReal,
    /// Digits actually used after any precision retries.
    pub digits: u32,
}

impl ExceptionalInterval {
    /// `min(x - lower, upper - x)` as a ball.
    pub fn margin(&self) -> BoundedReal {
        let bits = self.x.prec();
        let lo = BoundedReal::from_int(self.lower.clone(), bits + 64);
        let hi = BoundedReal::from_int(self.upper.clone(), bits + 64);
        let below = self.x.sub_ref(&lo);
        let above = hi.sub_ref(&self.x);
        if below.value() < above.value() {
            below
        } else {
            above
        }
    }
}

const MAX_RETRIES: u32 = 4;

/// Brackets `exp(r1 π/2 + n (log 8π + γ))` between consecutive integers.
///
/// When the ball straddles an integer the digits are doubled, up to four
/// times, before reporting precision exhaustion.
pub fn exceptional_interval(
    n: u32,
    r1: u32,
    ctx: &PrecisionContext,
) -> Result<ExceptionalInterval> {
    if n == 0 || r1 > n || !(n - r1).is_multiple_of(2) {
        return domain(format!("r1 = {r1} is not admissible for degree {n}"));
    }
    let mut work = *ctx;
    for _ in 0..=MAX_RETRIES {
        let exponent = half_pi(&work)
            .mul_int(r1 as i64)
            .add_ref(&log8pi_plus_gamma(&work).mul_int(n as i64));
        let x = exponent.exp();
        let lower = x
            .value()
            .to_integer_round(rug::float::Round::Down)
            .expect("finite")
            .0;
        let upper = Integer::from(&lower + 1u32);
        let lo_f = Float::with_val(x.prec() + 64, &lower);
        let hi_f = Float::with_val(x.prec() + 64, &upper);
        if x.lower() > lo_f && x.upper() < hi_f {
            return Ok(ExceptionalInterval {
                lower,
                upper,
                certified_strictly_between: true,
                x,
                digits: work.digits(),
            });
        }
        if work.digits() >= PrecisionContext::MAX_DIGITS {
            break;
        }
        work = work.raised(work.digits());
    }
    Err(Error::PrecisionExhausted {
        op: "exceptional_interval",
        digits: work.digits(),
        err: "ball still straddles an integer".into(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateStatus {
    CertifiedNonzero,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateRule {
    /// Degree ≤ 3: the vanishing discriminant is never an integer.
    DegreeLe3,
    /// `|d|` below `exp(n (log 8π + γ))` or above `exp(n (π/2 + log 8π + γ))`.
    ThresholdThm4,
    /// Sign of `A_K'(1/2)` read off its ball.
    DirectEvaluation,
    /// Abelian field of degree large enough for `log|d| ≥ n log n / 2` to force positivity.
    AbelianBound,
}

impl fmt::Display for CertificateRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::DegreeLe3 => "degree_le_3",
            Self::ThresholdThm4 => "threshold_thm4",
            Self::DirectEvaluation => "direct_evaluation",
            Self::AbelianBound => "abelian_bound",
        })
    }
}

/// Outcome of checking `A_K'(1/2) ≠ 0`.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub status: CertificateStatus,
    pub sign: Option<i8>,
    /// `|A_K'(1/2)|` (or the abelian lower bound for that rule).
    pub margin: BoundedReal,
    pub rule: CertificateRule,
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        self.status == CertificateStatus::CertifiedNonzero
    }

    fn from_margin(value: &BoundedReal, margin: BoundedReal, rule: CertificateRule) -> Self {
        match value.certified_sign() {
            Some(sign) if margin.is_certified_nonzero() => Self {
                status: CertificateStatus::CertifiedNonzero,
                sign: Some(sign),
                margin,
                rule,
            },
            _ => Self {
                status: CertificateStatus::Undetermined,
                sign: None,
                margin,
                rule: CertificateRule::DirectEvaluation,
            },
        }
    }
}

/// Certifies the sign of `A_K'(1/2)`, i.e. that `ζ_K(1/2) = 0 ⟺ ζ_K'(1/2) = 0`.
///
/// Thresholds are the exact `exp(n (log 8π + γ))` and
/// `exp(n (π/2 + log 8π + γ))`, compared on the log scale with directed
/// ball bounds.
pub fn certify(sig: &FieldSignature, ctx: &PrecisionContext) -> Certificate {
    let a = a_prime_half(sig, ctx);
    let margin = a.abs();

    if sig.n <= 3 {
        if let Ok(interval) = exceptional_interval(sig.n, sig.r1, ctx) {
            // |d| is an integer and x lies strictly between two integers.
            let below = sig.disc_abs() <= interval.lower;
            if a.is_certified_nonzero() {
                return Certificate::from_margin(&a, margin, CertificateRule::DegreeLe3);
            }
            // Same sign, with the margin recomputed at the digits the bracket needed.
            let fine = PrecisionContext::with_guard(interval.digits, ctx.guard()).unwrap_or(*ctx);
            let a_fine = a_prime_half(sig, &fine);
            if a_fine.certified_sign() == Some(if below { -1 } else { 1 }) {
                return Certificate::from_margin(&a_fine, a_fine.abs(), CertificateRule::DegreeLe3);
            }
        }
    }

    if sig.n > 3 {
        let log_d = sig.log_disc(ctx);
        let low = log8pi_plus_gamma(ctx).mul_int(sig.n as i64);
        let high = half_pi(ctx)
            .add_ref(&log8pi_plus_gamma(ctx))
            .mul_int(sig.n as i64);
        if log_d.upper() < low.lower() || log_d.lower() > high.upper() {
            return Certificate::from_margin(&a, margin, CertificateRule::ThresholdThm4);
        }
    }

    Certificate::from_margin(&a, margin, CertificateRule::DirectEvaluation)
}

/// `n (log(n)/2 - π/2 - log 8π - γ)`, a lower bound for `A_K'(1/2)` over
/// abelian fields of degree `n` (from `log|d_K| ≥ n log n / 2`).
pub fn abelian_lower_bound_check(n: u32, ctx: &PrecisionContext) -> Result<BoundedReal> {
    if n == 0 {
        return domain("degree must be positive");
    }
    let half_log_n = crate::mpreal::constant_log(&Rational::from(n), ctx)?.mul_pow2(-1);
    let per_degree = half_log_n
        .sub_ref(&half_pi(ctx))
        .sub_ref(&log8pi_plus_gamma(ctx));
    Ok(per_degree.mul_int(n as i64))
}

/// Certificate for a field known to be abelian.
///
/// Rejects signatures that violate `log|d| ≥ n log n / 2`; otherwise uses the
/// degree bound when it is certified positive and falls back to [`certify`].
pub fn certify_abelian(sig: &FieldSignature, ctx: &PrecisionContext) -> Result<Certificate> {
    let n = sig.n;
    let log_d = sig.log_disc(ctx);
    let murty = crate::mpreal::constant_log(&Rational::from(n), ctx)?
        .mul_int(n as i64)
        .mul_pow2(-1);
    if log_d.upper() < murty.lower() {
        return domain(format!(
            "|d| = {} is below the abelian discriminant bound for degree {n}",
            sig.disc_abs()
        ));
    }
    let bound = abelian_lower_bound_check(n, ctx)?;
    if bound.certified_sign() == Some(1) {
        return Ok(Certificate {
            status: CertificateStatus::CertifiedNonzero,
            sign: Some(1),
            margin: bound,
            rule: CertificateRule::AbelianBound,
        });
    }
    Ok(certify(sig, ctx))
}

fn r1_of_quadratic(d: i64) -> i64 {
    if d > 0 {
        2
    } else {
        0
    }
}

/// `log(|d_K|/|d_L|) + π/2 (r1(L) - r1(K))` for `K = Q(sqrt d1)`,
/// `L = Q(sqrt d2)`; equals `-2 (ζ_K'/ζ_K - ζ_L'/ζ_L)(1/2)`.
pub fn theorem1_gap(d1: i64, d2: i64, ctx: &PrecisionContext) -> Result<BoundedReal> {
    if d1 == d2 {
        return domain("theorem 1 compares distinct quadratic fields");
    }
    let k = FieldSignature::quadratic(d1)?;
    let l = FieldSignature::quadratic(d2)?;
    let ratio = Rational::from((k.disc_abs(), l.disc_abs()));
    let log_ratio = crate::mpreal::constant_log(&ratio, ctx)?;
    let r1_gap = r1_of_quadratic(d2) - r1_of_quadratic(d1);
    Ok(log_ratio.add_ref(&half_pi(ctx).mul_int(r1_gap)))
}

/// `log(|d_K|^m / |d_L|^n) + π/2 (n r1(L) - m r1(K))` with `n = deg K`,
/// `m = deg L`; equals `-2 (m ζ_K'/ζ_K - n ζ_L'/ζ_L)(1/2)`.
pub fn theorem6_gap(k: &FieldSignature, l: &FieldSignature, ctx: &PrecisionContext) -> BoundedReal {
    let (n, m) = (k.n as i64, l.n as i64);
    let logs = k
        .log_disc(ctx)
        .mul_int(m)
        .sub_ref(&l.log_disc(ctx).mul_int(n));
    let r1_gap = n * l.r1 as i64 - m * k.r1 as i64;
    logs.add_ref(&half_pi(ctx).mul_int(r1_gap))
}

/// Condition (1) of the transcendence criterion: `|d_K|^m ≠ |d_L|^n`,
/// decided exactly from factorizations.
pub fn discriminant_powers_differ(k: &FieldSignature, l: &FieldSignature) -> Result<bool> {
    Ok(!arith::abs_powers_equal(k.d, l.n, l.d, k.n)?)
}

/// `ζ_K'/ζ_K(1/2) - (n/2)(log 8π + γ) = r1 π/4 - log|d_K| / 2`.
pub fn corollary7_constant(sig: &FieldSignature, ctx: &PrecisionContext) -> BoundedReal {
    let quarter_pi = constant_pi(ctx).mul_pow2(-2).mul_int(sig.r1 as i64);
    quarter_pi.sub_ref(&sig.log_disc(ctx).mul_pow2(-1))
}

/// Degree a Galois field with `ζ_K(1/2) ≠ 0 = ζ_K'(1/2)` would need:
/// `log|d| / (π/2 + log 8π + γ)` if totally real, `log|d| / (log 8π + γ)` if
/// totally complex.
pub fn remark_degree(
    disc_abs: u64,
    totally_real: bool,
    ctx: &PrecisionContext,
) -> Result<BoundedReal> {
    if disc_abs <= 1 {
        return domain("remark_degree needs |d| > 1");
    }
    let log_d = crate::mpreal::constant_log(&Rational::from(disc_abs), ctx)?;
    let mut denom = log8pi_plus_gamma(ctx);
    if totally_real {
        denom = denom.add_ref(&half_pi(ctx));
    }
    log_d.div_ref(&denom)
}
