use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::Round;
use rug::ops::{AddAssignRound, MulAssignRound, SubAssignRound};
use rug::{Float, Integer, Rational};

use crate::error::{domain, Result};

/// Precision (bits) of every error radius. Radii only need a few
/// significant bits, but they are always rounded upward.
pub const ERR_PREC: u32 = 64;

/// A midpoint with a rigorous radius: the true value lies in
/// `[value - err, value + err]`.
///
/// Each operation widens the radius by its first-order propagation of the
/// input radii (with the derivative bounded over the whole ball where that is
/// cheap) plus half an ulp when the midpoint was rounded.
#[derive(Clone, PartialEq)]
pub struct BoundedReal {
    value: Float,
    err: Float,
}

pub(crate) fn err_zero() -> Float {
    Float::new(ERR_PREC)
}

/// `|x|` rounded up to `ERR_PREC` bits.
pub(crate) fn abs_up(x: &Float) -> Float {
    Float::with_val_round(ERR_PREC, x.abs_ref(), Round::Up).0
}

/// `|x|` rounded down to `ERR_PREC` bits.
pub(crate) fn abs_down(x: &Float) -> Float {
    Float::with_val_round(ERR_PREC, x.abs_ref(), Round::Down).0
}

/// Upper bound for the rounding error of a midpoint produced with the given
/// ternary value (`Equal` means the operation was exact).
pub(crate) fn rounding_err(v: &Float, ternary: Ordering) -> Float {
    if ternary == Ordering::Equal {
        return err_zero();
    }
    let exp = match v.get_exp() {
        Some(e) => e,
        // Rounded to zero: only possible on underflow, which our ranges never
        // reach; fall back to the smallest positive float.
        None => return Float::with_val(ERR_PREC, Float::i_exp(1, rug::float::exp_min())),
    };
    let half_ulp = exp - v.prec() as i32 - 1;
    Float::with_val(ERR_PREC, Float::i_exp(1, half_ulp))
}

fn sum_up<'a>(terms: impl IntoIterator<Item = &'a Float>) -> Float {
    let mut acc = err_zero();
    for t in terms {
        acc.add_assign_round(t, Round::Up);
    }
    acc
}

fn mul_up(a: &Float, b: &Float) -> Float {
    Float::with_val_round(ERR_PREC, a * b, Round::Up).0
}

fn div_up(a: &Float, b: &Float) -> Float {
    Float::with_val_round(ERR_PREC, a / b, Round::Up).0
}

impl BoundedReal {
    /// An exactly known value.
    pub fn exact(value: Float) -> Self {
        Self {
            value,
            err: err_zero(),
        }
    }

    /// Builds a ball from parts. `err` is rounded up to `ERR_PREC` and must be
    /// nonnegative and finite.
    pub fn with_err(value: Float, err: &Float) -> Self {
        assert!(
            err.is_finite() && (err.is_zero() || err.is_sign_positive()),
            "radius must be a finite nonnegative number"
        );
        let err = Float::with_val_round(ERR_PREC, err, Round::Up).0;
        Self { value, err }
    }

    pub fn from_int(n: impl Into<Integer>, prec: u32) -> Self {
        let n: Integer = n.into();
        let (value, t) = Float::with_val_round(prec, &n, Round::Nearest);
        let err = rounding_err(&value, t);
        Self { value, err }
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        let (value, t) = Float::with_val_round(prec, q, Round::Nearest);
        let err = rounding_err(&value, t);
        Self { value, err }
    }

    /// Midpoint `value` paired with the rounding error of the step that
    /// produced it.
    pub(crate) fn rounded(value: Float, ternary: Ordering) -> Self {
        let err = rounding_err(&value, ternary);
        Self { value, err }
    }

    pub fn value(&self) -> &Float {
        &self.value
    }

    pub fn err(&self) -> &Float {
        &self.err
    }

    pub fn prec(&self) -> u32 {
        self.value.prec()
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    /// Adds `extra` to the radius.
    pub fn widen(mut self, extra: &Float) -> Self {
        self.err.add_assign_round(extra, Round::Up);
        self
    }

    /// Lower end of the ball, rounded down.
    pub fn lower(&self) -> Float {
        let mut lo = Float::with_val_round(self.prec() + 2, &self.value, Round::Down).0;
        lo.sub_assign_round(&self.err, Round::Down);
        lo
    }

    /// Upper end of the ball, rounded up.
    pub fn upper(&self) -> Float {
        let mut hi = Float::with_val_round(self.prec() + 2, &self.value, Round::Up).0;
        hi.add_assign_round(&self.err, Round::Up);
        hi
    }

    /// Lower bound of `|x|` over the ball (zero when the ball touches zero).
    pub fn abs_lower(&self) -> Float {
        let mut lo = abs_down(&self.value);
        lo.sub_assign_round(&self.err, Round::Down);
        if lo.is_sign_negative() {
            err_zero()
        } else {
            lo
        }
    }

    /// Upper bound of `|x|` over the ball.
    pub fn abs_upper(&self) -> Float {
        let mut hi = abs_up(&self.value);
        hi.add_assign_round(&self.err, Round::Up);
        hi
    }

    /// Strictly bounded away from zero: `|value| > err`.
    pub fn is_certified_nonzero(&self) -> bool {
        abs_down(&self.value) > self.err
    }

    /// The sign of every point in the ball, if they all agree and are nonzero.
    pub fn certified_sign(&self) -> Option<i8> {
        if !self.is_certified_nonzero() {
            None
        } else if self.value.is_sign_negative() {
            Some(-1)
        } else {
            Some(1)
        }
    }

    pub fn contains(&self, x: &Float) -> bool {
        &self.lower() <= x && x <= &self.upper()
    }

    pub fn overlaps(&self, other: &BoundedReal) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    /// `|self - other|` is at most `slack` plus both radii.
    pub fn agrees_with(&self, other: &BoundedReal, slack: &Float) -> bool {
        let diff = Float::with_val_round(ERR_PREC, &self.value - &other.value, Round::Up).0;
        let bound = sum_up([&self.err, &other.err, slack]);
        abs_down(&diff) <= bound
    }

    pub fn abs(&self) -> Self {
        Self {
            value: self.value.clone().abs(),
            err: self.err.clone(),
        }
    }

    pub fn add_ref(&self, rhs: &Self) -> Self {
        let prec = self.prec().max(rhs.prec());
        let (value, t) = Float::with_val_round(prec, &self.value + &rhs.value, Round::Nearest);
        let err = sum_up([&self.err, &rhs.err, &rounding_err(&value, t)]);
        Self { value, err }
    }

    pub fn sub_ref(&self, rhs: &Self) -> Self {
        let prec = self.prec().max(rhs.prec());
        let (value, t) = Float::with_val_round(prec, &self.value - &rhs.value, Round::Nearest);
        let err = sum_up([&self.err, &rhs.err, &rounding_err(&value, t)]);
        Self { value, err }
    }

    pub fn mul_ref(&self, rhs: &Self) -> Self {
        let prec = self.prec().max(rhs.prec());
        let (value, t) = Float::with_val_round(prec, &self.value * &rhs.value, Round::Nearest);
        let prop = sum_up([
            &mul_up(&abs_up(&self.value), &rhs.err),
            &mul_up(&abs_up(&rhs.value), &self.err),
            &mul_up(&self.err, &rhs.err),
        ]);
        let err = sum_up([&prop, &rounding_err(&value, t)]);
        Self { value, err }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        let (value, t) = Float::with_val_round(self.prec(), &self.value * k, Round::Nearest);
        let scale = Float::with_val_round(ERR_PREC, k.unsigned_abs(), Round::Up).0;
        let err = sum_up([&mul_up(&self.err, &scale), &rounding_err(&value, t)]);
        Self { value, err }
    }

    /// Multiplication by `2^k`, exact.
    pub fn mul_pow2(&self, k: i32) -> Self {
        Self {
            value: self.value.clone() << k,
            err: self.err.clone() << k,
        }
    }

    pub fn div_ref(&self, rhs: &Self) -> Result<Self> {
        let b_lo = rhs.abs_lower();
        if b_lo.is_zero() {
            return domain("division by a ball that contains zero");
        }
        let prec = self.prec().max(rhs.prec());
        let (value, t) = Float::with_val_round(prec, &self.value / &rhs.value, Round::Nearest);
        let num = sum_up([
            &mul_up(&abs_up(&self.value), &rhs.err),
            &mul_up(&abs_up(&rhs.value), &self.err),
        ]);
        let den = Float::with_val_round(ERR_PREC, abs_down(&rhs.value) * &b_lo, Round::Down).0;
        let err = sum_up([&div_up(&num, &den), &rounding_err(&value, t)]);
        Ok(Self { value, err })
    }

    pub fn recip(&self) -> Result<Self> {
        Self::exact(Float::with_val(self.prec(), 1)).div_ref(self)
    }

    pub fn div_int(&self, k: i64) -> Result<Self> {
        if k == 0 {
            return domain("division by zero");
        }
        let (value, t) = Float::with_val_round(self.prec(), &self.value / k, Round::Nearest);
        let scale = Float::with_val_round(ERR_PREC, k.unsigned_abs(), Round::Down).0;
        let err = sum_up([&div_up(&self.err, &scale), &rounding_err(&value, t)]);
        Ok(Self { value, err })
    }

    /// Integer power by repeated squaring; `k = 0` gives exactly 1.
    pub fn powi(&self, k: u32) -> Self {
        let mut acc = Self::exact(Float::with_val(self.prec(), 1));
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.value.is_sign_negative() && !self.value.is_zero() {
            return domain("square root of a negative number");
        }
        let (value, t) = Float::with_val_round(self.prec(), self.value.sqrt_ref(), Round::Nearest);
        if self.err.is_zero() {
            return Ok(Self::rounded(value, t));
        }
        let lo = self.abs_lower();
        if lo.is_zero() || self.value < self.err {
            return domain("square root of a ball touching zero");
        }
        // |sqrt x - sqrt X| <= err / sqrt(lower)
        let root_lo = Float::with_val_round(ERR_PREC, lo.sqrt_ref(), Round::Down).0;
        let err = sum_up([&div_up(&self.err, &root_lo), &rounding_err(&value, t)]);
        Ok(Self { value, err })
    }

    pub fn exp(&self) -> Self {
        let (value, t) = Float::with_val_round(self.prec(), self.value.exp_ref(), Round::Nearest);
        if self.err.is_zero() {
            return Self::rounded(value, t);
        }
        // |e^x - e^X| <= e^x (e^r - 1) <= e^x r e^r
        let er = Float::with_val_round(ERR_PREC, self.err.exp_ref(), Round::Up).0;
        let prop = mul_up(&mul_up(&abs_up(&value), &self.err), &er);
        // The midpoint itself carries a rounding error; cover e^x by 1 + 2^-prec.
        let prop = mul_up(&prop, &Float::with_val(ERR_PREC, 1.0001));
        let err = sum_up([&prop, &rounding_err(&value, t)]);
        Self { value, err }
    }

    pub fn ln(&self) -> Result<Self> {
        if self.value.is_nan() || self.value <= 0 {
            return domain("logarithm of a nonpositive number");
        }
        let (value, t) = Float::with_val_round(self.prec(), self.value.ln_ref(), Round::Nearest);
        if self.err.is_zero() {
            return Ok(Self::rounded(value, t));
        }
        let lo = self.abs_lower();
        if lo.is_zero() || self.value < self.err {
            return domain("logarithm of a ball touching zero");
        }
        let err = sum_up([&div_up(&self.err, &lo), &rounding_err(&value, t)]);
        Ok(Self { value, err })
    }

    pub fn sin(&self) -> Self {
        let (value, t) = Float::with_val_round(self.prec(), self.value.sin_ref(), Round::Nearest);
        let err = sum_up([&self.err, &rounding_err(&value, t)]);
        Self { value, err }
    }

    pub fn cos(&self) -> Self {
        let (value, t) = Float::with_val_round(self.prec(), self.value.cos_ref(), Round::Nearest);
        let err = sum_up([&self.err, &rounding_err(&value, t)]);
        Self { value, err }
    }

    /// Tangent; the ball must stay clear of the poles.
    pub fn tan(&self) -> Result<Self> {
        let c = self.cos();
        let c_lo = c.abs_lower();
        // |cos| can only shrink by `err` more over the ball.
        let mut floor = c_lo.clone();
        floor.sub_assign_round(&self.err, Round::Down);
        if floor.is_nan() || floor <= 0 {
            return domain("tangent evaluated too close to a pole");
        }
        let (value, t) = Float::with_val_round(self.prec(), self.value.tan_ref(), Round::Nearest);
        let sq = Float::with_val_round(ERR_PREC, &floor * &floor, Round::Down).0;
        let err = sum_up([&div_up(&self.err, &sq), &rounding_err(&value, t)]);
        Ok(Self { value, err })
    }

    /// `self^s` for a positive base, as `exp(s log self)`.
    pub fn pow(&self, s: &BoundedReal) -> Result<Self> {
        Ok(s.mul_ref(&self.ln()?).exp())
    }

    /// Reduces the midpoint to `prec` bits, moving the rounding into the radius.
    pub fn round_to(&self, prec: u32) -> Self {
        let (value, t) = Float::with_val_round(prec, &self.value, Round::Nearest);
        let err = sum_up([&self.err, &rounding_err(&value, t)]);
        Self { value, err }
    }
}

impl fmt::Debug for BoundedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ± {}",
            self.value.to_string_radix(10, Some(25)),
            self.err.to_string_radix(10, Some(3))
        )
    }
}

impl fmt::Display for BoundedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for &BoundedReal {
    type Output = BoundedReal;
    fn add(self, rhs: Self) -> BoundedReal {
        self.add_ref(rhs)
    }
}

impl Sub for &BoundedReal {
    type Output = BoundedReal;
    fn sub(self, rhs: Self) -> BoundedReal {
        self.sub_ref(rhs)
    }
}

impl Mul for &BoundedReal {
    type Output = BoundedReal;
    fn mul(self, rhs: Self) -> BoundedReal {
        self.mul_ref(rhs)
    }
}

impl Neg for &BoundedReal {
    type Output = BoundedReal;
    fn neg(self) -> BoundedReal {
        BoundedReal {
            value: Float::with_val(self.prec(), -&self.value),
            err: self.err.clone(),
        }
    }
}

impl Neg for BoundedReal {
    type Output = BoundedReal;
    fn neg(mut self) -> BoundedReal {
        self.value = -self.value;
        self
    }
}

/// Upper bound of `a * b` in radius precision.
pub(crate) fn err_mul(a: &Float, b: &Float) -> Float {
    let mut out = Float::with_val(ERR_PREC, a);
    out.mul_assign_round(b, Round::Up);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 200;

    fn r(n: i64, d: i64) -> BoundedReal {
        BoundedReal::from_rational(&Rational::from((n, d)), P)
    }

    #[test]
    fn exact_inputs_stay_exact() {
        let one = BoundedReal::from_int(1, P);
        assert!(one.err().is_zero());
        let zero = BoundedReal::from_int(0, P);
        let e = zero.exp();
        assert_eq!(*e.value(), 1);
        assert!(e.err().is_zero());
        let l = one.ln().unwrap();
        assert!(l.value().is_zero() && l.err().is_zero());
        let third = r(1, 3);
        assert!(!third.err().is_zero());
    }

    #[test]
    fn arithmetic_encloses_exact_rationals() {
        let a = r(1, 3);
        let b = r(-2, 7);
        let sum = &a + &b;
        let prod = &a * &b;
        let quot = a.div_ref(&b).unwrap();
        let exact = |q: Rational| Float::with_val(P + 64, q);
        assert!(sum.contains(&exact(Rational::from((1, 21)))));
        assert!(prod.contains(&exact(Rational::from((-2, 21)))));
        assert!(quot.contains(&exact(Rational::from((-7, 6)))));
    }

    #[test]
    fn division_by_ball_straddling_zero_fails() {
        let z = BoundedReal::with_err(Float::with_val(P, 1e-30), &Float::with_val(ERR_PREC, 1e-20));
        assert!(r(1, 1).div_ref(&z).is_err());
        assert!(z.ln().is_err());
    }

    #[test]
    fn wide_inputs_propagate() {
        let x = BoundedReal::with_err(Float::with_val(P, 2), &Float::with_val(ERR_PREC, 1e-10));
        let hi = Float::with_val(P, 2) + Float::with_val(P, 1e-10);
        let lo = Float::with_val(P, 2) - Float::with_val(P, 1e-10);
        for (f, a, b) in [
            (x.exp(), lo.clone().exp(), hi.clone().exp()),
            (x.ln().unwrap(), lo.clone().ln(), hi.clone().ln()),
            (x.sqrt().unwrap(), lo.clone().sqrt(), hi.clone().sqrt()),
        ] {
            assert!(f.contains(&a) && f.contains(&b), "{f:?}");
        }
        let s = x.sin();
        assert!(s.contains(&lo.clone().sin()) && s.contains(&hi.clone().sin()));
        let t = x.tan().unwrap();
        assert!(t.contains(&lo.tan()) && t.contains(&hi.tan()));
    }

    #[test]
    fn tan_rejects_pole() {
        let half_pi = Float::with_val(P, rug::float::Constant::Pi) / 2;
        let x = BoundedReal::with_err(half_pi, &Float::with_val(ERR_PREC, 1e-5));
        assert!(x.tan().is_err());
    }

    #[test]
    fn certified_sign_requires_clearance() {
        let x = BoundedReal::with_err(Float::with_val(P, -1), &Float::with_val(ERR_PREC, 0.5));
        assert_eq!(x.certified_sign(), Some(-1));
        let y = BoundedReal::with_err(Float::with_val(P, 1), &Float::with_val(ERR_PREC, 1));
        assert_eq!(y.certified_sign(), None);
    }

    #[test]
    fn powi_matches_repeated_multiplication() {
        let x = r(3, 2);
        let p = x.powi(5);
        assert!(p.contains(&Float::with_val(P + 64, Rational::from((243, 32)))));
        assert_eq!(*x.powi(0).value(), 1);
    }
}
