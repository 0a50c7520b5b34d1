use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use rug::float::{Constant, Round};
use rug::{Float, Rational};

use super::{BoundedReal, PrecisionContext};
use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Named {
    Pi,
    Euler,
    Ln2,
    Log8Pi,
}

type ConstCache = RwLock<HashMap<(Named, u32), BoundedReal>>;

fn cache() -> &'static ConstCache {
    static CACHE: OnceLock<ConstCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn cached(which: Named, bits: u32, compute: impl FnOnce() -> BoundedReal) -> BoundedReal {
    if let Some(v) = cache()
        .read()
        .expect("constant cache poisoned")
        .get(&(which, bits))
    {
        return v.clone();
    }
    let v = compute();
    cache()
        .write()
        .expect("constant cache poisoned")
        .entry((which, bits))
        .or_insert(v)
        .clone()
}

fn mpfr_constant(c: Constant, bits: u32) -> BoundedReal {
    let (v, t) = Float::with_val_round(bits, c, Round::Nearest);
    BoundedReal::rounded(v, t)
}

pub fn constant_pi(ctx: &PrecisionContext) -> BoundedReal {
    let bits = ctx.bits();
    cached(Named::Pi, bits, || mpfr_constant(Constant::Pi, bits))
}

/// Euler–Mascheroni constant.
pub fn constant_gamma(ctx: &PrecisionContext) -> BoundedReal {
    let bits = ctx.bits();
    cached(Named::Euler, bits, || mpfr_constant(Constant::Euler, bits))
}

pub fn constant_ln2(ctx: &PrecisionContext) -> BoundedReal {
    let bits = ctx.bits();
    cached(Named::Ln2, bits, || mpfr_constant(Constant::Log2, bits))
}

/// `log(8π)`.
pub fn log_8pi(ctx: &PrecisionContext) -> BoundedReal {
    let bits = ctx.bits();
    cached(Named::Log8Pi, bits, || {
        constant_pi(ctx).mul_pow2(3).ln().expect("8π is positive")
    })
}

/// Natural logarithm of a positive rational.
pub fn constant_log(x: &Rational, ctx: &PrecisionContext) -> Result<BoundedReal> {
    if *x <= 0 {
        return domain("logarithm of a nonpositive rational");
    }
    let bits = ctx.bits();
    let (v, t) = Float::with_val_round(bits, x, Round::Nearest);
    if t == std::cmp::Ordering::Equal {
        let (l, t) = Float::with_val_round(bits, v.ln_ref(), Round::Nearest);
        return Ok(BoundedReal::rounded(l, t));
    }
    BoundedReal::from_rational(x, bits).ln()
}

/// `x^s` for a ball `x` with positive lower end.
pub fn power(x: &BoundedReal, s: &BoundedReal) -> Result<BoundedReal> {
    if x.abs_lower().is_nan() || x.abs_lower() <= 0 || x.value().is_sign_negative() {
        return domain("power needs a positive base");
    }
    x.pow(s)
}
