//! Multiprecision reals with rigorous radii.
//!
//! Midpoints are MPFR floats (correctly rounded), radii are 64-bit floats
//! rounded upward. Every public numeric result is a [`BoundedReal`].

mod ball;
mod bernoulli;
mod constants;
mod gamma;
mod render;

pub use ball::{BoundedReal, ERR_PREC};
pub use bernoulli::{bernoulli, MAX_BERNOULLI_INDEX};
pub use constants::{constant_gamma, constant_ln2, constant_log, constant_pi, log_8pi, power};
pub use gamma::{digamma_half, gamma};
pub use render::{parse_decimal, render_err, render_value};

pub(crate) use ball::{abs_up, err_mul};

use rug::float::Round;
use rug::Float;

use crate::error::{domain, Error, Result};

/// Requested decimal digits plus internal guard digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    digits: u32,
    guard: u32,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self {
            digits: Self::DEFAULT_DIGITS,
            guard: Self::MIN_GUARD,
        }
    }
}

impl PrecisionContext {
    pub const DEFAULT_DIGITS: u32 = 50;
    pub const MIN_DIGITS: u32 = 15;
    pub const MAX_DIGITS: u32 = 5000;
    pub const MIN_GUARD: u32 = 10;

    pub fn new(digits: u32) -> Result<Self> {
        Self::with_guard(digits, Self::MIN_GUARD)
    }

    pub fn with_guard(digits: u32, guard: u32) -> Result<Self> {
        if !(Self::MIN_DIGITS..=Self::MAX_DIGITS).contains(&digits) {
            return domain(format!(
                "digits must lie in [{}, {}], got {digits}",
                Self::MIN_DIGITS,
                Self::MAX_DIGITS
            ));
        }
        if guard < Self::MIN_GUARD {
            return domain(format!("guard digits must be at least {}", Self::MIN_GUARD));
        }
        Ok(Self { digits, guard })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn guard(&self) -> u32 {
        self.guard
    }

    /// Working precision in bits: digits plus guard, with a few spare bits.
    pub fn bits(&self) -> u32 {
        ((self.digits + self.guard) as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 8
    }

    /// Same context with `extra` more requested digits.
    pub fn raised(&self, extra: u32) -> Self {
        Self {
            digits: (self.digits + extra).min(Self::MAX_DIGITS),
            guard: self.guard,
        }
    }

    /// `10^(5 - digits)`, the largest radius an operation may report.
    pub fn tolerance(&self) -> Float {
        let big =
            Float::with_val_round(ERR_PREC, Float::u_pow_u(10, self.digits - 5), Round::Down).0;
        Float::with_val_round(ERR_PREC, big.recip_ref(), Round::Down).0
    }

    /// Checks the output contract: `err ≤ 10^(5 - digits) · max(1, |value|)`.
    pub fn finish(&self, op: &'static str, x: BoundedReal) -> Result<BoundedReal> {
        let mut allowed = self.tolerance();
        let mag = abs_up(x.value());
        if mag > 1 {
            allowed *= mag;
        }
        if x.err() <= &allowed {
            Ok(x)
        } else {
            Err(Error::PrecisionExhausted {
                op,
                digits: self.digits,
                err: render_err(x.err()),
            })
        }
    }
}
