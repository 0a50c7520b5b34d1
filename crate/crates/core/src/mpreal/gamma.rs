use rug::{Float, Rational};

use super::{bernoulli, constant_gamma, constant_ln2, constant_pi, BoundedReal, PrecisionContext};
use crate::error::{domain, Error, Result};

const GAMMA_MAX_ARG: i32 = 40;

/// `Γ(s)` for rational `0 < s ≤ 40`.
///
/// The argument is shifted up to `z = s + k ≥ 0.7·digits`, `log Γ(z)` comes
/// from the Stirling series, and the shift is undone by dividing by the exact
/// rational `s (s+1) … (s+k-1)`. The series is cut at the first term whose
/// doubled magnitude is below the working precision; that doubled term is the
/// truncation radius.
pub fn gamma(s: &Rational, ctx: &PrecisionContext) -> Result<BoundedReal> {
    if *s <= 0 {
        return domain("gamma is only evaluated for positive arguments");
    }
    if *s > GAMMA_MAX_ARG {
        return domain(format!("gamma argument must be at most {GAMMA_MAX_ARG}"));
    }
    let bits = ctx.bits() + 16;
    let z_min = (0.7 * ctx.digits() as f64)
        .max(0.4 * (ctx.digits() + ctx.guard()) as f64)
        .max(10.0)
        .ceil() as u32;

    let mut z = s.clone();
    let mut shift_product = Rational::from(1);
    while z < z_min {
        shift_product *= &z;
        z += 1u32;
    }

    let zb = BoundedReal::from_rational(&z, bits);
    let ln_z = zb.ln()?;
    let half = BoundedReal::from_rational(&Rational::from((1, 2)), bits);
    let pi = constant_pi(ctx).round_to(bits);
    let ln_2pi = constant_ln2(ctx).add_ref(&pi.ln()?);

    let mut log_gamma = zb
        .sub_ref(&half)
        .mul_ref(&ln_z)
        .sub_ref(&zb)
        .add_ref(&ln_2pi.mul_pow2(-1));

    let inv = zb.recip()?;
    let inv2 = inv.mul_ref(&inv);
    let mut w = inv;
    let target = Float::with_val(super::ERR_PREC, Float::i_exp(1, -(bits as i32)));
    let mut truncated = false;
    for j in 1..=(super::MAX_BERNOULLI_INDEX / 2) {
        let b = bernoulli(2 * j)?;
        let coef = b / (2 * j * (2 * j - 1));
        let term = BoundedReal::from_rational(&coef, bits).mul_ref(&w);
        let bound = term.abs_upper() * 2u32;
        if bound <= target {
            log_gamma = log_gamma.widen(&bound);
            truncated = true;
            break;
        }
        log_gamma = log_gamma.add_ref(&term);
        w = w.mul_ref(&inv2);
    }
    if !truncated {
        return Err(Error::PrecisionExhausted {
            op: "gamma",
            digits: ctx.digits(),
            err: "stirling series did not converge".into(),
        });
    }

    let value = log_gamma
        .exp()
        .div_ref(&BoundedReal::from_rational(&shift_product, bits))?;
    ctx.finish("gamma", value.round_to(ctx.bits()))
}

/// `ψ(1/2) = -γ - 2 log 2`.
pub fn digamma_half(ctx: &PrecisionContext) -> BoundedReal {
    let g = constant_gamma(ctx);
    let ln2 = constant_ln2(ctx);
    -(g.add_ref(&ln2.mul_pow2(1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(50).unwrap()
    }

    #[test]
    fn gamma_of_one_and_integers() {
        let g = gamma(&Rational::from(1), &ctx()).unwrap();
        assert!(g.contains(&Float::with_val(300, 1)), "{g:?}");
        let g = gamma(&Rational::from(6), &ctx()).unwrap();
        assert!(g.contains(&Float::with_val(300, 120)), "{g:?}");
        let g = gamma(&Rational::from(40), &ctx()).unwrap();
        let fact39 = rug::Integer::from(rug::Integer::factorial(39));
        assert!(g.contains(&Float::with_val(400, &fact39)), "{g:?}");
    }

    #[test]
    fn gamma_half_is_sqrt_pi() {
        let c = ctx();
        let g = gamma(&Rational::from((1, 2)), &c).unwrap();
        let root_pi = constant_pi(&c).sqrt().unwrap();
        assert!(
            g.agrees_with(&root_pi, &Float::new(64)),
            "{g:?} vs {root_pi:?}"
        );
        let g52 = gamma(&Rational::from((5, 2)), &c).unwrap();
        let expected = root_pi.mul_int(3).div_int(4).unwrap();
        assert!(g52.agrees_with(&expected, &Float::new(64)));
        assert!(*g.err() < 1e-48);
    }

    #[test]
    fn gamma_domain() {
        assert!(gamma(&Rational::from(0), &ctx()).is_err());
        assert!(gamma(&Rational::from(-1), &ctx()).is_err());
        assert!(gamma(&Rational::from(41), &ctx()).is_err());
    }

    #[test]
    fn digamma_half_identity() {
        let c = ctx();
        let psi = digamma_half(&c);
        let sum = psi
            .add_ref(&constant_gamma(&c))
            .add_ref(&constant_ln2(&c).mul_int(2));
        assert!(sum.abs_upper() < 1e-45);
        assert!((psi.to_f64() + 1.9635100260214235).abs() < 1e-14);
        let coarse = digamma_half(&PrecisionContext::new(30).unwrap());
        let fine = digamma_half(&PrecisionContext::new(60).unwrap());
        assert!(fine.err() < coarse.err());
    }
}
