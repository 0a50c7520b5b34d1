//! Riemann zeta and quadratic Dirichlet L-values at real points, and the
//! central values of quadratic fields through `ζ_K = ζ · L(·, χ_D)`.

use rug::Rational;

use crate::arith;
use crate::dedekind::{a_prime_half, FieldSignature};
use crate::error::{domain, Error, Result};
use crate::hurwitz::HurwitzEvaluator;
use crate::mpreal::{constant_log, BoundedReal, PrecisionContext};

/// Largest conductor accepted by [`QuadraticCharacter::new`].
pub const MAX_MODULUS: u64 = 1_000_000;

/// The Kronecker character `n ↦ (D|n)` of a fundamental discriminant `D`
/// (or the trivial character, `D = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadraticCharacter {
    disc: i64,
}

impl QuadraticCharacter {
    pub fn new(disc: i64) -> Result<Self> {
        if !arith::is_fundamental_discriminant(disc) {
            return domain(format!("{disc} is not a fundamental discriminant"));
        }
        if disc.unsigned_abs() > MAX_MODULUS {
            return domain(format!(
                "|D| = {} exceeds {MAX_MODULUS}",
                disc.unsigned_abs()
            ));
        }
        Ok(Self { disc })
    }

    pub fn trivial() -> Self {
        Self { disc: 1 }
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn modulus(&self) -> u64 {
        self.disc.unsigned_abs()
    }

    pub fn is_trivial(&self) -> bool {
        self.disc == 1
    }

    pub fn value(&self, n: i64) -> i8 {
        arith::kronecker(self.disc, n).expect("D ≠ 0")
    }

    /// `χ(1), …, χ(|D|)`.
    pub fn table(&self) -> Vec<i8> {
        (1..=self.modulus() as i64).map(|a| self.value(a)).collect()
    }
}

fn guard_for_modulus(q: u64) -> u32 {
    (q as f64).log10().ceil() as u32 + 2
}

/// `ζ(s)`.
pub fn riemann_zeta(s: &Rational, ctx: &PrecisionContext) -> Result<BoundedReal> {
    let eval = HurwitzEvaluator::new(s, ctx)?;
    ctx.finish("riemann_zeta", eval.zeta(&Rational::from(1))?)
}

/// `ζ'(s)`.
pub fn riemann_zeta_ds(s: &Rational, ctx: &PrecisionContext) -> Result<BoundedReal> {
    let eval = HurwitzEvaluator::new(s, ctx)?;
    ctx.finish("riemann_zeta_ds", eval.zeta_ds(&Rational::from(1))?)
}

/// `L(s, χ)` and optionally `∂_s L(s, χ)` through
/// `L(s, χ) = q^-s Σ_{a=1}^{q} χ(a) ζ(s, a/q)`.
///
/// The evaluator must carry enough guard digits for the cancellation in the
/// sum, roughly `log10 q` beyond the requested digits.
pub fn l_with_evaluator(
    chi: &QuadraticCharacter,
    eval: &HurwitzEvaluator,
    s: &Rational,
    with_ds: bool,
) -> Result<(BoundedReal, Option<BoundedReal>)> {
    let q = chi.modulus();
    let ctx = eval.context();
    if chi.is_trivial() {
        let (v, d) = eval.raw(&Rational::from(1), with_ds);
        return Ok((v, d));
    }
    let bits = eval.bits();
    let mut sum = BoundedReal::from_int(0, bits);
    let mut dsum = BoundedReal::from_int(0, bits);
    for (i, &c) in chi.table().iter().enumerate() {
        if c == 0 {
            continue;
        }
        let a = Rational::from((i as u64 + 1, q));
        let (v, d) = eval.raw(&a, with_ds);
        if c > 0 {
            sum = sum.add_ref(&v);
        } else {
            sum = sum.sub_ref(&v);
        }
        if let Some(d) = d {
            if c > 0 {
                dsum = dsum.add_ref(&d);
            } else {
                dsum = dsum.sub_ref(&d);
            }
        }
    }
    let log_q = constant_log(&Rational::from(q), ctx)?;
    let sb = BoundedReal::from_rational(s, bits);
    let scale = (-&sb).mul_ref(&log_q).exp();
    let value = scale.mul_ref(&sum);
    let deriv = with_ds.then(|| scale.mul_ref(&dsum).sub_ref(&log_q.mul_ref(&value)));
    Ok((value, deriv))
}

fn l_pair(
    disc: i64,
    s: &Rational,
    ctx: &PrecisionContext,
    with_ds: bool,
) -> Result<(BoundedReal, Option<BoundedReal>)> {
    let chi = QuadraticCharacter::new(disc)?;
    let work = ctx.raised(guard_for_modulus(chi.modulus()));
    let eval = HurwitzEvaluator::new(s, &work)?;
    l_with_evaluator(&chi, &eval, s, with_ds)
}

/// `L(s, χ_D)`; `D = 1` gives `ζ(s)`.
pub fn l_value(disc: i64, s: &Rational, ctx: &PrecisionContext) -> Result<BoundedReal> {
    let (v, _) = l_pair(disc, s, ctx, false)?;
    ctx.finish("l_value", v)
}

/// `∂_s L(s, χ_D)`.
pub fn l_value_ds(disc: i64, s: &Rational, ctx: &PrecisionContext) -> Result<BoundedReal> {
    let (_, d) = l_pair(disc, s, ctx, true)?;
    ctx.finish("l_value_ds", d.expect("derivative requested"))
}

/// `(L(s, χ_D), ∂_s L(s, χ_D))` from one pass over the residues.
pub fn l_value_and_ds(
    disc: i64,
    s: &Rational,
    ctx: &PrecisionContext,
) -> Result<(BoundedReal, BoundedReal)> {
    let (v, d) = l_pair(disc, s, ctx, true)?;
    Ok((
        ctx.finish("l_value", v)?,
        ctx.finish("l_value_ds", d.expect("derivative requested"))?,
    ))
}

/// `ζ_K(s) = ζ(s) L(s, χ_D)` for `K = Q(sqrt d)`.
pub fn quad_zeta(d: i64, s: &Rational, ctx: &PrecisionContext) -> Result<BoundedReal> {
    let disc = arith::fundamental_discriminant(d)?;
    let z = riemann_zeta(s, ctx)?;
    let l = l_value(disc, s, ctx)?;
    Ok(z.mul_ref(&l))
}

/// Central data of a quadratic field.
#[derive(Debug, Clone)]
pub struct CentralValues {
    pub signature: FieldSignature,
    pub zeta_half: BoundedReal,
    pub zeta_half_ds: BoundedReal,
    pub l_half: BoundedReal,
    pub l_half_ds: BoundedReal,
    /// `ζ_K(1/2)`.
    pub zeta_k: BoundedReal,
    /// `ζ_K'(1/2)` by the product rule.
    pub zeta_k_prime: BoundedReal,
    /// `ζ_K'(1/2)` as `-A_K'(1/2) ζ_K(1/2) / 2`.
    pub zeta_k_prime_eq2: BoundedReal,
    /// `A_K'(1/2)`.
    pub a_prime: BoundedReal,
    /// `ζ_K'/ζ_K(1/2)`, present only when `ζ_K(1/2)` is certified nonzero.
    pub log_ratio: Option<BoundedReal>,
}

/// Central values of `Q(sqrt d)` for squarefree `d ∉ {0, 1}`, with the
/// derivative computed by the product rule and cross-checked against the
/// closed form of `A_K'(1/2)`.
pub fn quad_central(d: i64, ctx: &PrecisionContext) -> Result<CentralValues> {
    let signature = FieldSignature::quadratic(d)?;
    let half = Rational::from((1, 2));
    let zeta_eval = HurwitzEvaluator::new(&half, ctx)?;
    let (zeta_half, zeta_half_ds) = zeta_eval.zeta_and_ds(&Rational::from(1))?;
    let (l_half, l_half_ds) = l_value_and_ds(signature.disc(), &half, ctx)?;

    let zeta_k = zeta_half.mul_ref(&l_half);
    let zeta_k_prime = zeta_half_ds
        .mul_ref(&l_half)
        .add_ref(&zeta_half.mul_ref(&l_half_ds));
    let a_prime = a_prime_half(&signature, ctx);
    let zeta_k_prime_eq2 = -a_prime.mul_ref(&zeta_k).mul_pow2(-1);

    if !zeta_k_prime.overlaps(&zeta_k_prime_eq2) {
        return Err(Error::RouteMismatch {
            what: format!("zeta_K'(1/2) for d = {d}"),
            a: zeta_k_prime.to_string(),
            b: zeta_k_prime_eq2.to_string(),
            bound: format!(
                "{:e}",
                zeta_k_prime.err().to_f64() + zeta_k_prime_eq2.err().to_f64()
            ),
        });
    }
    let log_ratio = if zeta_k.is_certified_nonzero() {
        Some(zeta_k_prime.div_ref(&zeta_k)?)
    } else {
        None
    };
    Ok(CentralValues {
        signature,
        zeta_half: ctx.finish("riemann_zeta", zeta_half)?,
        zeta_half_ds: ctx.finish("riemann_zeta_ds", zeta_half_ds)?,
        l_half,
        l_half_ds,
        zeta_k: ctx.finish("zeta_k", zeta_k)?,
        zeta_k_prime: ctx.finish("zeta_k_prime", zeta_k_prime)?,
        zeta_k_prime_eq2: ctx.finish("zeta_k_prime", zeta_k_prime_eq2)?,
        a_prime,
        log_ratio,
    })
}
