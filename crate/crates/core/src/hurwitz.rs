//! Euler–Maclaurin evaluation of the Hurwitz zeta function and its
//! `s`-derivative at real rational points.
//!
//! With `X = N + a`,
//!
//! ```text
//! ζ(s, a) = Σ_{k<N} (k+a)^-s + X^(1-s)/(s-1) + X^-s/2
//!         + Σ_{j=1..M} B_2j/(2j)! · (s)_(2j-1) · X^(-s-2j+1) + R
//! ```
//!
//! and `|R|` is charged as twice the first omitted correction term. The
//! derivative is the term-wise `s`-derivative of the same expression.

use rug::float::Round;
use rug::ops::{AddAssignRound, Pow};
use rug::{Assign, Float, Rational};

use crate::error::{domain, Result};
use crate::mpreal::{bernoulli, err_mul, BoundedReal, PrecisionContext, ERR_PREC};

/// Smallest allowed distance from the pole at `s = 1`.
pub const POLE_GUARD: f64 = 1e-3;
const S_MIN: i32 = -1;
const S_MAX: i32 = 4;
const MAX_CORRECTIONS: u32 = 199;

/// Direct-sum cutoff `n` and number of Euler–Maclaurin corrections `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HurwitzParams {
    pub n: u32,
    pub m: u32,
}

impl HurwitzParams {
    pub fn new(n: u32, m: u32) -> Result<Self> {
        if n < 8 || !(4..=MAX_CORRECTIONS).contains(&m) {
            return domain(format!(
                "need N >= 8 and 4 <= M <= {MAX_CORRECTIONS}, got N = {n}, M = {m}"
            ));
        }
        Ok(Self { n, m })
    }
}

/// Checks `s ∈ [-1, 4]` with `|s - 1| ≥ 1e-3`.
pub fn check_s(s: &Rational) -> Result<()> {
    if *s < S_MIN || *s > S_MAX {
        return domain(format!("s = {s} lies outside [{S_MIN}, {S_MAX}]"));
    }
    let gap = Rational::from(s - 1u32).abs();
    if gap < Rational::from((1, 1000)) {
        return domain(format!("s = {s} is within {POLE_GUARD} of the pole at 1"));
    }
    Ok(())
}

fn check_a(a: &Rational) -> Result<()> {
    if *a <= 0 || *a > 2 {
        return domain(format!("shift a = {a} lies outside (0, 2]"));
    }
    Ok(())
}

/// Precomputed Euler–Maclaurin data for one `s`.
///
/// Creating the evaluator fixes `(N, M)` and the correction coefficients;
/// evaluating at many shifts `a` (as the L-function sums do) reuses them.
#[derive(Debug, Clone)]
pub struct HurwitzEvaluator {
    ctx: PrecisionContext,
    bits: u32,
    params: HurwitzParams,
    s: BoundedReal,
    s_abs: f64,
    s_is_half: bool,
    inv_s_minus_1: BoundedReal,
    /// `B_2j/(2j)! · (s)_(2j-1)` for `j = 1..=M`.
    coef: Vec<BoundedReal>,
    /// `B_2j/(2j)! · d/ds (s)_(2j-1)`.
    dcoef: Vec<BoundedReal>,
    coef_abs: Vec<Float>,
    dcoef_abs: Vec<Float>,
    /// Magnitudes of the same two quantities at `j = M + 1`.
    omit_coef: Float,
    omit_dcoef: Float,
}

/// Exact `(b_j (s)_(2j-1), b_j d/ds (s)_(2j-1))` for `j = 1..=jmax`, where
/// `b_j = B_2j / (2j)!`.
fn correction_coefficients(s: &Rational, jmax: u32) -> Result<Vec<(Rational, Rational)>> {
    let mut out = Vec::with_capacity(jmax as usize);
    // running rising factorial (s)_k and its derivative
    let mut rising = Rational::from(1);
    let mut drising = Rational::from(0);
    let mut k = 0u32;
    let mut factorial = rug::Integer::from(1);
    for j in 1..=jmax {
        while k < 2 * j - 1 {
            let factor = Rational::from(s + k);
            drising = drising * &factor + &rising;
            rising *= &factor;
            k += 1;
        }
        factorial *= (2 * j - 1) * (2 * j);
        let b = bernoulli(2 * j)? / Rational::from(factorial.clone());
        out.push((Rational::from(&b * &rising), b * &drising));
    }
    Ok(out)
}

fn rational_abs_up(q: &Rational) -> Float {
    let round = if *q < 0 { Round::Down } else { Round::Up };
    Float::with_val_round(ERR_PREC, q, round).0.abs()
}

impl HurwitzEvaluator {
    /// Chooses `N = max(8, ⌈0.7·digits + |s|⌉)` and grows `M` until twice the
    /// first omitted term, bounded at `X = N`, is below `10^-(digits+5)`.
    pub fn new(s: &Rational, ctx: &PrecisionContext) -> Result<Self> {
        check_s(s)?;
        let s_abs = s.to_f64().abs();
        let mut n = ((0.7 * ctx.digits() as f64 + s_abs).ceil() as u32).max(8);
        let target = {
            let t = Float::with_val(ERR_PREC, Float::u_pow_u(10, ctx.digits() + 5));
            Float::with_val_round(ERR_PREC, t.recip_ref(), Round::Down).0
        };
        let coeffs = correction_coefficients(s, MAX_CORRECTIONS + 1)?;
        loop {
            if let Some(m) = choose_m(s, n, &coeffs, &target) {
                let params = HurwitzParams::new(n, m)?;
                return Self::build(s, ctx, params, &coeffs);
            }
            n += n / 2;
        }
    }

    /// Evaluator with explicit parameters.
    pub fn with_params(
        s: &Rational,
        ctx: &PrecisionContext,
        params: HurwitzParams,
    ) -> Result<Self> {
        check_s(s)?;
        let coeffs = correction_coefficients(s, params.m + 1)?;
        Self::build(s, ctx, params, &coeffs)
    }

    fn build(
        s: &Rational,
        ctx: &PrecisionContext,
        params: HurwitzParams,
        coeffs: &[(Rational, Rational)],
    ) -> Result<Self> {
        let bits = ctx.bits() + 16 + (32 - params.n.leading_zeros());
        let m = params.m as usize;
        let coef: Vec<BoundedReal> = coeffs[..m]
            .iter()
            .map(|(c, _)| BoundedReal::from_rational(c, bits))
            .collect();
        let dcoef: Vec<BoundedReal> = coeffs[..m]
            .iter()
            .map(|(_, d)| BoundedReal::from_rational(d, bits))
            .collect();
        let (omit_c, omit_d) = &coeffs[m];
        let mags = |cs: &Vec<BoundedReal>| cs.iter().map(|c| c.abs_upper()).collect();
        let coef_abs = mags(&coef);
        let dcoef_abs = mags(&dcoef);
        let inv_s_minus_1 = BoundedReal::from_rational(&Rational::from(s - 1u32).recip(), bits);
        Ok(Self {
            ctx: *ctx,
            bits,
            params,
            s: BoundedReal::from_rational(s, bits),
            s_abs: s.to_f64().abs(),
            s_is_half: *s == Rational::from((1, 2)),
            inv_s_minus_1,
            coef,
            dcoef,
            coef_abs,
            dcoef_abs,
            omit_coef: rational_abs_up(omit_c),
            omit_dcoef: rational_abs_up(omit_d),
        })
    }

    pub fn params(&self) -> HurwitzParams {
        self.params
    }

    pub fn context(&self) -> &PrecisionContext {
        &self.ctx
    }

    /// Working precision in bits.
    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn zeta(&self, a: &Rational) -> Result<BoundedReal> {
        check_a(a)?;
        Ok(self.raw(a, false).0)
    }

    pub fn zeta_ds(&self, a: &Rational) -> Result<BoundedReal> {
        check_a(a)?;
        Ok(self.raw(a, true).1.expect("derivative requested"))
    }

    pub fn zeta_and_ds(&self, a: &Rational) -> Result<(BoundedReal, BoundedReal)> {
        check_a(a)?;
        let (v, d) = self.raw(a, true);
        Ok((v, d.expect("derivative requested")))
    }

    /// Unchecked evaluation; the caller guarantees `a ∈ (0, 2]`.
    pub(crate) fn raw(&self, a: &Rational, with_ds: bool) -> (BoundedReal, Option<BoundedReal>) {
        let (mut value, mut deriv) = self.direct_sum(a, with_ds);
        let (tail, dtail) = self.tail(a, with_ds);
        value = value.add_ref(&tail);
        if let (Some(d), Some(dt)) = (deriv.as_mut(), dtail) {
            *d = d.add_ref(&dt);
        }
        (value, deriv)
    }

    /// `Σ_{k<N} (k+a)^-s` (and `-Σ log(k+a) (k+a)^-s`), accumulated in plain
    /// floats with an a-priori rounding bound.
    fn direct_sum(&self, a: &Rational, with_ds: bool) -> (BoundedReal, Option<BoundedReal>) {
        let bits = self.bits;
        let neg_s = Float::with_val(bits, -self.s.value());
        let den = Float::with_val(bits, a.denom());
        let mut acc = Float::new(bits);
        let mut abs_acc = 0f64;
        let mut dacc = Float::new(bits);
        let mut dabs_acc = 0f64;
        let mut x = Float::new(bits);
        let mut t = Float::new(bits);
        let mut l = Float::new(bits);
        let mut num = a.numer().clone();
        let unit_den = *a.denom() == 1;
        for _ in 0..self.params.n {
            x.assign(&num);
            if !unit_den {
                x /= &den;
            }
            if self.s_is_half {
                t.assign(x.recip_sqrt_ref());
            } else {
                t.assign((&x).pow(&neg_s));
            }
            acc += &t;
            abs_acc += t.to_f64().abs();
            if with_ds {
                l.assign(x.ln_ref());
                l *= &t;
                dacc -= &l;
                dabs_acc += l.to_f64().abs();
            }
            num += a.denom();
        }

        // Per-term relative error ≤ u(1 + |s|(1 + L)) with L = max |log(k+a)|,
        // plus N roundings of partial sums bounded by the sum of magnitudes.
        let log_max = a
            .to_f64()
            .ln()
            .abs()
            .max((self.params.n as f64 + a.to_f64()).ln())
            + 1.0;
        let n = self.params.n as f64;
        let u = self.unit();
        // f64 magnitude sums are inflated to cover their own rounding.
        let abs_acc = Float::with_val(ERR_PREC, abs_acc * (1.0 + 1e-9));
        let dabs_acc = Float::with_val(ERR_PREC, dabs_acc * (1.0 + 1e-9));
        let factor = 2.0 * (n + 3.0 + 2.0 * self.s_abs * (1.0 + log_max));
        let err = err_mul(&err_mul(&u, &abs_acc), &Float::with_val(ERR_PREC, factor));
        let value = BoundedReal::with_err(acc, &err);

        let deriv = with_ds.then(|| {
            let f_t = 2.0 * (2.0 + 2.0 * log_max + self.s_abs * log_max * (1.0 + log_max));
            let f_d = 2.0 * (n + 2.0);
            let mut e = err_mul(&err_mul(&u, &abs_acc), &Float::with_val(ERR_PREC, f_t));
            e.add_assign_round(
                &err_mul(&err_mul(&u, &dabs_acc), &Float::with_val(ERR_PREC, f_d)),
                Round::Up,
            );
            BoundedReal::with_err(dacc, &e)
        });
        (value, deriv)
    }

    fn unit(&self) -> Float {
        Float::with_val(ERR_PREC, Float::i_exp(1, -(self.bits as i32)))
    }

    /// Boundary terms and Euler–Maclaurin corrections at `X = N + a`,
    /// including the truncation radius.
    ///
    /// Evaluated in plain floats. Every input carries relative error at most
    /// a few units `u`, Horner over `M` terms adds at most `(8M + 4) u`
    /// relative to `Σ |c_j| y^(j-1)`, and the total is charged against the
    /// sum of term magnitudes with a factor 2 margin.
    fn tail(&self, a: &Rational, with_ds: bool) -> (BoundedReal, Option<BoundedReal>) {
        let bits = self.bits;
        let m = self.params.m as usize;
        let x_exact = Rational::from(a + self.params.n);
        let x = Float::with_val(bits, &x_exact);
        let log_bound = x_exact.to_f64().ln().abs() + 1.0;
        // P = X^-s
        let p = if self.s_is_half {
            Float::with_val(bits, x.recip_sqrt_ref())
        } else {
            Float::with_val(bits, (&x).pow(&Float::with_val(bits, -self.s.value())))
        };
        let inv_x = Float::with_val(bits, x.recip_ref());
        let y = Float::with_val(bits, inv_x.square_ref());
        let is1 = self.inv_s_minus_1.value();
        let t1 = Float::with_val(bits, &p * &x) * is1;
        let t2 = Float::with_val(bits, &p >> 1u32);
        let p_over_x = Float::with_val(bits, &p * &inv_x);

        let y_mag = Float::with_val(ERR_PREC, &y);
        let horner = |cs: &[BoundedReal], mags: &[Float]| {
            let mut h = cs[m - 1].value().clone();
            let mut h_abs = mags[m - 1].clone();
            for (c, c_abs) in cs[..m - 1].iter().zip(&mags[..m - 1]).rev() {
                h *= &y;
                h += c.value();
                h_abs *= &y_mag;
                h_abs += c_abs;
            }
            (h, h_abs)
        };
        let (h, h_abs) = horner(&self.coef, &self.coef_abs);
        let corr = Float::with_val(bits, &p_over_x * &h);

        // X^-(2M+1) bounded above using X rounded down.
        let x_lo = Float::with_val_round(ERR_PREC, &x_exact, Round::Down).0;
        let decay = Float::with_val_round(ERR_PREC, (&x_lo).pow(-(2 * m as i32 + 1)), Round::Up).0;
        let p_mag = Float::with_val(ERR_PREC, &p).abs() * 1.01f64;
        let omitted = err_mul(&err_mul(&self.omit_coef, &p_mag), &decay);
        let two = Float::with_val(ERR_PREC, 2);

        let u = self.unit();
        let e_p = 2.0 + self.s_abs * (1.0 + log_bound);
        let rel = e_p + 8.0 * m as f64 + 12.0;
        let mag = |f: &Float| Float::with_val(ERR_PREC, f).abs();
        let pox = mag(&p_over_x);
        let t1_mag = mag(&t1);
        let t2_mag = mag(&t2);
        let s_mag =
            Float::with_val(ERR_PREC, &t1_mag + &t2_mag) + Float::with_val(ERR_PREC, &pox * &h_abs);
        let rounding = err_mul(&err_mul(&s_mag, &u), &Float::with_val(ERR_PREC, 2.0 * rel));
        let mut err = err_mul(&omitted, &two);
        err.add_assign_round(&rounding, Round::Up);
        let value = BoundedReal::with_err(Float::with_val(bits, &t1 + &t2) + &corr, &err);

        let deriv = with_ds.then(|| {
            let log_x = Float::with_val(bits, x.ln_ref());
            let (hd, hd_abs) = horner(&self.dcoef, &self.dcoef_abs);
            // d/ds of X^(1-s)/(s-1) = -T1 (log X + 1/(s-1))
            let dt1 = -Float::with_val(bits, &log_x + is1) * &t1;
            let dt2 = -Float::with_val(bits, &t2 * &log_x);
            let inner = hd - Float::with_val(bits, &log_x * &h);
            let dcorr = Float::with_val(bits, &p_over_x * &inner);

            let lb = Float::with_val(ERR_PREC, log_bound);
            let is1_mag = mag(is1);
            let a1 = t1_mag * Float::with_val(ERR_PREC, &lb + &is1_mag);
            let a2 = t2_mag * &lb;
            let a3 = pox * (hd_abs + Float::with_val(ERR_PREC, &lb * &h_abs));
            let d_mag = a1 + a2 + a3;
            let rounding = err_mul(
                &err_mul(&d_mag, &u),
                &Float::with_val(ERR_PREC, 2.0 * (rel + 10.0)),
            );

            let mut omit = self.omit_dcoef.clone();
            omit.add_assign_round(&err_mul(&self.omit_coef, &lb), Round::Up);
            let mut err = err_mul(&err_mul(&err_mul(&omit, &p_mag), &decay), &two);
            err.add_assign_round(&rounding, Round::Up);
            BoundedReal::with_err(dt1 + dt2 + dcorr, &err)
        });
        (value, deriv)
    }
}

/// Smallest `M ≥ 4` whose first omitted term (value and derivative parts,
/// evaluated at `X = N`) is below `target / 2`.
fn choose_m(s: &Rational, n: u32, coeffs: &[(Rational, Rational)], target: &Float) -> Option<u32> {
    let ln_n = Float::with_val(ERR_PREC, n).ln();
    let s_f = Float::with_val(ERR_PREC, s);
    let one_plus_log = Float::with_val(ERR_PREC, &ln_n + 1u32);
    for m in 4..=MAX_CORRECTIONS {
        let (c, d) = &coeffs[m as usize];
        let exponent = -s_f.clone() - (2 * m + 1);
        let decay = Float::with_val(ERR_PREC, &exponent * &ln_n).exp();
        let mut mag = rational_abs_up(c);
        mag += rational_abs_up(d);
        mag *= &one_plus_log;
        mag *= &decay;
        mag *= 2u32;
        if mag <= *target {
            return Some(m);
        }
    }
    None
}

/// `ζ(s, a)` for rational `s ∈ [-1, 4] \ (1 ± 1e-3)` and `a ∈ (0, 2]`.
pub fn hurwitz_zeta(s: &Rational, a: &Rational, ctx: &PrecisionContext) -> Result<BoundedReal> {
    let ev = HurwitzEvaluator::new(s, ctx)?;
    ctx.finish("hurwitz_zeta", ev.zeta(a)?)
}

/// `∂ζ(s, a)/∂s`, same domain as [`hurwitz_zeta`].
pub fn hurwitz_zeta_ds(s: &Rational, a: &Rational, ctx: &PrecisionContext) -> Result<BoundedReal> {
    let ev = HurwitzEvaluator::new(s, ctx)?;
    ctx.finish("hurwitz_zeta_ds", ev.zeta_ds(a)?)
}
