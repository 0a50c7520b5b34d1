use rug::float::Round;
use rug::{Float, Integer, Rational};

use crate::error::{domain, Result};

/// Decimal rendering with `digits` significant digits, round-half-even.
///
/// Fixed notation for `1e-6 ≤ |x| < 1e9`, scientific (`d.ddde±N`) otherwise.
pub fn render_value(x: &Float, digits: u32) -> String {
    render(x, digits.max(1) as usize, Round::Nearest)
}

/// Radius rendering: three significant digits, rounded upward, always
/// scientific.
pub fn render_err(err: &Float) -> String {
    if err.is_zero() {
        return "0".into();
    }
    let (neg, mantissa, exp) = err.to_sign_string_exp_round(10, Some(3), Round::Up);
    let exp = exp.expect("nonzero radius has an exponent");
    scientific(neg, &mantissa, exp)
}

fn render(x: &Float, digits: usize, round: Round) -> String {
    if x.is_zero() {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let (neg, mantissa, exp) = x.to_sign_string_exp_round(10, Some(digits), round);
    // value = 0.mantissa × 10^exp
    let exp = exp.expect("finite nonzero float has an exponent");
    // |x| in [1e-6, 1e9)  <=>  exp in [-5, 9]
    if (-5..=9).contains(&exp) {
        fixed(neg, &mantissa, exp)
    } else {
        scientific(neg, &mantissa, exp)
    }
}

fn fixed(neg: bool, mantissa: &str, exp: i32) -> String {
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if exp <= 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-exp) as usize));
        out.push_str(mantissa);
    } else {
        let e = exp as usize;
        if mantissa.len() <= e {
            out.push_str(mantissa);
            out.extend(std::iter::repeat_n('0', e - mantissa.len()));
        } else {
            out.push_str(&mantissa[..e]);
            out.push('.');
            out.push_str(&mantissa[e..]);
        }
    }
    out
}

fn scientific(neg: bool, mantissa: &str, exp: i32) -> String {
    let sign = if neg { "-" } else { "" };
    let (head, tail) = mantissa.split_at(1);
    let e = exp - 1;
    if tail.is_empty() {
        format!("{sign}{head}e{e}")
    } else {
        format!("{sign}{head}.{tail}e{e}")
    }
}

/// Parses `"0.3"`, `"-1.25e-2"`, `"1/2"` or `"7"` into an exact rational.
pub fn parse_decimal(text: &str) -> Result<Rational> {
    let t = text.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: Integer = n.trim().parse().map_err(|_| bad(text))?;
        let d: Integer = d.trim().parse().map_err(|_| bad(text))?;
        if d == 0 {
            return domain(format!("zero denominator in {text:?}"));
        }
        return Ok(Rational::from((n, d)));
    }
    let (body, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad(text))?),
        None => (t, 0),
    };
    let (neg, body) = match body.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, body.strip_prefix('+').unwrap_or(body)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part
            .chars()
            .chain(frac_part.chars())
            .all(|c| c.is_ascii_digit())
    {
        return Err(bad(text));
    }
    let digits: Integer = format!("0{int_part}{frac_part}")
        .parse()
        .map_err(|_| bad(text))?;
    let scale = exp - frac_part.len() as i32;
    let mut q = Rational::from(digits);
    if scale >= 0 {
        q *= Integer::from(Integer::u_pow_u(10, scale as u32));
    } else {
        q /= Integer::from(Integer::u_pow_u(10, (-scale) as u32));
    }
    Ok(if neg { -q } else { q })
}

fn bad(text: &str) -> crate::error::Error {
    crate::error::Error::Domain(format!("cannot parse {text:?} as a decimal number"))
}
