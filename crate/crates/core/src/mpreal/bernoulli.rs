use std::sync::OnceLock;

use rug::{Integer, Rational};

use crate::error::{domain, Result};

pub const MAX_BERNOULLI_INDEX: u32 = 400;

/// `B_2, B_4, …, B_400`, built once from tangent numbers.
fn table() -> &'static [Rational] {
    static TABLE: OnceLock<Vec<Rational>> = OnceLock::new();
    TABLE.get_or_init(|| even_bernoulli_from_tangents(MAX_BERNOULLI_INDEX as usize / 2))
}

/// Tangent numbers `T_1..T_n` by the in-place recurrence of Buckholtz/Knuth,
/// then `B_2k = (-1)^(k-1) 2k T_k / (4^k (4^k - 1))`.
fn even_bernoulli_from_tangents(n: usize) -> Vec<Rational> {
    let mut t: Vec<Integer> = vec![Integer::new(); n + 1];
    t[1] = Integer::from(1);
    for k in 2..=n {
        t[k] = Integer::from(&t[k - 1] * (k as u32 - 1));
    }
    for k in 2..=n {
        for j in k..=n {
            let lhs = Integer::from(&t[j - 1] * (j - k) as u32);
            let rhs = Integer::from(&t[j] * (j - k + 2) as u32);
            t[j] = lhs + rhs;
        }
    }
    (1..=n)
        .map(|k| {
            let four_k = Integer::from(1) << (2 * k as u32);
            let den = Integer::from(&four_k - 1u32) * four_k;
            let num = Integer::from(&t[k] * (2 * k as u32));
            let b = Rational::from((num, den));
            if k % 2 == 0 {
                -b
            } else {
                b
            }
        })
        .collect()
}

/// Exact Bernoulli number `B_k` for even `2 ≤ k ≤ 400`.
pub fn bernoulli(k: u32) -> Result<Rational> {
    if k < 2 || k % 2 == 1 || k > MAX_BERNOULLI_INDEX {
        return domain(format!(
            "bernoulli index must be even in [2, {MAX_BERNOULLI_INDEX}], got {k}"
        ));
    }
    Ok(table()[(k / 2 - 1) as usize].clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(bernoulli(2).unwrap(), Rational::from((1, 6)));
        assert_eq!(bernoulli(4).unwrap(), Rational::from((-1, 30)));
        assert_eq!(bernoulli(6).unwrap(), Rational::from((1, 42)));
        assert_eq!(bernoulli(12).unwrap(), Rational::from((-691, 2730)));
    }

    #[test]
    fn rejects_bad_indices() {
        for k in [0, 1, 3, 401, 402] {
            assert!(bernoulli(k).is_err(), "{k}");
        }
        assert!(bernoulli(400).is_ok());
    }

    #[test]
    fn von_staudt_clausen_denominators() {
        // denom(B_2k) = product of primes p with (p - 1) | 2k.
        for k in (2..=60u32).step_by(2) {
            let expected: u32 = (2..=k + 1)
                .filter(|&p| (2..p).all(|q| p % q != 0) && k % (p - 1) == 0)
                .product();
            assert_eq!(*bernoulli(k).unwrap().denom(), expected, "B_{k}");
        }
    }
}
