//! Property suites shared by `properties.rs` and the acceptance runner. Each
//! returns `Err` with a description of the first counterexample.

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use zhalf::arith::{kronecker, multiplicatively_independent};
use zhalf::hurwitz::{HurwitzEvaluator, HurwitzParams};
use zhalf::mpreal::power;
use zhalf::{BoundedReal, PrecisionContext};

pub type SuiteResult = Result<(), String>;

pub fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        proptest::test_runner::TestRng::deterministic_rng(
            proptest::test_runner::RngAlgorithm::ChaCha,
        ),
    )
}

fn ctx(d: u32) -> PrecisionContext {
    PrecisionContext::new(d).unwrap()
}

/// `s = k/1000` over `[-1, 4]` minus the pole.
pub fn s_strategy() -> impl Strategy<Value = Rational> {
    (-1000i32..=4000)
        .prop_filter("pole", |k| *k != 1000)
        .prop_map(|k| Rational::from((k, 1000)))
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> SuiteResult {
    runner(cases)
        .run(&strategy, test)
        .map_err(|e| e.to_string())
}

/// `ζ(s, a) = a^-s + ζ(s, a+1)` for random `(s, a)`, `a ∈ (0, 1]`.
pub fn hurwitz_shift(cases: u32) -> SuiteResult {
    let c = ctx(30);
    run(cases, (s_strategy(), 1u32..=997), |(s, j)| {
        let a = Rational::from((j, 997));
        let eval = HurwitzEvaluator::new(&s, &c).unwrap();
        let lhs = eval.zeta(&a).unwrap();
        let shifted = eval.zeta(&Rational::from(&a + 1u32)).unwrap();
        let bits = eval.bits();
        let a_pow = power(
            &BoundedReal::from_rational(&a, bits),
            &-BoundedReal::from_rational(&s, bits),
        )
        .unwrap();
        let rhs = a_pow.add_ref(&shifted);
        check(lhs.overlaps(&rhs), || {
            format!("s = {s}, a = {a}: {lhs:?} vs {rhs:?}")
        })
    })
}

/// `Σ_{a=1}^{q} ζ(s, a/q) = q^s ζ(s)`.
pub fn hurwitz_multiplication() -> SuiteResult {
    let c = ctx(30);
    for q in [2u32, 3, 5] {
        for s in [
            Rational::from((-1, 2)),
            Rational::from((3, 10)),
            Rational::from((1, 2)),
            Rational::from(2),
        ] {
            let eval = HurwitzEvaluator::new(&s, &c).unwrap();
            let bits = eval.bits();
            let mut lhs = BoundedReal::from_int(0, bits);
            for a in 1..=q {
                lhs = lhs.add_ref(&eval.zeta(&Rational::from((a, q))).unwrap());
            }
            let qs = power(
                &BoundedReal::from_int(q, bits),
                &BoundedReal::from_rational(&s, bits),
            )
            .unwrap();
            let rhs = qs.mul_ref(&eval.zeta(&Rational::from(1)).unwrap());
            if !lhs.overlaps(&rhs) {
                return Err(format!("q = {q}, s = {s}: {lhs:?} vs {rhs:?}"));
            }
        }
    }
    Ok(())
}

/// Value at `(N, M)` versus `(4N, M+4)` differs by less than the reported radius.
pub fn tail_resampling(cases: u32) -> SuiteResult {
    let c = ctx(30);
    run(cases, (s_strategy(), 1u32..=2000), |(s, j)| {
        let a = Rational::from((j, 1000));
        let base = HurwitzEvaluator::new(&s, &c).unwrap();
        let p = base.params();
        let fine =
            HurwitzEvaluator::with_params(&s, &c, HurwitzParams::new(4 * p.n, p.m + 4).unwrap())
                .unwrap();
        let (v1, d1) = base.zeta_and_ds(&a).unwrap();
        let (v2, d2) = fine.zeta_and_ds(&a).unwrap();
        let gap = Float::with_val(64, v1.value() - v2.value()).abs();
        let dgap = Float::with_val(64, d1.value() - d2.value()).abs();
        check(gap < *v1.err() && dgap < *d1.err(), || {
            format!(
                "s = {s}, a = {a}: |Δ| = {gap} vs err {}, |Δ'| = {dgap} vs err {}",
                v1.err(),
                d1.err()
            )
        })
    })
}

/// `|∂_s ζ(s, a) − (ζ(s+h, a) − ζ(s−h, a))/2h| / h²` settles to a constant as
/// `h` runs through `1e-6, 1e-7, 1e-8`.
pub fn derivative_vs_finite_difference() -> SuiteResult {
    let c = ctx(60);
    let grid_s = [
        Rational::from((-1, 2)),
        Rational::from((3, 10)),
        Rational::from((1, 2)),
        Rational::from(2),
    ];
    let grid_a = [
        Rational::from((1, 4)),
        Rational::from((3, 4)),
        Rational::from(1),
        Rational::from((3, 2)),
    ];
    for s in &grid_s {
        let eval = HurwitzEvaluator::new(s, &c).unwrap();
        for a in &grid_a {
            let ds = eval.zeta_ds(a).unwrap();
            let mut ratios = Vec::new();
            for k in 6..=8u32 {
                let h = Rational::from((1, 10u64.pow(k)));
                let up = HurwitzEvaluator::new(&Rational::from(s + &h), &c)
                    .unwrap()
                    .zeta(a)
                    .unwrap();
                let down = HurwitzEvaluator::new(&Rational::from(s - &h), &c)
                    .unwrap()
                    .zeta(a)
                    .unwrap();
                let diff = up.sub_ref(&down).div_int(2).unwrap();
                let h_f = Float::with_val(200, &h);
                let central = Float::with_val(200, diff.value() / &h_f);
                let r = Float::with_val(200, &central - ds.value()).abs()
                    / Float::with_val(200, &h_f * &h_f);
                ratios.push(r.to_f64());
            }
            let r0 = ratios[0];
            if !r0.is_finite() || ratios.iter().any(|r| (r - r0).abs() > 1e-6 * r0 + 1e-20) {
                return Err(format!("s = {s}, a = {a}: ratios {ratios:?}"));
            }
        }
    }
    Ok(())
}

fn nonzero_arg() -> impl Strategy<Value = i64> {
    prop_oneof![-10_000i64..=-1, 1i64..=10_000]
}

/// `(ab|n) = (a|n)(b|n)` and `(a|mn) = (a|m)(a|n)`.
pub fn kronecker_multiplicativity(cases: u32) -> SuiteResult {
    run(
        cases,
        (nonzero_arg(), nonzero_arg(), nonzero_arg(), nonzero_arg()),
        |(a, b, m, n)| {
            let top = kronecker(a * b, n).unwrap();
            let top_split = kronecker(a, n).unwrap() * kronecker(b, n).unwrap();
            let bottom = kronecker(a, m * n).unwrap();
            let bottom_split = kronecker(a, m).unwrap() * kronecker(a, n).unwrap();
            check(top == top_split && bottom == bottom_split, || {
                format!("a = {a}, b = {b}, m = {m}, n = {n}")
            })
        },
    )
}

/// `(D|n)` depends only on `n mod |D|` for positive `n`.
pub fn kronecker_periodicity() -> SuiteResult {
    for disc in [-8i64, -4, -3, 5, 8, 12, 13] {
        let q = disc.abs();
        for n in 1..=20 * q {
            if kronecker(disc, n).unwrap() != kronecker(disc, n + q).unwrap() {
                return Err(format!("D = {disc}, n = {n}"));
            }
        }
    }
    Ok(())
}

/// Looks for `u^n = v^m` with `0 < |n|, |m| ≤ 12` (one exponent zero is
/// impossible once `|u|, |v| ≥ 2`). Candidates are screened in floating point
/// and confirmed with exact big integers.
fn dependent_by_search(u: i64, v: i64) -> bool {
    let (lu, lv) = ((u.abs() as f64).ln(), (v.abs() as f64).ln());
    for n in -12i32..=12 {
        for m in -12i32..=12 {
            if n == 0 && m == 0 {
                continue;
            }
            if (n as f64 * lu - m as f64 * lv).abs() > 1e-6 {
                continue;
            }
            // u^n = v^m  <=>  u^{n+} v^{m-} = u^{n-} v^{m+}
            let pow = |b: i64, e: i32| Integer::from(b).pow(e.unsigned_abs());
            let lhs = pow(u, n.max(0)) * pow(v, (-m).max(0));
            let rhs = pow(u, (-n).max(0)) * pow(v, m.max(0));
            if lhs == rhs {
                return true;
            }
        }
    }
    false
}

/// `multiplicatively_independent` agrees with the exhaustive search for all
/// `2 ≤ |u|, |v| ≤ 100`.
pub fn independence_brute_force() -> SuiteResult {
    for u in (-100i64..=100).filter(|x| x.abs() >= 2) {
        for v in (-100i64..=100).filter(|x| x.abs() >= 2) {
            let fast = multiplicatively_independent(u, v).unwrap();
            if fast == dependent_by_search(u, v) {
                return Err(format!(
                    "u = {u}, v = {v}: library says independent = {fast}"
                ));
            }
        }
    }
    Ok(())
}
