//! The large-deviations layer. For `X` uniform on `{0, ..., q-1}`, the rate
//! function `I(x) = sup_theta [theta·x - log E e^(theta·X)]` controls the
//! exponential decay of `m_{xn} / q^n`; at `x = (q-1)/3` it yields the base
//! `c(q) = q·e^(-I)` of the final bound, with `c(3) < 2.756`.
//!
//! Everything here is double precision; the exact integer counts it is being
//! compared against come from the counting module.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::monomials::{count_monomials, BigCount, RationalDegree};
use crate::{Error, Result};

/// A rate-function evaluation. Fields are declared in serialized (sorted-key)
/// order; `c` is populated only by [`clp_constant`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RateResult {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    pub q: u64,
    pub rate: f64,
    #[serde(with = "theta_repr")]
    pub theta_star: f64,
    pub x: f64,
}

/// One row of the convergence table. Fields are declared in serialized
/// (sorted-key) order.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConvergenceRow {
    pub exact_log: f64,
    pub gap: f64,
    pub limit: f64,
    pub n: usize,
}

/// JSON cannot carry IEEE infinities, and the optimizer is genuinely infinite
/// at the range edges, so those sentinels travel as the strings "inf"/"-inf".
mod theta_repr {
    use serde::de::Error as DeError;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        v: &f64,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        if v.is_infinite() {
            serializer.serialize_str(if *v > 0.0 { "inf" } else { "-inf" })
        } else {
            serializer.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Num(v) => Ok(v),
            Repr::Str(s) => match s.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                other => Err(DeError::custom(format!("bad theta value {other:?}"))),
            },
        }
    }
}

/// `log sum_{k<q} e^(k·theta)`, shifted by the largest exponent so nothing
/// overflows for |theta| up to hundreds.
fn log_sum_exp(q: u64, theta: f64) -> f64 {
    let top = ((q - 1) as f64 * theta).max(0.0);
    let sum: f64 = (0..q).map(|k| (k as f64 * theta - top).exp()).sum();
    top + sum.ln()
}

/// Mean and variance of the exponentially tilted distribution
/// `P(k) ∝ e^(k·theta)` on `{0, ..., q-1}`. The mean is the derivative of the
/// log moment generating function and is strictly increasing in theta.
fn tilted_moments(q: u64, theta: f64) -> (f64, f64) {
    let top = ((q - 1) as f64 * theta).max(0.0);
    let mut z = 0.0;
    let mut s1 = 0.0;
    let mut s2 = 0.0;
    for k in 0..q {
        let w = (k as f64 * theta - top).exp();
        z += w;
        s1 += k as f64 * w;
        s2 += (k as f64) * (k as f64) * w;
    }
    let mean = s1 / z;
    let var = s2 / z - mean * mean;
    (mean, var)
}

/// `theta·x - log((1 + e^theta + ... + e^((q-1)·theta)) / q)`: the quantity
/// whose supremum over theta is the rate `I(x)`.
pub fn cramer_objective(q: u64, x: f64, theta: f64) -> f64 {
    theta * x - (log_sum_exp(q, theta) - (q as f64).ln())
}

const MEAN_TOLERANCE: f64 = 1e-12;

/// Solves `mean(theta) = x` by bisection sharpened with Newton steps, then
/// reports `I(x)` as the objective at the optimizer. The edge values
/// `x ∈ {0, q-1}` are exact limits: `I = log q` with an infinite optimizer.
pub fn rate_function(q: u64, x: f64) -> Result<RateResult> {
    assert!(q >= 2, "need q >= 2");
    let max = q - 1;
    if !(0.0..=max as f64).contains(&x) {
        return Err(Error::XOutOfRange { x, max });
    }
    if x == 0.0 || x == max as f64 {
        let theta_star = if x == 0.0 {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        };
        return Ok(RateResult {
            c: None,
            q,
            rate: (q as f64).ln(),
            theta_star,
            x,
        });
    }

    // mean is increasing with range (0, q-1), so an interior x brackets
    let mut lo = -60.0;
    let mut hi = 60.0;
    while tilted_moments(q, lo).0 > x {
        lo *= 2.0;
    }
    while tilted_moments(q, hi).0 < x {
        hi *= 2.0;
    }
    let mut theta = 0.0;
    if !(lo..=hi).contains(&theta) {
        theta = 0.5 * (lo + hi);
    }
    for _ in 0..200 {
        let (mean, var) = tilted_moments(q, theta);
        if (mean - x).abs() <= MEAN_TOLERANCE {
            break;
        }
        if mean < x {
            lo = theta;
        } else {
            hi = theta;
        }
        let newton = theta - (mean - x) / var;
        theta = if var > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    let rate = cramer_objective(q, x, theta).max(0.0);
    Ok(RateResult {
        c: None,
        q,
        rate,
        theta_star: theta,
        x,
    })
}

/// The exponential base `c(q) = q·e^(-I((q-1)/3))`; strictly below `q`
/// because `(q-1)/3` is not the mean `(q-1)/2`.
pub fn clp_constant(q: u64) -> Result<RateResult> {
    let x = (q - 1) as f64 / 3.0;
    let mut result = rate_function(q, x)?;
    result.c = Some(q as f64 * (-result.rate).exp());
    Ok(result)
}

/// Natural log of a positive big integer: exact for 64-bit values, otherwise
/// the top 64 bits as mantissa plus `bits·log 2` for the shifted-away rest.
/// Relative error is far below the 1e-2-scale gaps it is used to measure.
pub fn ln_big(v: &BigCount) -> f64 {
    assert!(!v.is_zero(), "log of zero");
    let bits = v.bits();
    if bits <= 64 {
        let small: u64 = v.try_into().expect("fits in u64");
        return (small as f64).ln();
    }
    let shift = bits - 64;
    let mantissa: u64 = (v >> shift).try_into().expect("64 top bits");
    (mantissa as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Work cap for the exact counting DP inside convergence reports; the DP is
/// quadratic-ish in (q-1)·n with big-integer rows.
const COUNT_BUDGET: u64 = 300_000;

/// For each n: the exact `(1/n)·log(m_{(q-1)n/3} / q^n)` against the Cramér
/// limit `-I((q-1)/3)`, with their gap. Gaps shrink toward zero as n grows.
pub fn convergence_report(q: u64, n_values: &[usize]) -> Result<Vec<ConvergenceRow>> {
    let rate = rate_function(q, (q - 1) as f64 / 3.0)?.rate;
    let limit = -rate;
    let ln_q = (q as f64).ln();
    let mut rows = Vec::with_capacity(n_values.len());
    for &n in n_values {
        if n == 0 {
            return Err(Error::Parse("convergence rows need n >= 1".into()));
        }
        let cost = (q - 1) * n as u64;
        if cost > COUNT_BUDGET {
            return Err(Error::Budget {
                cost,
                cap: COUNT_BUDGET,
            });
        }
        let count = count_monomials(q, n, RationalDegree::third_degree(q, n));
        let exact_log = (ln_big(&count) - n as f64 * ln_q) / n as f64;
        rows.push(ConvergenceRow {
            exact_log,
            gap: exact_log - limit,
            limit,
            n,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q3_RATE: f64 = 0.08515688; // I(2/3) for q = 3, to the digits used below

    #[test]
    fn objective_is_zero_at_theta_zero() {
        for q in [2u64, 3, 5, 11] {
            for x in [0.0, 0.3, 1.0] {
                assert_eq!(cramer_objective(q, x, 0.0), 0.0);
            }
        }
    }

    #[test]
    fn objective_handles_extreme_theta() {
        // q=2, x=0: as theta -> -inf the objective tends to log 2
        let v = cramer_objective(2, 0.0, -40.0);
        assert!((v - 2f64.ln()).abs() < 1e-12);
        // no overflow far out on either side
        assert!(cramer_objective(5, 1.0, 500.0).is_finite());
        assert!(cramer_objective(5, 1.0, -500.0).is_finite());
    }

    #[test]
    fn closed_form_optimizer_at_q3() {
        // e^theta* = (sqrt(33) - 1) / 8 at x = 2/3
        let expected = (33f64.sqrt() - 1.0) / 8.0;
        let r = rate_function(3, 2.0 / 3.0).unwrap();
        assert!((r.theta_star.exp() - expected).abs() < 1e-9);
        // direct evaluation at the closed-form point matches the solved rate
        let direct = cramer_objective(3, 2.0 / 3.0, expected.ln());
        assert!((r.rate - direct).abs() < 1e-12);
        assert!((r.rate - Q3_RATE).abs() < 1e-6);
    }

    #[test]
    fn rate_vanishes_exactly_at_the_mean() {
        for q in [2u64, 3, 5, 7] {
            let r = rate_function(q, (q - 1) as f64 / 2.0).unwrap();
            assert!(r.theta_star.abs() < 1e-12);
            assert_eq!(r.rate, 0.0);
        }
    }

    #[test]
    fn edges_return_log_q_with_infinite_optimizer() {
        let r = rate_function(5, 0.0).unwrap();
        assert_eq!(r.rate, 5f64.ln());
        assert_eq!(r.theta_star, f64::NEG_INFINITY);
        let r = rate_function(5, 4.0).unwrap();
        assert_eq!(r.rate, 5f64.ln());
        assert_eq!(r.theta_star, f64::INFINITY);
        assert!(matches!(
            rate_function(5, 4.5),
            Err(Error::XOutOfRange { .. })
        ));
        assert!(matches!(
            rate_function(5, -0.1),
            Err(Error::XOutOfRange { .. })
        ));
    }

    #[test]
    fn optimizer_certificate_and_envelope() {
        for q in [2u64, 3, 5, 17] {
            for i in 1..10 {
                let x = (q - 1) as f64 * i as f64 / 10.0;
                let r = rate_function(q, x).unwrap();
                let (mean, _) = tilted_moments(q, r.theta_star);
                assert!((mean - x).abs() <= 1e-10, "q={q} x={x}");
                assert!(r.rate >= 0.0);
                assert!(r.rate <= (q as f64).ln() + 1e-15);
                // true supremum: no grid point beats it
                for k in -30..=30 {
                    let theta = r.theta_star + k as f64 * 0.37;
                    assert!(cramer_objective(q, x, theta) <= r.rate + 1e-9);
                }
            }
        }
    }

    #[test]
    fn rate_is_symmetric_under_reflection() {
        for q in [3u64, 5, 7] {
            for i in 0..=12 {
                let x = (q - 1) as f64 * i as f64 / 12.0;
                let a = rate_function(q, x).unwrap().rate;
                let b = rate_function(q, (q - 1) as f64 - x).unwrap().rate;
                assert!((a - b).abs() < 1e-10, "q={q} x={x}");
            }
        }
    }

    #[test]
    fn q2_constant_matches_binary_entropy_oracle() {
        // I(1/3) for the uniform two-point variable has the closed form
        // log 2 + (1/3)log(1/3) + (2/3)log(2/3) = (5/3)log 2 - log 3
        let oracle = 5.0 / 3.0 * 2f64.ln() - 3f64.ln();
        let r = rate_function(2, 1.0 / 3.0).unwrap();
        assert!((r.rate - oracle).abs() < 1e-10);
        let c = clp_constant(2).unwrap();
        assert!((c.c.unwrap() - 2.0 * (-oracle).exp()).abs() < 1e-10);
    }

    #[test]
    fn q3_constant_is_in_the_published_window() {
        let r = clp_constant(3).unwrap();
        let c = r.c.unwrap();
        assert!(c > 2.7550 && c < 2.756, "c = {c}");
        assert!((r.rate - Q3_RATE).abs() < 1e-6);
        assert!((r.x - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn constant_is_below_q_for_every_q() {
        for q in [2u64, 3, 5, 7, 11, 101] {
            let c = clp_constant(q).unwrap().c.unwrap();
            assert!(c < q as f64, "q={q} c={c}");
            assert!(c > 0.0);
        }
    }

    #[test]
    fn big_log_agrees_with_f64_on_small_and_structured_values() {
        for v in [1u64, 2, 10, 12345, u64::MAX] {
            let big = BigCount::from(v);
            assert!((ln_big(&big) - (v as f64).ln()).abs() < 1e-12);
        }
        // 2^1000: exactly 1000·log 2
        let big = BigCount::from(1u32) << 1000;
        assert!((ln_big(&big) - 1000.0 * std::f64::consts::LN_2).abs() < 1e-9);
        // 10^100 against the known decimal log
        let big = BigCount::from(10u32).pow(100);
        assert!((ln_big(&big) - 100.0 * 10f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn convergence_rows_shrink_toward_the_limit() {
        let rows = convergence_report(3, &[3, 9, 99, 999]).unwrap();
        assert_eq!(rows.len(), 4);
        // n = 3: m_2 = 10, exact log = (1/3)·log(10/27)
        let expect = (10f64 / 27.0).ln() / 3.0;
        assert!((rows[0].exact_log - expect).abs() < 1e-12);
        // n = 9: 3061 monomials of degree <= 6 out of 3^9
        let expect = (3061f64 / 19683.0).ln() / 9.0;
        assert!((rows[1].exact_log - expect).abs() < 1e-12);
        let limit = -rate_function(3, 2.0 / 3.0).unwrap().rate;
        for row in &rows {
            assert_eq!(row.limit, limit);
            assert!(row.exact_log < 0.0);
            assert_eq!(row.gap, row.exact_log - row.limit);
            // the count sits below its own exponential envelope, never above
            assert!(row.gap < 0.0, "{row:?}");
        }
        for pair in rows.windows(2) {
            assert!(
                pair[1].gap.abs() < pair[0].gap.abs(),
                "must approach the limit: {pair:?}"
            );
        }
        assert!(rows[3].gap.abs() <= 0.01);
    }

    #[test]
    fn convergence_rejects_degenerate_or_oversized_n() {
        assert!(matches!(convergence_report(3, &[0]), Err(Error::Parse(_))));
        assert!(matches!(
            convergence_report(3, &[200_000]),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn rate_results_round_trip_including_sentinels() {
        for r in [
            rate_function(3, 0.0).unwrap(),
            rate_function(3, 1.3).unwrap(),
            clp_constant(3).unwrap(),
        ] {
            let json = serde_json::to_string(&r).unwrap();
            let back: RateResult = serde_json::from_str(&json).unwrap();
            assert_eq!(serde_json::to_string(&back).unwrap(), json);
        }
        let edge = serde_json::to_string(&rate_function(3, 2.0).unwrap()).unwrap();
        assert!(edge.contains(r#""thetaStar":"inf""#));
    }

    proptest! {
        #[test]
        fn objective_is_concave_in_theta(
            q in 2u64..8,
            x01 in 0.05f64..0.95,
            t1 in -8.0f64..8.0,
            spread in 0.1f64..6.0,
            lambda in 0.1f64..0.9
        ) {
            let x = x01 * (q - 1) as f64;
            let t2 = t1 + spread;
            let mix = lambda * t1 + (1.0 - lambda) * t2;
            let lhs = cramer_objective(q, x, mix);
            let rhs = lambda * cramer_objective(q, x, t1)
                + (1.0 - lambda) * cramer_objective(q, x, t2);
            prop_assert!(lhs >= rhs - 1e-9);
        }
    }
}
