//! Monomials with exponents capped at `q - 1`, and exact counts of how many
//! such monomials in `n` variables have total degree at most `d`.
//!
//! The degree thresholds that matter here are fractions like `2(q-1)n/3`, so
//! bounds are carried as exact rationals rather than floats, and counts are
//! arbitrary-precision: the spaces involved grow like `c^n`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ffield::{FieldElement, Point};
use crate::{checked_cube, Error, Result};

/// Exact counts; the quantities here outgrow `u64` around `n = 40` already at `q = 3`.
pub type BigCount = BigUint;

/// Serde adapter emitting `BigCount` as a decimal string, which is the wire
/// format for every count in reports (fixed-width JSON numbers can't hold
/// them).
pub mod big_string {
    use super::BigCount;
    use serde::de::Error as DeError;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        v: &BigCount,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<BigCount, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse()
            .map_err(|_| DeError::custom(format!("bad decimal count {s:?}")))
    }
}

/// A monomial `x_1^{e_1} ... x_n^{e_n}` with every `e_i <= q - 1`.
///
/// The exponent cap makes these exactly the monomials that stay reduced under
/// the relation `x^q = x` on functions `F_q^n -> F_q`. Counting does not need
/// `q` prime, so construction only requires `q >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exponents: Vec<u64>,
    modulus: u64,
}

impl Monomial {
    pub fn new(modulus: u64, exponents: Vec<u64>) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::Parse(format!(
                "modulus must be at least 2, got {modulus}"
            )));
        }
        if let Some(&e) = exponents.iter().find(|&&e| e > modulus - 1) {
            return Err(Error::DegreeTooHigh {
                degree: e,
                bound: RationalDegree::from_integer((modulus - 1) as i64),
            });
        }
        Ok(Self { exponents, modulus })
    }

    pub fn one(modulus: u64, vars: usize) -> Self {
        Self {
            exponents: vec![0; vars],
            modulus,
        }
    }

    pub(crate) fn from_raw(modulus: u64, exponents: Vec<u64>) -> Self {
        debug_assert!(exponents.iter().all(|&e| e < modulus));
        Self { exponents, modulus }
    }

    pub fn vars(&self) -> usize {
        self.exponents.len()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn total_degree(&self) -> u64 {
        self.exponents.iter().sum()
    }

    /// The complementary monomial with exponents `(q-1) - e_i`. An involution
    /// that sends degree `t` to degree `(q-1)n - t`.
    pub fn reflect(&self) -> Self {
        let exponents = self
            .exponents
            .iter()
            .map(|&e| self.modulus - 1 - e)
            .collect();
        Self {
            exponents,
            modulus: self.modulus,
        }
    }

    /// Evaluates at a point, with the convention `0^0 = 1`.
    pub fn eval(&self, p: &Point) -> Result<FieldElement> {
        if p.modulus() != self.modulus {
            return Err(Error::ModulusMismatch(self.modulus, p.modulus()));
        }
        if p.dim() != self.vars() {
            return Err(Error::DimensionMismatch(self.vars(), p.dim()));
        }
        let mut acc = FieldElement::one(self.modulus);
        for (i, &e) in self.exponents.iter().enumerate() {
            if e > 0 {
                acc = acc.mul(p.coord(i).pow(e));
            }
        }
        Ok(acc)
    }

    /// Product of two monomials, reducing exponents by `x^q = x`:
    /// a positive exponent `e` maps to `((e - 1) mod (q - 1)) + 1`.
    pub fn mul_reduced(&self, other: &Monomial) -> Result<Self> {
        if other.modulus != self.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        if other.vars() != self.vars() {
            return Err(Error::DimensionMismatch(self.vars(), other.vars()));
        }
        let q = self.modulus;
        let exponents = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .map(|(&a, &b)| {
                let e = a + b;
                if e == 0 {
                    0
                } else {
                    (e - 1) % (q - 1) + 1
                }
            })
            .collect();
        Ok(Self {
            exponents,
            modulus: q,
        })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.total_degree() == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// An exact rational degree bound, e.g. `2(q-1)n/3` at `q = 3, n = 4` is `16/3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalDegree(Ratio<i64>);

impl RationalDegree {
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::Parse("degree denominator is zero".into()));
        }
        Ok(Self(Ratio::new(numer, denom)))
    }

    pub fn from_integer(value: i64) -> Self {
        Self(Ratio::from_integer(value))
    }

    /// The threshold `2(q-1)n/3` used throughout the pipeline.
    pub fn pipeline_degree(q: u64, n: usize) -> Self {
        Self(Ratio::new(2 * (q as i64 - 1) * n as i64, 3))
    }

    /// The threshold `(q-1)n/3` appearing in the closed-form bound.
    pub fn third_degree(q: u64, n: usize) -> Self {
        Self(Ratio::new((q as i64 - 1) * n as i64, 3))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    /// Whether an integer total degree is within this bound.
    pub fn admits(&self, degree: u64) -> bool {
        // degree <= numer/denom, denom > 0 after Ratio normalization
        (degree as i128) * (*self.0.denom() as i128) <= *self.0.numer() as i128
    }

    pub fn half(&self) -> Self {
        Self(self.0 / 2)
    }

    pub fn floor(&self) -> i64 {
        self.0.floor().to_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Compares against an integer without rounding.
    pub fn cmp_integer(&self, k: i64) -> Ordering {
        self.0.cmp(&Ratio::from_integer(k))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().expect("i64 ratio fits in f64")
    }
}

impl fmt::Display for RationalDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for RationalDegree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (numer, denom) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (s, None),
        };
        let n: i64 = numer
            .parse()
            .map_err(|_| Error::Parse(format!("bad degree numerator {numer:?}")))?;
        let d: i64 = match denom {
            Some(d) => d
                .parse()
                .map_err(|_| Error::Parse(format!("bad degree denominator {d:?}")))?,
            None => 1,
        };
        Self::new(n, d)
    }
}

impl Serialize for RationalDegree {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RationalDegree {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(DeError::custom)
    }
}

impl From<u64> for RationalDegree {
    fn from(value: u64) -> Self {
        Self::from_integer(value as i64)
    }
}

/// Number of monomials in `n` variables, exponents at most `q - 1`, of total
/// degree at most `d`. Exact.
///
/// Dynamic program over variables: appending a variable convolves the degree
/// histogram with a window of width `q`, maintained as a sliding sum so each
/// of the `n` rounds costs one pass over the degrees.
pub fn count_monomials(q: u64, n: usize, d: RationalDegree) -> BigCount {
    assert!(q >= 2, "need q >= 2");
    if d.is_negative() {
        return BigCount::zero();
    }
    let max_total = (q as i64 - 1) * n as i64;
    if d.cmp_integer(max_total) != Ordering::Less {
        return BigCount::from(q).pow(n as u32);
    }
    let cap = d.floor();
    debug_assert!((0..max_total).contains(&cap));
    let cap = cap as usize;
    let q = q as usize;

    // row[t] = number of exponent vectors seen so far with total degree t <= cap
    let mut row = vec![BigCount::zero(); cap + 1];
    row[0] = BigCount::one();
    for _ in 0..n {
        let mut next = Vec::with_capacity(cap + 1);
        let mut window = BigCount::zero();
        for t in 0..=cap {
            window += &row[t];
            if t >= q {
                window -= &row[t - q];
            }
            next.push(window.clone());
        }
        row = next;
    }
    row.into_iter().sum()
}

/// Number of monomials of total degree strictly above `d`: `q^n - count(d)`.
pub fn count_monomials_above(q: u64, n: usize, d: RationalDegree) -> BigCount {
    BigCount::from(q).pow(n as u32) - count_monomials(q, n, d)
}

/// All monomials of total degree at most `d`, in lexicographic exponent
/// order. Materializes a vector, so it is guarded by the same cap as point
/// enumeration.
pub fn enumerate_monomials(q: u64, n: usize, d: RationalDegree) -> Result<Vec<Monomial>> {
    if q < 2 {
        return Err(Error::Parse(format!("modulus must be at least 2, got {q}")));
    }
    checked_cube(q, n)?;
    let mut out = Vec::new();
    let mut exps = vec![0u64; n];
    loop {
        let total: u64 = exps.iter().sum();
        if d.admits(total) {
            out.push(Monomial::from_raw(q, exps.clone()));
        }
        // odometer with the last coordinate fastest, matching lex order
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if exps[i] < q - 1 {
                exps[i] += 1;
                break;
            }
            exps[i] = 0;
        }
    }
}
