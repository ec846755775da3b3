//! Exact arithmetic in the prime field `F_q` and the vector space `F_q^n`.
//!
//! Values are immutable residues in `[0, q)` carrying their modulus. Scalar
//! arithmetic on mismatched moduli is a programming error and panics;
//! operations that combine user-supplied aggregates (points, coefficient
//! triples) return `Err` instead.

use std::fmt;

use crate::{checked_cube, Error, Result};

/// Trial division; good enough for desk-scale moduli.
pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    if q % 2 == 0 {
        return q == 2;
    }
    if q % 3 == 0 {
        return q == 3;
    }
    let mut f = 5;
    while f * f <= q {
        if q % f == 0 || q % (f + 2) == 0 {
            return false;
        }
        f += 6;
    }
    true
}

/// A residue in `[0, q)` for a prime modulus `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    value: u64,
    modulus: u64,
}

impl FieldElement {
    /// Builds a residue, normalizing negative inputs into `[0, q)`.
    pub fn new(value: i64, modulus: u64) -> Result<Self> {
        if !is_prime(modulus) {
            return Err(Error::NotPrime(modulus));
        }
        Ok(Self::from_signed(value, modulus))
    }

    /// Normalizes a signed value into a validated modulus. Internal fast path:
    /// the caller has already established that `modulus` is prime.
    pub(crate) fn from_signed(value: i64, modulus: u64) -> Self {
        let m = modulus as i128;
        let value = (((value as i128) % m + m) % m) as u64;
        Self { value, modulus }
    }

    pub(crate) fn from_residue(value: u64, modulus: u64) -> Self {
        debug_assert!(value < modulus);
        Self { value, modulus }
    }

    pub fn zero(modulus: u64) -> Self {
        Self { value: 0, modulus }
    }

    pub fn one(modulus: u64) -> Self {
        Self {
            value: 1 % modulus,
            modulus,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn expect_same(self, rhs: Self) -> u64 {
        assert_eq!(
            self.modulus, rhs.modulus,
            "field elements from different moduli"
        );
        self.modulus
    }

    pub fn add(self, rhs: Self) -> Self {
        let q = self.expect_same(rhs);
        let mut s = self.value + rhs.value;
        if s >= q {
            s -= q;
        }
        Self {
            value: s,
            modulus: q,
        }
    }

    pub fn sub(self, rhs: Self) -> Self {
        let q = self.expect_same(rhs);
        let s = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            q - (rhs.value - self.value)
        };
        Self {
            value: s,
            modulus: q,
        }
    }

    pub fn mul(self, rhs: Self) -> Self {
        let q = self.expect_same(rhs);
        let p = (self.value as u128 * rhs.value as u128 % q as u128) as u64;
        Self {
            value: p,
            modulus: q,
        }
    }

    pub fn neg(self) -> Self {
        let value = if self.value == 0 {
            0
        } else {
            self.modulus - self.value
        };
        Self {
            value,
            modulus: self.modulus,
        }
    }

    pub fn pow(self, mut exp: u64) -> Self {
        let mut base = self;
        let mut acc = Self::one(self.modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat: `a^(q-2)`.
    pub fn inv(self) -> Result<Self> {
        if self.value == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(self.modulus - 2))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// A point of `F_q^n`: a coordinate vector of residues sharing one modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    coords: Vec<u64>,
    modulus: u64,
}

impl Point {
    pub fn new(coords: Vec<FieldElement>) -> Result<Self> {
        let modulus = match coords.first() {
            Some(c) => c.modulus(),
            None => {
                return Err(Error::Parse(
                    "a point needs an ambient modulus; use Point::from_coords for n = 0".into(),
                ))
            }
        };
        let mut raw = Vec::with_capacity(coords.len());
        for c in &coords {
            if c.modulus() != modulus {
                return Err(Error::ModulusMismatch(modulus, c.modulus()));
            }
            raw.push(c.value());
        }
        Ok(Self {
            coords: raw,
            modulus,
        })
    }

    /// Builds a point from signed coordinates, normalizing into `[0, q)`.
    pub fn from_coords(modulus: u64, coords: &[i64]) -> Result<Self> {
        if !is_prime(modulus) {
            return Err(Error::NotPrime(modulus));
        }
        let coords = coords
            .iter()
            .map(|&c| FieldElement::from_signed(c, modulus).value())
            .collect();
        Ok(Self { coords, modulus })
    }

    pub(crate) fn from_raw(modulus: u64, coords: Vec<u64>) -> Self {
        debug_assert!(coords.iter().all(|&c| c < modulus));
        Self { coords, modulus }
    }

    pub fn zero(modulus: u64, dim: usize) -> Self {
        Self {
            coords: vec![0; dim],
            modulus,
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> FieldElement {
        FieldElement::from_residue(self.coords[i], self.modulus)
    }

    pub fn scale(&self, c: FieldElement) -> Result<Self> {
        if c.modulus() != self.modulus {
            return Err(Error::ModulusMismatch(self.modulus, c.modulus()));
        }
        let coords = (0..self.dim())
            .map(|i| self.coord(i).mul(c).value())
            .collect();
        Ok(Self {
            coords,
            modulus: self.modulus,
        })
    }

    pub fn translate(&self, v: &Point) -> Result<Self> {
        self.check_compatible(v)?;
        let coords = (0..self.dim())
            .map(|i| self.coord(i).add(v.coord(i)).value())
            .collect();
        Ok(Self {
            coords,
            modulus: self.modulus,
        })
    }

    pub(crate) fn check_compatible(&self, other: &Point) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }

    /// Rank of this point in the lexicographic enumeration of the cube.
    /// Only meaningful when `q^n` fits in a `u64`; callers go through the
    /// enumeration cap first.
    #[cfg(test)]
    pub(crate) fn cube_index(&self) -> u64 {
        self.coords.iter().fold(0, |acc, &c| acc * self.modulus + c)
    }

    pub(crate) fn from_cube_index(modulus: u64, dim: usize, mut index: u64) -> Self {
        let mut coords = vec![0; dim];
        for slot in coords.iter_mut().rev() {
            *slot = index % modulus;
            index /= modulus;
        }
        Self { coords, modulus }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// All points of `F_q^n` in lexicographic order, subject to the cube cap.
pub fn enumerate_points(modulus: u64, dim: usize) -> Result<Vec<Point>> {
    if !is_prime(modulus) {
        return Err(Error::NotPrime(modulus));
    }
    let size = checked_cube(modulus, dim)?;
    Ok((0..size)
        .map(|i| Point::from_cube_index(modulus, dim, i))
        .collect())
}

/// Coefficients `(alpha, beta, gamma)` of the progression equation
/// `alpha·a1 + beta·a2 + gamma·a3 = 0`, constrained to sum to zero.
/// `gamma = 0` is representable; the operations that need `gamma != 0`
/// check it themselves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoefficientTriple {
    alpha: FieldElement,
    beta: FieldElement,
    gamma: FieldElement,
}

impl CoefficientTriple {
    pub fn new(alpha: FieldElement, beta: FieldElement, gamma: FieldElement) -> Result<Self> {
        if alpha.modulus() != beta.modulus() {
            return Err(Error::ModulusMismatch(alpha.modulus(), beta.modulus()));
        }
        if alpha.modulus() != gamma.modulus() {
            return Err(Error::ModulusMismatch(alpha.modulus(), gamma.modulus()));
        }
        if !alpha.add(beta).add(gamma).is_zero() {
            return Err(Error::CoefficientSum(
                alpha.value(),
                beta.value(),
                gamma.value(),
                alpha.modulus(),
            ));
        }
        Ok(Self { alpha, beta, gamma })
    }

    pub fn from_signed(modulus: u64, alpha: i64, beta: i64, gamma: i64) -> Result<Self> {
        if !is_prime(modulus) {
            return Err(Error::NotPrime(modulus));
        }
        Self::new(
            FieldElement::from_signed(alpha, modulus),
            FieldElement::from_signed(beta, modulus),
            FieldElement::from_signed(gamma, modulus),
        )
    }

    /// Parses `"a,b,c"` (signed integers allowed) against a modulus.
    pub fn parse(s: &str, modulus: u64) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!(
                "expected three coefficients, got {s:?}"
            )));
        }
        let mut vals = [0i64; 3];
        for (slot, part) in vals.iter_mut().zip(&parts) {
            *slot = part
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient {part:?}")))?;
        }
        Self::from_signed(modulus, vals[0], vals[1], vals[2])
    }

    pub fn modulus(&self) -> u64 {
        self.alpha.modulus()
    }

    pub fn alpha(&self) -> FieldElement {
        self.alpha
    }

    pub fn beta(&self) -> FieldElement {
        self.beta
    }

    pub fn gamma(&self) -> FieldElement {
        self.gamma
    }

    pub fn neg_gamma(&self) -> FieldElement {
        self.gamma.neg()
    }

    /// `alpha·a + beta·b` componentwise.
    pub fn combine(&self, a: &Point, b: &Point) -> Result<Point> {
        a.check_compatible(b)?;
        if a.modulus() != self.modulus() {
            return Err(Error::ModulusMismatch(self.modulus(), a.modulus()));
        }
        let coords = (0..a.dim())
            .map(|i| {
                self.alpha
                    .mul(a.coord(i))
                    .add(self.beta.mul(b.coord(i)))
                    .value()
            })
            .collect();
        Ok(Point::from_raw(a.modulus(), coords))
    }

    /// The unique `a3` with `alpha·a1 + beta·a2 + gamma·a3 = 0`; needs `gamma != 0`.
    pub fn third_point(&self, a1: &Point, a2: &Point) -> Result<Point> {
        if self.gamma.is_zero() {
            return Err(Error::GammaZero);
        }
        let scale = self.gamma.neg().inv().expect("gamma is nonzero");
        self.combine(a1, a2)?.scale(scale)
    }
}
