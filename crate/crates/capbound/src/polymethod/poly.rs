//! Multivariate polynomials over `F_q` in reduced form: every exponent is at
//! most `q - 1`, so distinct polynomials are distinct functions `F_q^n -> F_q`.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::ffield::{FieldElement, Point};
use crate::monomials::Monomial;
use crate::{Error, Result};

/// Sparse polynomial keyed by monomial; zero coefficients are never stored,
/// so the zero polynomial has an empty table. The `BTreeMap` keeps term
/// iteration in lexicographic exponent order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    modulus: u64,
    vars: usize,
    coeffs: BTreeMap<Monomial, FieldElement>,
}

impl Polynomial {
    pub fn zero(modulus: u64, vars: usize) -> Self {
        Self {
            modulus,
            vars,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(modulus: u64, vars: usize, c: FieldElement) -> Self {
        let mut p = Self::zero(modulus, vars);
        if !c.is_zero() {
            p.coeffs.insert(Monomial::one(modulus, vars), c);
        }
        p
    }

    pub fn from_terms(
        modulus: u64,
        vars: usize,
        terms: impl IntoIterator<Item = (Monomial, FieldElement)>,
    ) -> Result<Self> {
        let mut p = Self::zero(modulus, vars);
        for (m, c) in terms {
            p.check_term(&m, c)?;
            p.add_term(m, c);
        }
        Ok(p)
    }

    fn check_term(&self, m: &Monomial, c: FieldElement) -> Result<()> {
        if m.modulus() != self.modulus || c.modulus() != self.modulus {
            return Err(Error::ModulusMismatch(self.modulus, m.modulus()));
        }
        if m.vars() != self.vars {
            return Err(Error::DimensionMismatch(self.vars, m.vars()));
        }
        Ok(())
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().add(c);
                if s.is_zero() {
                    e.remove();
                } else {
                    e.insert(s);
                }
            }
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, FieldElement)> {
        self.coeffs.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: &Monomial) -> FieldElement {
        self.coeffs
            .get(m)
            .copied()
            .unwrap_or_else(|| FieldElement::zero(self.modulus))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u64> {
        self.coeffs.keys().map(Monomial::total_degree).max()
    }

    pub fn evaluate(&self, p: &Point) -> Result<FieldElement> {
        if p.modulus() != self.modulus {
            return Err(Error::ModulusMismatch(self.modulus, p.modulus()));
        }
        if p.dim() != self.vars {
            return Err(Error::DimensionMismatch(self.vars, p.dim()));
        }
        let mut acc = FieldElement::zero(self.modulus);
        for (m, c) in &self.coeffs {
            acc = acc.add(c.mul(m.eval(p)?));
        }
        Ok(acc)
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.coeffs {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: FieldElement) -> Result<Polynomial> {
        if c.modulus() != self.modulus {
            return Err(Error::ModulusMismatch(self.modulus, c.modulus()));
        }
        if c.is_zero() {
            return Ok(Polynomial::zero(self.modulus, self.vars));
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|(m, &v)| (m.clone(), v.mul(c)))
            .collect();
        Ok(Polynomial {
            modulus: self.modulus,
            vars: self.vars,
            coeffs,
        })
    }

    /// Product in the reduced ring, folding `x^q` back to `x` termwise.
    pub fn multiply(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same_space(other)?;
        let mut out = Polynomial::zero(self.modulus, self.vars);
        for (ma, &ca) in &self.coeffs {
            for (mb, &cb) in &other.coeffs {
                out.add_term(ma.mul_reduced(mb)?, ca.mul(cb));
            }
        }
        Ok(out)
    }

    fn check_same_space(&self, other: &Polynomial) -> Result<()> {
        if other.modulus != self.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        if other.vars != self.vars {
            return Err(Error::DimensionMismatch(self.vars, other.vars));
        }
        Ok(())
    }

    /// The indicator of a single point: evaluates to 1 at `a` and 0 elsewhere.
    ///
    /// Per coordinate, `1 - (x_i - a_i)^(q-1)` expands by the binomial theorem
    /// to `sum_k a_i^(q-1-k) x_i^k` because `C(q-1, k) = (-1)^k mod q`; the
    /// product over coordinates is already reduced.
    pub fn indicator(a: &Point) -> Polynomial {
        let q = a.modulus();
        let n = a.dim();
        let mut acc = Polynomial::constant(q, n, FieldElement::one(q));
        for i in 0..n {
            let ai = a.coord(i);
            // 1 - sum_k a^(q-1-k) x^k: the geometric sum is 1 off the point
            // and q·a^(q-1) = 0 on it (degenerating to x^(q-1) at a = 0)
            let mut factor = Polynomial::constant(q, n, FieldElement::one(q));
            for k in 0..q {
                let coeff = if ai.is_zero() {
                    if k == q - 1 {
                        FieldElement::one(q)
                    } else {
                        continue;
                    }
                } else {
                    ai.pow(q - 1 - k)
                };
                let mut exps = vec![0; n];
                exps[i] = k;
                factor.add_term(Monomial::from_raw(q, exps), coeff.neg());
            }
            acc = acc.multiply(&factor).expect("same space by construction");
        }
        acc
    }

    /// The unique reduced polynomial taking the prescribed values. The table
    /// must cover every point of the cube exactly once.
    pub fn interpolate(
        modulus: u64,
        vars: usize,
        values: &BTreeMap<Point, FieldElement>,
    ) -> Result<Polynomial> {
        let size = crate::checked_cube(modulus, vars)?;
        if values.len() as u64 != size {
            let missing = (0..size)
                .map(|i| Point::from_cube_index(modulus, vars, i))
                .find(|p| !values.contains_key(p))
                .expect("some point is missing when the table is short");
            return Err(Error::IncompleteTable(missing));
        }
        let mut acc = Polynomial::zero(modulus, vars);
        for (a, &v) in values {
            if a.modulus() != modulus {
                return Err(Error::ModulusMismatch(modulus, a.modulus()));
            }
            if a.dim() != vars {
                return Err(Error::DimensionMismatch(vars, a.dim()));
            }
            if v.is_zero() {
                continue;
            }
            acc = acc.add(&Polynomial::indicator(a).scale(v)?)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if m.total_degree() == 0 {
                write!(f, "{c}")?;
            } else if c.value() == 1 {
                write!(f, "{m}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exponents: Vec<u64>,
    coeff: u64,
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for (m, c) in &self.coeffs {
            seq.serialize_element(&TermRepr {
                exponents: m.exponents().to_vec(),
                coeff: c.value(),
            })?;
        }
        seq.end()
    }
}
