//! Expansion of `P(alpha·x + beta·y)` into pairs of monomials, and the split
//! of that expansion into low-degree-indexed rank-one pieces.
//!
//! Since every exponent of `P` is at most `q - 1`, the binomial expansion of
//! `(alpha·x_i + beta·y_i)^(e_i)` never needs exponent reduction, and every
//! term `m(x)·m'(y)` keeps `deg(m) + deg(m') <= deg(P)`.

use std::collections::BTreeMap;

use crate::ffield::{FieldElement, Point};
use crate::monomials::{Monomial, RationalDegree};
use crate::polymethod::poly::Polynomial;
use crate::{Error, Result};

/// `P(alpha·x + beta·y)` written as a sum of `c · m(x) · m'(y)` terms, kept
/// sorted by `(m, m')`. Only nonzero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearExpansion {
    modulus: u64,
    vars: usize,
    degree_bound: RationalDegree,
    terms: Vec<(Monomial, Monomial, FieldElement)>,
}

impl BilinearExpansion {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn degree_bound(&self) -> RationalDegree {
        self.degree_bound
    }

    pub fn terms(&self) -> &[(Monomial, Monomial, FieldElement)] {
        &self.terms
    }

    /// Evaluates the expansion at a pair of points.
    pub fn evaluate(&self, a: &Point, b: &Point) -> Result<FieldElement> {
        let mut acc = FieldElement::zero(self.modulus);
        for (m, m2, c) in &self.terms {
            acc = acc.add(c.mul(m.eval(a)?).mul(m2.eval(b)?));
        }
        Ok(acc)
    }
}

/// Binomial coefficients `C(e, 0..=e)` in `F_q`; valid because `e < q` keeps
/// every divisor `j + 1` invertible.
fn binomial_row(e: u64, q: u64) -> Vec<FieldElement> {
    let mut row = Vec::with_capacity(e as usize + 1);
    let mut b = FieldElement::one(q);
    row.push(b);
    for j in 0..e {
        let num = FieldElement::from_residue(e - j, q);
        let den = FieldElement::from_residue(j + 1, q)
            .inv()
            .expect("j + 1 < q");
        b = b.mul(num).mul(den);
        row.push(b);
    }
    row
}

/// Expands `P(alpha·x + beta·y)` term by term. The stated degree bound must
/// admit `deg(P)`; it is recorded on the expansion for the later split.
pub fn compose_affine_pair(
    p: &Polynomial,
    alpha: FieldElement,
    beta: FieldElement,
    degree_bound: RationalDegree,
) -> Result<BilinearExpansion> {
    let q = p.modulus();
    let n = p.vars();
    if alpha.modulus() != q {
        return Err(Error::ModulusMismatch(q, alpha.modulus()));
    }
    if beta.modulus() != q {
        return Err(Error::ModulusMismatch(q, beta.modulus()));
    }
    if let Some(deg) = p.degree() {
        if !degree_bound.admits(deg) {
            return Err(Error::DegreeTooHigh {
                degree: deg,
                bound: degree_bound,
            });
        }
    }

    let mut acc: BTreeMap<(Monomial, Monomial), FieldElement> = BTreeMap::new();
    for (m, c) in p.terms() {
        // partial expansions over a prefix of the variables
        let mut partial: Vec<(Vec<u64>, Vec<u64>, FieldElement)> =
            vec![(Vec::new(), Vec::new(), c)];
        for &e in m.exponents() {
            let binom = binomial_row(e, q);
            let mut next = Vec::with_capacity(partial.len() * (e as usize + 1));
            for (xe, ye, coeff) in &partial {
                for j in 0..=e {
                    let w = coeff
                        .mul(binom[j as usize])
                        .mul(alpha.pow(j))
                        .mul(beta.pow(e - j));
                    if w.is_zero() {
                        continue;
                    }
                    let mut xs = xe.clone();
                    let mut ys = ye.clone();
                    xs.push(j);
                    ys.push(e - j);
                    next.push((xs, ys, w));
                }
            }
            partial = next;
        }
        for (xe, ye, coeff) in partial {
            // n = 0 or alpha = beta = 0 can leave exponent stubs short
            let mut xs = xe;
            let mut ys = ye;
            xs.resize(n, 0);
            ys.resize(n, 0);
            let key = (Monomial::from_raw(q, xs), Monomial::from_raw(q, ys));
            let entry = acc.entry(key).or_insert_with(|| FieldElement::zero(q));
            *entry = entry.add(coeff);
        }
    }
    let terms = acc
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((m, m2), c)| (m, m2, c))
        .collect();
    Ok(BilinearExpansion {
        modulus: q,
        vars: n,
        degree_bound,
        terms,
    })
}

/// The expansion regrouped as `sum m(x)·F_m(y) + sum m'(y)·G_m'(x)` with every
/// index monomial of degree at most `d/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitDecomposition {
    modulus: u64,
    vars: usize,
    half: RationalDegree,
    x_side: BTreeMap<Monomial, Polynomial>,
    y_side: BTreeMap<Monomial, Polynomial>,
}

impl SplitDecomposition {
    pub fn half_degree(&self) -> RationalDegree {
        self.half
    }

    /// Index monomials `m` of degree <= d/2 with their cofactors `F_m` (in y).
    pub fn x_side(&self) -> &BTreeMap<Monomial, Polynomial> {
        &self.x_side
    }

    /// Index monomials `m'` of degree <= d/2 with their cofactors `G_m'` (in x).
    pub fn y_side(&self) -> &BTreeMap<Monomial, Polynomial> {
        &self.y_side
    }

    /// Total number of index monomials: the rank-one piece count.
    pub fn index_count(&self) -> usize {
        self.x_side.len() + self.y_side.len()
    }

    /// Flattens back to `(m, m', c)` terms, sorted, for comparison against the
    /// source expansion.
    pub fn recombine(&self) -> Vec<(Monomial, Monomial, FieldElement)> {
        let mut terms = Vec::new();
        for (m, f) in &self.x_side {
            for (m2, c) in f.terms() {
                terms.push((m.clone(), m2.clone(), c));
            }
        }
        for (m2, g) in &self.y_side {
            for (m, c) in g.terms() {
                terms.push((m.clone(), m2.clone(), c));
            }
        }
        terms.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
        terms
    }
}

/// Routes each term of the expansion by which factor has degree at most
/// `d/2`; ties go to the x side so the output is a function of the input.
pub fn split_decomposition(
    exp: &BilinearExpansion,
    d: RationalDegree,
) -> Result<SplitDecomposition> {
    let half = d.half();
    let q = exp.modulus;
    let n = exp.vars;
    let mut x_side: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
    let mut y_side: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
    for (m, m2, c) in &exp.terms {
        if half.admits(m.total_degree()) {
            x_side
                .entry(m.clone())
                .or_insert_with(|| Polynomial::zero(q, n))
                .add_term(m2.clone(), *c);
        } else if half.admits(m2.total_degree()) {
            y_side
                .entry(m2.clone())
                .or_insert_with(|| Polynomial::zero(q, n))
                .add_term(m.clone(), *c);
        } else {
            return Err(Error::UnsplittableTerm(m.clone(), m2.clone()));
        }
    }
    Ok(SplitDecomposition {
        modulus: q,
        vars: n,
        half,
        x_side,
        y_side,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::enumerate_points;
    use crate::monomials::{count_monomials, BigCount};

    fn fe(v: i64, q: u64) -> FieldElement {
        FieldElement::new(v, q).unwrap()
    }

    fn mono(q: u64, exps: &[u64]) -> Monomial {
        Monomial::new(q, exps.to_vec()).unwrap()
    }

    fn poly(q: u64, terms: &[(&[u64], i64)]) -> Polynomial {
        Polynomial::from_terms(
            q,
            terms.first().map_or(0, |(e, _)| e.len()),
            terms.iter().map(|&(e, c)| (mono(q, e), fe(c, q))),
        )
        .unwrap()
    }

    #[test]
    fn linear_polynomial_splits_into_two_terms() {
        // P = x, alpha = beta = 1
        let p = poly(3, &[(&[1], 1)]);
        let exp = compose_affine_pair(&p, fe(1, 3), fe(1, 3), RationalDegree::from(1u64)).unwrap();
        assert_eq!(
            exp.terms(),
            &[
                (mono(3, &[0]), mono(3, &[1]), fe(1, 3)),
                (mono(3, &[1]), mono(3, &[0]), fe(1, 3)),
            ]
        );
    }

    #[test]
    fn square_expands_binomially() {
        // P = x^2, alpha = beta = 1, q = 3: x^2 + 2xy + y^2
        let p = poly(3, &[(&[2], 1)]);
        let d = RationalDegree::from(2u64);
        let exp = compose_affine_pair(&p, fe(1, 3), fe(1, 3), d).unwrap();
        assert_eq!(
            exp.terms(),
            &[
                (mono(3, &[0]), mono(3, &[2]), fe(1, 3)),
                (mono(3, &[1]), mono(3, &[1]), fe(2, 3)),
                (mono(3, &[2]), mono(3, &[0]), fe(1, 3)),
            ]
        );
        // alpha = beta = 2 gives 4(x+y)^2 = (x+y)^2 mod 3
        let exp2 = compose_affine_pair(&p, fe(2, 3), fe(2, 3), d).unwrap();
        assert_eq!(exp.terms(), exp2.terms());
    }

    #[test]
    fn expansion_evaluates_like_the_composition() {
        let q = 3;
        let p = poly(q, &[(&[2, 1], 1), (&[1, 0], 2), (&[0, 2], 1), (&[0, 0], 2)]);
        let d = RationalDegree::from(3u64);
        for (a_val, b_val) in [(1i64, 1i64), (1, 2), (2, 1), (0, 2)] {
            let alpha = fe(a_val, q);
            let beta = fe(b_val, q);
            let exp = compose_affine_pair(&p, alpha, beta, d).unwrap();
            for a in enumerate_points(q, 2).unwrap() {
                for b in enumerate_points(q, 2).unwrap() {
                    let shifted = a
                        .scale(alpha)
                        .unwrap()
                        .translate(&b.scale(beta).unwrap())
                        .unwrap();
                    assert_eq!(
                        exp.evaluate(&a, &b).unwrap(),
                        p.evaluate(&shifted).unwrap(),
                        "alpha={a_val} beta={b_val} a={a} b={b}"
                    );
                }
            }
        }
    }

    #[test]
    fn degree_bookkeeping_holds_per_term() {
        let q = 5;
        let p = poly(q, &[(&[4, 3], 2), (&[2, 2], 1), (&[1, 0], 3)]);
        let deg = p.degree().unwrap();
        let exp = compose_affine_pair(&p, fe(2, q), fe(3, q), RationalDegree::from(deg)).unwrap();
        for (m, m2, c) in exp.terms() {
            assert!(m.total_degree() + m2.total_degree() <= deg);
            assert!(!c.is_zero());
        }
    }

    #[test]
    fn rejects_degree_overflow() {
        let p = poly(3, &[(&[2], 1)]);
        let err = compose_affine_pair(&p, fe(1, 3), fe(1, 3), RationalDegree::new(3, 2).unwrap());
        assert!(matches!(err, Err(Error::DegreeTooHigh { degree: 2, .. })));
    }

    #[test]
    fn zero_polynomial_gives_empty_expansion_and_split() {
        let p = Polynomial::zero(3, 2);
        let d = RationalDegree::from(4u64);
        let exp = compose_affine_pair(&p, fe(1, 3), fe(1, 3), d).unwrap();
        assert!(exp.terms().is_empty());
        let split = split_decomposition(&exp, d).unwrap();
        assert_eq!(split.index_count(), 0);
        assert!(split.recombine().is_empty());
    }

    #[test]
    fn forced_routing_of_a_linear_term() {
        // P = x, d = 1: (x, 1) must go to the y side, (1, y) to the x side
        let p = poly(3, &[(&[1], 1)]);
        let d = RationalDegree::from(1u64);
        let exp = compose_affine_pair(&p, fe(1, 3), fe(1, 3), d).unwrap();
        let split = split_decomposition(&exp, d).unwrap();
        let one = mono(3, &[0]);
        assert_eq!(split.x_side().len(), 1);
        assert_eq!(split.y_side().len(), 1);
        assert_eq!(split.x_side()[&one], poly(3, &[(&[1], 1)]));
        assert_eq!(split.y_side()[&one], poly(3, &[(&[1], 1)]));
        // both indices are the constant monomial, within the 2·m_{1/2} = 2 budget
        assert_eq!(split.index_count(), 2);
    }

    #[test]
    fn ties_route_to_the_x_side() {
        // P = x^2 at d = 4: the (x, y) term has both degrees <= 2, so it must
        // land on the x side
        let p = poly(3, &[(&[2], 1)]);
        let d = RationalDegree::from(4u64);
        let exp = compose_affine_pair(&p, fe(1, 3), fe(1, 3), d).unwrap();
        let split = split_decomposition(&exp, d).unwrap();
        assert!(split.y_side().is_empty());
        assert_eq!(split.x_side().len(), 3);
    }

    #[test]
    fn split_recombines_and_respects_index_budget() {
        let q = 3;
        let polys = [
            poly(q, &[(&[2, 1], 1), (&[1, 1], 2), (&[0, 0], 1)]),
            poly(q, &[(&[2, 2], 2)]),
            poly(q, &[(&[1, 0], 1), (&[0, 1], 1)]),
        ];
        for p in &polys {
            let d = RationalDegree::from(p.degree().unwrap());
            for (av, bv) in [(1i64, 1i64), (2, 1), (1, 2)] {
                let exp = compose_affine_pair(p, fe(av, q), fe(bv, q), d).unwrap();
                let split = split_decomposition(&exp, d).unwrap();
                assert_eq!(split.recombine(), exp.terms().to_vec());
                for m in split.x_side().keys().chain(split.y_side().keys()) {
                    assert!(d.half().admits(m.total_degree()));
                }
                let budget = count_monomials(q, 2, d.half()) * BigCount::from(2u32);
                assert!(BigCount::from(split.index_count() as u64) <= budget);
            }
        }
    }

    #[test]
    fn odd_integer_degrees_use_the_exact_half() {
        // d = 3, d/2 = 3/2: degree-1 indices admitted, degree-2 not
        let q = 3;
        let p = poly(q, &[(&[2, 1], 1)]);
        let d = RationalDegree::from(3u64);
        let exp = compose_affine_pair(&p, fe(1, q), fe(1, q), d).unwrap();
        let split = split_decomposition(&exp, d).unwrap();
        for m in split.x_side().keys().chain(split.y_side().keys()) {
            assert!(m.total_degree() <= 1);
        }
        assert_eq!(split.recombine(), exp.terms().to_vec());
    }
}
