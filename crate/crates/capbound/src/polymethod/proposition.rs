//! The diagonal-rank argument: for `P` of degree at most `d` vanishing on all
//! mixed combinations `alpha·a1 + beta·a2` of a set `A`, the `A × A` matrix
//! `B[i][j] = P(alpha·a_i + beta·a_j)` is diagonal, and both its rank and its
//! nonzero-diagonal count are at most `2·m_{d/2}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::capsearch::{greedy_random, sigma_set, PointSet};
use crate::ffield::{CoefficientTriple, FieldElement};
use crate::monomials::{big_string, count_monomials, BigCount, RationalDegree};
use crate::polymethod::linalg::FMatrix;
use crate::polymethod::poly::Polynomial;
use crate::polymethod::theorem::vanishing_space;
use crate::{Error, Result};

/// Outcome of one diagonal-rank check. Fields are declared in serialized
/// (sorted-key) order. The bound compares against both the matrix rank and
/// the nonzero-diagonal count; `setSize` and `n` are reported so consumers
/// can inspect either form of the smallness condition.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PropositionReport {
    #[serde(with = "big_string")]
    pub bound: BigCount,
    pub d_used: RationalDegree,
    pub is_diagonal: bool,
    pub n: usize,
    pub nonzero_diagonal: usize,
    pub pass: bool,
    pub q: u64,
    pub rank: usize,
    pub set_size: usize,
}

/// The matrix `B[i][j] = P(alpha·a_i + beta·a_j)` over the set's canonical
/// (lexicographic) point order.
pub fn build_matrix(
    p: &Polynomial,
    set: &PointSet,
    alpha: FieldElement,
    beta: FieldElement,
) -> Result<FMatrix> {
    let q = p.modulus();
    if set.modulus() != q || alpha.modulus() != q || beta.modulus() != q {
        return Err(Error::ModulusMismatch(q, set.modulus()));
    }
    if set.vars() != p.vars() {
        return Err(Error::DimensionMismatch(p.vars(), set.vars()));
    }
    let k = set.len();
    let mut b = FMatrix::zero(q, k, k);
    for (i, ai) in set.iter().enumerate() {
        let ai_scaled = ai.scale(alpha)?;
        for (j, aj) in set.iter().enumerate() {
            let arg = ai_scaled.translate(&aj.scale(beta)?)?;
            b.set(i, j, p.evaluate(&arg)?);
        }
    }
    Ok(b)
}

/// Verifies the vanishing hypothesis, builds `B`, and reports diagonality,
/// rank, and the count of nonzero diagonal entries against `2·m_{d/2}`.
///
/// The hypothesis is checked, not assumed: a mixed combination where `P` is
/// nonzero aborts with that witness pair, since every conclusion below would
/// be junk otherwise.
pub fn check_proposition(
    p: &Polynomial,
    set: &PointSet,
    t: &CoefficientTriple,
    d: RationalDegree,
) -> Result<PropositionReport> {
    let q = p.modulus();
    if t.modulus() != q {
        return Err(Error::ModulusMismatch(q, t.modulus()));
    }
    if let Some(deg) = p.degree() {
        if !d.admits(deg) {
            return Err(Error::DegreeTooHigh {
                degree: deg,
                bound: d,
            });
        }
    }
    for a1 in set {
        for a2 in set {
            if a1 == a2 {
                continue;
            }
            let mixed = t.combine(a1, a2)?;
            if !p.evaluate(&mixed)?.is_zero() {
                return Err(Error::HypothesisViolation {
                    a: a1.clone(),
                    b: a2.clone(),
                });
            }
        }
    }
    let b = build_matrix(p, set, t.alpha(), t.beta())?;
    let is_diagonal = b.is_diagonal();
    let rank = b.rank();
    // gamma = -(alpha + beta), so the diagonal entries are P(-gamma·a)
    let neg_gamma = t.neg_gamma();
    let mut nonzero_diagonal = 0;
    for a in set {
        if !p.evaluate(&a.scale(neg_gamma)?)?.is_zero() {
            nonzero_diagonal += 1;
        }
    }
    let bound = count_monomials(q, set.vars(), d.half()) * BigCount::from(2u32);
    let pass =
        BigCount::from(nonzero_diagonal as u64) <= bound && BigCount::from(rank as u64) <= bound;
    Ok(PropositionReport {
        bound,
        d_used: d,
        is_diagonal,
        n: set.vars(),
        nonzero_diagonal,
        pass,
        q,
        rank,
        set_size: set.len(),
    })
}

/// Randomized instances of the check: a progression-free set from a greedy
/// pass, a polynomial sampled from the space vanishing on the set's mixed
/// combinations, and either the supplied degree or a random one. Reports are
/// deterministic for a fixed seed.
pub fn proposition_trials(
    q: u64,
    n: usize,
    d: Option<RationalDegree>,
    trials: u32,
    seed: u64,
) -> Result<Vec<PropositionReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports = Vec::with_capacity(trials as usize);
    for _ in 0..trials {
        let t = loop {
            let alpha = rng.gen_range(0..q) as i64;
            let beta = rng.gen_range(0..q) as i64;
            let candidate = CoefficientTriple::from_signed(q, alpha, beta, -(alpha + beta))?;
            if !candidate.gamma().is_zero() {
                break candidate;
            }
        };
        let set = greedy_random(q, n, &t, rng.gen(), 2)?.witness;
        let d_used = match d {
            Some(d) => d,
            None => RationalDegree::from(rng.gen_range(0..=(q - 1) * n as u64)),
        };
        // polynomials of degree <= d vanishing on every mixed combination:
        // the vanishing space whose allowed support is everything else
        let mixed = sigma_set(&set, t.alpha(), t.beta())?;
        let basis = vanishing_space(q, n, d_used, &mixed.complement()?)?;
        let mut p = Polynomial::zero(q, n);
        for b in &basis {
            let c = FieldElement::from_residue(rng.gen_range(0..q), q);
            p = p.add(&b.scale(c)?)?;
        }
        reports.push(check_proposition(&p, &set, &t, d_used)?);
    }
    Ok(reports)
}
