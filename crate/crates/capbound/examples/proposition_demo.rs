//! The diagonal-rank mechanism, run on a concrete instance.
//!
//! Pick a progression-free set `A` and a polynomial `P` of degree at most `d`
//! vanishing on every mixed combination `alpha·a1 + beta·a2` (`a1 != a2`).
//! Then the matrix `B[i][j] = P(alpha·a_i + beta·a_j)` is diagonal, and both
//! its rank and nonzero-diagonal count are capped by `2·m_{d/2}`.

use capbound::capsearch::{greedy_random, sigma_set};
use capbound::monomials::RationalDegree;
use capbound::polymethod::{
    build_matrix, check_proposition, compose_affine_pair, proposition_trials, split_decomposition,
    vanishing_space,
};
use capbound::{CoefficientTriple, Result};

fn main() -> Result<()> {
    let (q, n) = (3u64, 2usize);
    let t = CoefficientTriple::from_signed(q, 1, 1, 1)?;
    let a = greedy_random(q, n, &t, 3, 40)?.witness;
    println!("set A ({} points): {}", a.len(), serde_json::to_string(&a)?);

    // polynomials vanishing on the mixed combinations, up to degree d
    let d = RationalDegree::from_integer(2);
    let mixed = sigma_set(&a, t.alpha(), t.beta())?;
    let basis = vanishing_space(q, n, d, &mixed.complement()?)?;
    println!(
        "space vanishing on the {} mixed points: dim {}",
        mixed.len(),
        basis.len()
    );

    let p = &basis[0];
    println!("P = {p}");

    let b = build_matrix(p, &a, t.alpha(), t.beta())?;
    print!("B = P(alpha·a_i + beta·a_j) over A x A:");
    for i in 0..a.len() {
        print!("\n   ");
        for j in 0..a.len() {
            print!(" {}", b.get(i, j));
        }
    }
    println!();

    let report = check_proposition(p, &a, &t, d)?;
    println!("report: {}", serde_json::to_string(&report)?);

    // the rank cap comes from a bilinear split: P(alpha·x + beta·y) is a sum
    // of products indexed by monomials of degree at most d/2
    let expansion = compose_affine_pair(p, t.alpha(), t.beta(), d)?;
    let split = split_decomposition(&expansion, d)?;
    println!(
        "bilinear split: {} monomials on the x side, {} on the y side (cap 2·m_(d/2) = {})",
        split.x_side().len(),
        split.y_side().len(),
        report.bound
    );

    // randomized instances of the same check
    let reports = proposition_trials(q, 2, None, 5, 11)?;
    let passed = reports.iter().filter(|r| r.pass).count();
    println!("\n5 randomized trials at q = 3, n = 2: {passed} passed");
    Ok(())
}
