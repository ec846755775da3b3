//! Verifying progression-freeness, and what a failure witness looks like.
//!
//! The equation is `alpha·a1 + beta·a2 + gamma·a3 = 0` with
//! `alpha + beta + gamma = 0` and `gamma != 0`; classic 3-term progressions
//! are the case `(1, 1, 1)` over `F_3` (equivalently `a - 2b + c = 0`).

use capbound::capsearch::{find_progression, is_progression_free, sigma_set, PointSet};
use capbound::{CoefficientTriple, Result};

fn main() -> Result<()> {
    let t = CoefficientTriple::from_signed(3, 1, 1, 1)?;

    // the four "corners" of F_3^2 miss every line
    let cap = PointSet::from_coords(3, 2, &[vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]])?;
    println!(
        "corner set under (1,1,1): progression-free = {}",
        is_progression_free(&cap, &t)?
    );

    // a full coordinate line is as far from progression-free as it gets
    let line = PointSet::from_coords(3, 1, &[vec![0], vec![1], vec![2]])?;
    match find_progression(&line, &t)? {
        Some((a, b, c)) => println!("full line fails: {a} + {b} + {c} = 0"),
        None => unreachable!("a full line always contains a progression"),
    }

    // a degenerate equation (alpha = 0) ties a2 to a3 alone, so any two
    // distinct points already produce a witness with a2 = a3
    let t_deg = CoefficientTriple::from_signed(3, 0, 1, 2)?;
    match find_progression(&cap, &t_deg)? {
        Some(w) => println!("corner set under (0,1,2): witness {} {} {}", w.0, w.1, w.2),
        None => println!("corner set under (0,1,2): progression-free"),
    }

    // growing a set flips the verdict the moment a solution appears
    let t5 = CoefficientTriple::from_signed(5, 1, 1, 3)?;
    let small = PointSet::from_coords(5, 1, &[vec![1], vec![2]])?;
    println!(
        "{{1,2}} in F_5 under (1,1,3): progression-free = {}",
        is_progression_free(&small, &t5)?
    );
    let grown = PointSet::from_coords(5, 1, &[vec![0], vec![1], vec![2]])?;
    match find_progression(&grown, &t5)? {
        Some(w) => println!(
            "{{0,1,2}} in F_5 under (1,1,3): witness {} {} {}",
            w.0, w.1, w.2
        ),
        None => println!("{{0,1,2}} in F_5 under (1,1,3): progression-free"),
    }

    // the verifier is equivalent to a disjointness test: A is free iff
    // {alpha·a + beta·a' : a != a'} misses the scaled copy -gamma·A
    let sigma = sigma_set(&cap, t.alpha(), t.beta())?;
    let scaled = cap.scale(t.neg_gamma())?;
    let hit = sigma.iter().any(|p| scaled.contains(p));
    println!(
        "sigma set of the corner set has {} points, meets -gamma·A: {hit}",
        sigma.len()
    );

    // sets travel as JSON: {"n": ..., "points": [[...], ...], "q": ...}
    let json = serde_json::to_string(&cap)?;
    println!("\nset file form: {json}");
    let back: PointSet = serde_json::from_str(&json)?;
    assert_eq!(back.points(), cap.points());
    Ok(())
}
