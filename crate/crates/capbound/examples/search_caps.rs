//! Searching for large progression-free sets, exactly and greedily, and
//! comparing what is found against the proven ceiling.

use capbound::capsearch::{exhaustive_max, greedy_random, PointSet};
use capbound::polymethod::theorem_bound;
use capbound::{CoefficientTriple, Result};

fn main() -> Result<()> {
    let t = CoefficientTriple::from_signed(3, 1, 1, 1)?;

    println!("exact maxima in F_3^n (branch and bound over the whole cube):");
    for n in 1..=3 {
        let r = exhaustive_max(3, n, &t, None)?;
        println!(
            "  n = {n}: max = {:>2}  bound = {:>2}  ({} nodes, optimal = {})",
            r.best_size,
            theorem_bound(3, n),
            r.nodes_explored,
            r.optimal
        );
    }

    // a node budget turns the exact search into a best-effort one
    let r = exhaustive_max(3, 4, &t, Some(20_000))?;
    println!(
        "  n = 4 under a 20k-node budget: found {} (optimal = {})",
        r.best_size, r.optimal
    );

    println!("\nseeded greedy passes in F_3^5 (cube has 243 points):");
    for seed in 0..4 {
        let r = greedy_random(3, 5, &t, seed, 200)?;
        println!(
            "  seed {seed}: best = {}  of bound {}",
            r.best_size,
            theorem_bound(3, 5)
        );
    }

    // witnesses are ordinary point sets, ready to be saved or re-verified
    let r = greedy_random(3, 2, &t, 1, 50)?;
    let witness: &PointSet = &r.witness;
    println!(
        "\na maximum witness in F_3^2: {}",
        serde_json::to_string(witness)?
    );

    // the same machinery covers other equations; (1, -2, 1) are genuine
    // arithmetic progressions, and over F_5 those behave differently
    let t5 = CoefficientTriple::from_signed(5, 1, -2, 1)?;
    let r = exhaustive_max(5, 2, &t5, None)?;
    println!("max 3-AP-free size in F_5^2: {} (cube 25)", r.best_size);
    Ok(())
}
