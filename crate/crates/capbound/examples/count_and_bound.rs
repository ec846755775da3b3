//! Exact monomial counting and the size bound it yields.
//!
//! `m_d` is the number of monomials in `n` variables with every exponent
//! below `q` and total degree at most `d`; the proven cap on a
//! progression-free set in `F_q^n` is `3·m_{(q-1)n/3}`.

use capbound::monomials::{count_monomials, count_monomials_above, RationalDegree};
use capbound::polymethod::theorem_bound;

fn main() {
    println!("m_d over F_3, three variables:");
    for d in 0..=6 {
        let count = count_monomials(3, 3, RationalDegree::from_integer(d));
        println!("  d = {d}: {count}");
    }

    // thresholds are exact rationals, so fractional degrees just work
    let d = RationalDegree::new(8, 3).unwrap();
    println!(
        "\nm_(8/3) over F_3, four variables: {}",
        count_monomials(3, 4, d)
    );
    println!(
        "degree strictly above 8/3:          {}",
        count_monomials_above(3, 4, d)
    );

    println!("\nupper bounds 3·m_((q-1)n/3) on progression-free sets in F_3^n:");
    for n in 1..=12 {
        println!("  n = {n:>2}: {}", theorem_bound(3, n));
    }

    // the same count at a scale where only big integers survive
    let n = 200;
    let bound = theorem_bound(3, n);
    println!("\nn = {n}: {bound}");
    println!(
        "({} decimal digits; 3^{n} has {})",
        bound.to_string().len(),
        {
            let mut v = capbound::BigCount::from(3u32);
            v = v.pow(n as u32);
            v.to_string().len()
        }
    );
}
