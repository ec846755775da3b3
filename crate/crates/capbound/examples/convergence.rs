//! How fast the exact counts approach their large-deviations limit.
//!
//! The bound `3·m_{(q-1)n/3}` grows like `c(q)^n`; concretely,
//! `(1/n)·log(m_{(q-1)n/3} / q^n)` converges to `-I((q-1)/3)`. The exact
//! big-integer counts make the gap measurable at any `n`.

use capbound::asymptotics::{clp_constant, convergence_report};
use capbound::Result;

fn main() -> Result<()> {
    let q = 3;
    let rows = convergence_report(q, &[3, 9, 27, 81, 243, 729, 999])?;
    println!("q = {q}   limit = -I(2/3) = {:.9}\n", rows[0].limit);
    println!("{:>5}  {:>14}  {:>12}", "n", "exact log", "gap");
    for row in &rows {
        println!("{:>5}  {:>14.9}  {:>12.9}", row.n, row.exact_log, row.gap);
    }

    let c = clp_constant(q)?.c.unwrap();
    println!("\nso m_(2n/3) ~ 3^n·e^(-n·I), and 3·m_(2n/3) = O({c:.6}^n)");
    Ok(())
}
