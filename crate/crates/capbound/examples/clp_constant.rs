//! The exponential base of the bound: `c(q) = q·e^(-I((q-1)/3))`, where `I`
//! is the rate function of the uniform variable on `{0, ..., q-1}`.
//!
//! For `q = 3` the optimizer has the closed form `e^θ = (√33-1)/8` and the
//! constant comes out strictly below 2.756.

use capbound::asymptotics::{clp_constant, rate_function};
use capbound::Result;

fn main() -> Result<()> {
    let r = clp_constant(3)?;
    println!("q = 3:");
    println!("  theta* = {:.12}", r.theta_star);
    println!(
        "  e^theta* = {:.12}  (closed form (sqrt(33)-1)/8 = {:.12})",
        r.theta_star.exp(),
        (33f64.sqrt() - 1.0) / 8.0
    );
    println!("  I(2/3) = {:.12}", r.rate);
    println!("  c(3)   = {:.12}  (< 2.756)", r.c.unwrap());

    println!("\nc(q) for small primes:");
    for q in [2u64, 3, 5, 7, 11, 13] {
        let r = clp_constant(q)?;
        println!(
            "  q = {q:>2}: c = {:.6}   c/q = {:.6}",
            r.c.unwrap(),
            r.c.unwrap() / q as f64
        );
    }

    println!("\nthe rate function across its range at q = 3:");
    for i in 0..=8 {
        let x = 2.0 * i as f64 / 8.0;
        let r = rate_function(3, x)?;
        println!(
            "  I({x:.2}) = {:.6}   theta* = {:+.4}",
            r.rate, r.theta_star
        );
    }
    Ok(())
}
