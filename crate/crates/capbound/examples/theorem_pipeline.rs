//! The end-to-end bound argument executed on a concrete maximum set.
//!
//! Starting from a progression-free `A` in `F_3^3`, build the space `V` of
//! polynomials of degree at most `d = 2(q-1)n/3` vanishing off `-gamma·A`,
//! extract an element of maximal support, and chain the inequalities
//! `|A| <= 2·m_{d/2} + (q^n - m_d) <= 3·m_{(q-1)n/3}`.

use capbound::capsearch::exhaustive_max;
use capbound::monomials::RationalDegree;
use capbound::polymethod::{max_support_element, vanishing_space, verify_theorem_pipeline};
use capbound::{CoefficientTriple, Result};

fn main() -> Result<()> {
    let (q, n) = (3u64, 3usize);
    let t = CoefficientTriple::from_signed(q, 1, 1, 1)?;

    // certify a maximum set first; in F_3^3 the answer is 9
    let search = exhaustive_max(q, n, &t, None)?;
    println!(
        "maximum progression-free set in F_3^3: {} points (optimal = {})",
        search.best_size, search.optimal
    );
    let a = &search.witness;

    let report = verify_theorem_pipeline(a, &t)?;
    println!("\npipeline report:");
    println!("{}", serde_json::to_string_pretty(&report)?);
    assert!(report.pass);

    // the intermediate objects are available on their own
    let d = RationalDegree::pipeline_degree(q, n);
    let target = a.scale(t.neg_gamma())?;
    let basis = vanishing_space(q, n, d, &target)?;
    let p = max_support_element(&basis)?;
    let support: Vec<_> = target
        .iter()
        .filter(|x| !p.evaluate(x).unwrap().is_zero())
        .collect();
    println!(
        "V has dimension {}; its max-support element is nonzero at {} of the {} target points",
        basis.len(),
        support.len(),
        target.len()
    );
    Ok(())
}
