//! Acceptance gate for the crate's headline guarantees. Each test checks one
//! numbered criterion and prints a single `criterion N (...): pass|fail`
//! line; run with `cargo test --test acceptance -- --nocapture` to see all
//! lines at once.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use capbound::asymptotics::{clp_constant, convergence_report};
use capbound::capsearch::{
    exhaustive_max, find_progression, is_progression_free, sigma_set, PointSet,
};
use capbound::ffield::enumerate_points;
use capbound::monomials::{count_monomials, count_monomials_above};
use capbound::polymethod::{
    max_support_element, proposition_trials, theorem_bound, vanishing_space, Polynomial,
};
use capbound::{BigCount, CoefficientTriple, FieldElement, Point, RationalDegree};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn criterion(id: u32, label: &str, failures: Vec<String>) {
    let ok = failures.is_empty();
    println!(
        "criterion {id} ({label}): {}",
        if ok { "pass" } else { "fail" }
    );
    assert!(ok, "criterion {id} ({label}) failures: {failures:#?}");
}

fn big(v: u64) -> BigCount {
    BigCount::from(v)
}

#[test]
fn criterion_1_constant_reproduction() {
    let start = Instant::now();
    let r = clp_constant(3).unwrap();
    let elapsed = start.elapsed();

    let mut failures = Vec::new();
    let c = r.c.unwrap_or(f64::NAN);
    if !(2.7550 < c && c < 2.756) {
        failures.push(format!("c = {c} outside (2.7550, 2.756)"));
    }
    let closed_form = (33f64.sqrt() - 1.0) / 8.0;
    let e_theta = r.theta_star.exp();
    if !((e_theta - closed_form).abs() < 1e-9) {
        failures.push(format!(
            "e^theta* = {e_theta}, want {closed_form} within 1e-9"
        ));
    }
    if elapsed >= Duration::from_secs(1) {
        failures.push(format!("took {elapsed:?}, limit 1 s"));
    }
    criterion(1, "constant reproduction", failures);
}

/// Number of q-power-free exponent tuples at each total degree, by walking
/// all q^n tuples with an odometer. Independent of the windowed-sum counter.
fn degree_histogram(q: u64, n: usize) -> Vec<u64> {
    let mut hist = vec![0u64; (q as usize - 1) * n + 1];
    let mut exps = vec![0u64; n];
    loop {
        hist[exps.iter().sum::<u64>() as usize] += 1;
        let mut i = 0;
        loop {
            if i == n {
                return hist;
            }
            exps[i] += 1;
            if exps[i] < q {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn criterion_2_exact_counting_matches_enumeration() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for q in [2u64, 3, 5, 7] {
        for n in 0..=6usize {
            let hist = degree_histogram(q, n);
            let top = ((q - 1) * n as u64) as i64;
            let mut prefix = BigCount::default();
            for d in -2..=top + 2 {
                if (0..=top).contains(&d) {
                    prefix += big(hist[d as usize]);
                }
                let got = count_monomials(q, n, RationalDegree::from_integer(d));
                if got != prefix {
                    failures.push(format!("q={q} n={n} d={d}: {got} != {prefix}"));
                }
            }
        }
    }
    if start.elapsed() >= Duration::from_secs(60) {
        failures.push(format!("took {:?}, limit 1 min", start.elapsed()));
    }
    criterion(2, "exact counting oracle equivalence", failures);
}

#[test]
fn criterion_3_reflection_identity() {
    let mut failures = Vec::new();
    for q in [2u64, 3, 5] {
        for n in 0..=8usize {
            let top = ((q - 1) * n as u64) as i64;
            for d in -2..=top + 2 {
                let above = count_monomials_above(q, n, RationalDegree::from_integer(d));
                let below = count_monomials(q, n, RationalDegree::from_integer(top - d - 1));
                if above != below {
                    failures.push(format!("q={q} n={n} d={d}: {above} != {below}"));
                }
            }
        }
    }
    criterion(3, "reflection identity", failures);
}

#[test]
fn criterion_4_exhaustive_ladder_under_closed_bound() {
    let t = CoefficientTriple::from_signed(3, 1, 1, 1).unwrap();
    let maxima = [2usize, 4, 9, 20];
    let bounds = [3u64, 9, 30, 45];
    let mut failures = Vec::new();
    for (i, (&want, &bound)) in maxima.iter().zip(&bounds).enumerate() {
        let n = i + 1;
        let start = Instant::now();
        let got = exhaustive_max(3, n, &t, None).unwrap();
        let elapsed = start.elapsed();
        if got.best_size != want {
            failures.push(format!("n={n}: maximum {} != {want}", got.best_size));
        }
        if !got.optimal {
            failures.push(format!("n={n}: search did not finish"));
        }
        if !is_progression_free(&got.witness, &t).unwrap() {
            failures.push(format!("n={n}: witness has a progression"));
        }
        let closed = theorem_bound(3, n);
        if closed != big(bound) {
            failures.push(format!("n={n}: closed bound {closed} != {bound}"));
        }
        if big(got.best_size as u64) > closed {
            failures.push(format!("n={n}: maximum exceeds the closed bound"));
        }
        if n == 4 && elapsed >= Duration::from_secs(600) {
            failures.push(format!("n=4 took {elapsed:?}, limit 10 min"));
        }
    }
    criterion(4, "exhaustive maxima under the closed-form bound", failures);
}

#[test]
fn criterion_5_diagonal_rank_property_suite() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut total = 0usize;
    for q in [3u64, 5] {
        for n in [1usize, 2, 3] {
            let reports = proposition_trials(q, n, None, 35, 1000 + 10 * q + n as u64).unwrap();
            total += reports.len();
            for (i, r) in reports.iter().enumerate() {
                if !r.is_diagonal {
                    failures.push(format!("q={q} n={n} trial {i}: matrix not diagonal"));
                }
                if big(r.rank as u64) > r.bound {
                    failures.push(format!(
                        "q={q} n={n} trial {i}: rank {} > {}",
                        r.rank, r.bound
                    ));
                }
                if big(r.nonzero_diagonal as u64) > r.bound {
                    failures.push(format!(
                        "q={q} n={n} trial {i}: diagonal count {} > {}",
                        r.nonzero_diagonal, r.bound
                    ));
                }
                if !r.pass {
                    failures.push(format!("q={q} n={n} trial {i}: report failed"));
                }
            }
        }
    }
    if total < 200 {
        failures.push(format!("only {total} trials, need at least 200"));
    }
    if start.elapsed() >= Duration::from_secs(120) {
        failures.push(format!("took {:?}, limit 2 min", start.elapsed()));
    }
    criterion(5, "diagonal rank bound property suite", failures);
}

#[test]
fn criterion_6_vanishing_space_and_max_support() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let combos = [(3u64, 1usize), (3, 2), (3, 3), (5, 1), (5, 2), (5, 3)];
    let mut failures = Vec::new();
    let mut with_support = 0usize;
    let mut sampled = 0usize;
    // keep sampling until 100 targets carried a nonzero space, so the
    // support inequality is exercised at least that often
    while with_support < 100 && sampled < 1000 {
        let (q, n) = combos[sampled % combos.len()];
        sampled += 1;
        let d = RationalDegree::from_integer(rng.gen_range(0..=(q - 1) * n as u64) as i64);
        let cube = enumerate_points(q, n).unwrap();
        let target_points: Vec<Point> =
            cube.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        let target = PointSet::from_points(q, n, target_points).unwrap();
        let basis = vanishing_space(q, n, d, &target).unwrap();
        let dim_v = basis.len();

        let m_d = count_monomials(q, n, d);
        let cube_size = big(q).pow(n as u32);
        let with_target = &m_d + big(target.len() as u64);
        let floor = if with_target > cube_size {
            &with_target - &cube_size
        } else {
            BigCount::default()
        };
        if big(dim_v as u64) < floor {
            failures.push(format!(
                "q={q} n={n} d={d:?}: dim {dim_v} under floor {floor}"
            ));
        }
        if dim_v == 0 {
            continue;
        }
        with_support += 1;
        let p = max_support_element(&basis).unwrap();
        let support = cube
            .iter()
            .filter(|a| !p.evaluate(a).unwrap().is_zero())
            .count();
        if support < dim_v {
            failures.push(format!(
                "q={q} n={n} d={d:?}: support {support} < dim {dim_v}"
            ));
        }
    }
    if with_support < 100 {
        failures.push(format!("only {with_support} targets with a nonzero space"));
    }
    if start.elapsed() >= Duration::from_secs(120) {
        failures.push(format!("took {:?}, limit 2 min", start.elapsed()));
    }
    criterion(6, "vanishing space dimension and max support", failures);
}

#[test]
fn criterion_7_large_deviations_convergence() {
    let start = Instant::now();
    let rows = convergence_report(3, &[9, 99, 999]).unwrap();
    let mut failures = Vec::new();
    if rows.len() != 3 {
        failures.push(format!("expected 3 rows, got {}", rows.len()));
    }
    for w in rows.windows(2) {
        if !(w[1].gap.abs() < w[0].gap.abs()) {
            failures.push(format!("|gap| grew from n={} to n={}", w[0].n, w[1].n));
        }
        if w[0].limit != w[1].limit {
            failures.push("limit column is not constant".into());
        }
    }
    if let Some(last) = rows.last() {
        if !(last.gap.abs() <= 0.01) {
            failures.push(format!("|gap(999)| = {} > 0.01", last.gap.abs()));
        }
        if (last.gap - (last.exact_log - last.limit)).abs() > 1e-15 {
            failures.push("gap is not exactLog - limit".into());
        }
    }
    if start.elapsed() >= Duration::from_secs(60) {
        failures.push(format!("took {:?}, limit 1 min", start.elapsed()));
    }
    criterion(7, "rate function convergence", failures);
}

#[test]
fn criterion_8_evaluation_isomorphism() {
    let start = Instant::now();
    let mut failures = Vec::new();

    // all 27 value tables on the 3-point line, exhaustively
    let line = enumerate_points(3, 1).unwrap();
    for code in 0..27u64 {
        let mut rest = code;
        let mut values = BTreeMap::new();
        for p in &line {
            values.insert(p.clone(), FieldElement::new((rest % 3) as i64, 3).unwrap());
            rest /= 3;
        }
        let poly = Polynomial::interpolate(3, 1, &values).unwrap();
        for p in &line {
            if poly.evaluate(p).unwrap() != values[p] {
                failures.push(format!("table {code} read back wrong at {p}"));
            }
        }
        if poly.degree().unwrap_or(0) > 2 {
            failures.push(format!("table {code}: interpolant is not reduced"));
        }
    }

    // randomized tables across larger cubes
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let combos = [(3u64, 1usize), (3, 2), (3, 3), (5, 1), (5, 2), (5, 3)];
    for trial in 0..102usize {
        let (q, n) = combos[trial % combos.len()];
        let cube = enumerate_points(q, n).unwrap();
        let values: BTreeMap<Point, FieldElement> = cube
            .iter()
            .map(|p| {
                (
                    p.clone(),
                    FieldElement::new(rng.gen_range(0..q) as i64, q).unwrap(),
                )
            })
            .collect();
        let poly = Polynomial::interpolate(q, n, &values).unwrap();
        for p in &cube {
            if poly.evaluate(p).unwrap() != values[p] {
                failures.push(format!("trial {trial} q={q} n={n}: wrong value at {p}"));
            }
        }
        if poly.degree().unwrap_or(0) > (q - 1) * n as u64 {
            failures.push(format!(
                "trial {trial} q={q} n={n}: interpolant is not reduced"
            ));
        }
    }
    if start.elapsed() >= Duration::from_secs(60) {
        failures.push(format!("took {:?}, limit 1 min", start.elapsed()));
    }
    criterion(8, "evaluation isomorphism round trip", failures);
}

#[test]
fn criterion_9_verifier_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let combos = [(3u64, 1usize), (3, 2), (3, 3), (5, 1), (5, 2), (5, 3)];
    let mut failures = Vec::new();
    for trial in 0..500usize {
        let (q, n) = combos[trial % combos.len()];
        let t = loop {
            let alpha = rng.gen_range(0..q) as i64;
            let beta = rng.gen_range(0..q) as i64;
            let candidate =
                CoefficientTriple::from_signed(q, alpha, beta, -(alpha + beta)).unwrap();
            if !candidate.gamma().is_zero() {
                break candidate;
            }
        };
        let size = rng.gen_range(0..=12usize);
        let rows: Vec<Vec<i64>> = (0..size)
            .map(|_| (0..n).map(|_| rng.gen_range(0..q) as i64).collect())
            .collect();
        let set = PointSet::from_coords(q, n, &rows).unwrap();

        // oracle: direct coordinate arithmetic over all ordered triples
        let mut brute_free = true;
        'search: for a1 in set.iter() {
            for a2 in set.iter() {
                for a3 in set.iter() {
                    if a1 == a2 && a2 == a3 {
                        continue;
                    }
                    let solves = (0..n).all(|i| {
                        t.alpha()
                            .mul(a1.coord(i))
                            .add(t.beta().mul(a2.coord(i)))
                            .add(t.gamma().mul(a3.coord(i)))
                            .is_zero()
                    });
                    if solves {
                        brute_free = false;
                        break 'search;
                    }
                }
            }
        }

        let lib_free = is_progression_free(&set, &t).unwrap();
        let sigma = sigma_set(&set, t.alpha(), t.beta()).unwrap();
        let scaled = set.scale(t.neg_gamma()).unwrap();
        let sigma_free = sigma.iter().all(|p| !scaled.contains(p));

        if brute_free != lib_free || lib_free != sigma_free {
            failures.push(format!(
                "trial {trial} q={q} n={n}: brute={brute_free} lib={lib_free} sigma={sigma_free}"
            ));
        }
        if let Some((w1, w2, w3)) = find_progression(&set, &t).unwrap() {
            let member = set.contains(&w1) && set.contains(&w2) && set.contains(&w3);
            let solves = t.third_point(&w1, &w2).unwrap() == w3;
            if !(member && solves) {
                failures.push(format!("trial {trial}: witness is not a set progression"));
            }
        }
    }
    criterion(9, "verifier equivalence", failures);
}
