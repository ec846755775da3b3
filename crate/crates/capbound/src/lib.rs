//! Exact machinery for the polynomial method over `F_q^n`: monomial counting,
//! progression-free set search and verification, rank-bound checks, and the
//! large-deviations constant behind the `3·m_{(q-1)n/3}` upper bound.
//!
//! The crate is organized around six modules:
//!
//! - [`ffield`]: arithmetic in the prime field `F_q` and in `F_q^n`.
//! - [`monomials`]: enumeration and exact big-integer counting of
//!   `q`-power-free monomials by total degree (the quantities `m_d`).
//! - [`polymethod`]: polynomials as functions on `F_q^n`, the bilinear
//!   expansion and its rank-one split, vanishing spaces, and the full
//!   theorem pipeline executed on concrete sets.
//! - [`capsearch`]: verifiers and exhaustive/greedy searches for
//!   progression-free subsets.
//! - [`asymptotics`]: the rate function `I(x)` and the exponential base
//!   `c(q) = q·e^{-I((q-1)/3)}` (for `q = 3`: `c < 2.756`).
//! - [`cli`]: the `capbound` command-line front end.
//!
//! Every runnable capability has a worked example under `examples/`:
//!
//! ```text
//! cargo run --release --example count_and_bound
//! cargo run --release --example clp_constant
//! cargo run --release --example verify_set
//! cargo run --release --example search_caps
//! cargo run --release --example proposition_demo
//! cargo run --release --example theorem_pipeline
//! cargo run --release --example convergence
//! ```
//!
//! All counting is exact (arbitrary precision); all degree thresholds are
//! exact rationals. Floating point appears only in the asymptotics layer.

pub mod asymptotics;
pub mod capsearch;
pub mod cli;
pub mod ffield;
pub mod monomials;
pub mod polymethod;

use thiserror::Error;

pub use ffield::{CoefficientTriple, FieldElement, Point};
pub use monomials::{BigCount, Monomial, RationalDegree};

/// Default ceiling on `q^n` for operations that materialize the whole cube.
pub const DEFAULT_MAX_CUBE: u64 = 10_000_000;

/// Current cube cap: `CAPBOUND_MAX_CUBE` if set and parseable, else the default.
pub fn max_cube() -> u64 {
    std::env::var("CAPBOUND_MAX_CUBE")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_MAX_CUBE)
}

/// `q^n` if it fits in a `u64` and respects the enumeration cap.
pub(crate) fn checked_cube(q: u64, n: usize) -> Result<u64> {
    let cap = max_cube();
    u32::try_from(n)
        .ok()
        .and_then(|n| q.checked_pow(n))
        .filter(|&size| size <= cap)
        .ok_or(Error::CubeTooLarge { q, n, cap })
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("mixed moduli: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("mixed dimensions: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("coefficients ({0}, {1}, {2}) do not sum to zero mod {3}")]
    CoefficientSum(u64, u64, u64, u64),
    #[error("gamma = 0 is not allowed here")]
    GammaZero,
    #[error("enumerating {q}^{n} points exceeds the cap {cap} (override with CAPBOUND_MAX_CUBE)")]
    CubeTooLarge { q: u64, n: usize, cap: u64 },
    #[error("value table does not cover the whole cube (missing {0})")]
    IncompleteTable(Point),
    #[error("polynomial degree {degree} exceeds the stated bound {bound}")]
    DegreeTooHigh { degree: u64, bound: RationalDegree },
    #[error("term ({0}, {1}) has both factors above half the degree bound")]
    UnsplittableTerm(Monomial, Monomial),
    #[error("hypothesis violated: polynomial does not vanish at the pair ({a}, {b})")]
    HypothesisViolation { a: Point, b: Point },
    #[error("set is not progression-free: witness ({0}, {1}, {2})")]
    ProgressionFound(Point, Point, Point),
    #[error("vanishing space is zero-dimensional")]
    EmptyBasis,
    #[error("x = {x} lies outside [0, {max}]")]
    XOutOfRange { x: f64, max: u64 },
    #[error("exact counting budget exceeded: (q-1)·n = {cost} is over the cap {cap}")]
    Budget { cost: u64, cap: u64 },
    #[error("invalid input: {0}")]
    Parse(String),
    #[error("internal invariant broken: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
