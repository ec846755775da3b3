//! The polynomial side of the bound: reduced multivariate polynomials,
//! bilinear expansions of `P(alpha·x + beta·y)`, the diagonal-rank check, and
//! the end-to-end pipeline producing `|A| <= 3·m_{(q-1)n/3}` on concrete sets.

mod bilinear;
mod linalg;
mod poly;
mod proposition;
mod theorem;

pub use bilinear::{
    compose_affine_pair, split_decomposition, BilinearExpansion, SplitDecomposition,
};
pub use linalg::FMatrix;
pub use poly::Polynomial;
pub use proposition::{build_matrix, check_proposition, proposition_trials, PropositionReport};
pub use theorem::{
    max_support_element, theorem_bound, vanishing_space, verify_theorem_pipeline, TheoremReport,
};
