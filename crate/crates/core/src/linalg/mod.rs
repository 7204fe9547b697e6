//! Decompositions behind the scores: thin SVD, variance truncation, CCA.

pub mod cca;
pub mod svd;

pub use cca::{cca, cca_matrices, CcaResult, CCA_RIDGE};
pub use svd::{
    left_singular, principal_subspace, thin_svd, truncate, truncate_99, variance_cutoff, ThinSvd,
    TruncatedSubspace, RANK_FLOOR, VARIANCE_THRESHOLD,
};
