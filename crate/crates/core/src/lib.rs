//! Subspace-based equivariance and invariance scores for paired activation
//! tensors.
//!
//! Given activations `f(x)` and `f(T(x))` of shape `(b, c, h, w)`, each side
//! is flattened to a spatial-by-observation matrix, centered, truncated to
//! the principal subspace holding 99% of its variance, and the two subspaces
//! are compared with canonical correlation analysis. `s_equiv` is the mean
//! canonical correlation; `s_inv` weights it by how closely the paired
//! projection directions agree in the shared spatial coordinates.
//!
//! ```no_run
//! use seis::{io::read_tensor, seis};
//!
//! let a = read_tensor("layer3.npy")?;
//! let b = read_tensor("layer3_alt.npy")?;
//! let scores = seis(&a, &b)?;
//! println!("{:.6} {:.6}", scores.s_equiv, scores.s_inv);
//! # Ok::<(), seis::SeisError>(())
//! ```

pub mod cli;
pub mod error;
pub mod harness;
pub mod io;
pub mod linalg;
pub mod matricize;
pub mod metrics;
pub mod rng;
pub mod tensor;
pub mod transforms;

pub use error::{Result, SeisError, Side};
pub use harness::{
    gen_synthetic_activations, run_condition, run_validation_suite, ConditionSummary, HarnessConfig,
    RandomNull, SuiteReport,
};
pub use metrics::{denoise, equivariance_score, invariance_score, score_subspaces, seis, SeisScores};
pub use tensor::{ActivationTensor, Dims};
pub use transforms::{apply_affine, AffineParams, ConditionKind, WarpPlan};
