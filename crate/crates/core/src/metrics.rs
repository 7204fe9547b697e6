//! Equivariance and invariance scores.
//!
//! `s_equiv` is the mean absolute cosine between paired canonical variates.
//! Because the variates are centered it equals the mean canonical
//! correlation, and [`equivariance_score`] refuses to return a value when the
//! two disagree.
//!
//! `s_inv` is the correlation-weighted mean absolute cosine between paired
//! projection directions. The directions live in different truncated bases,
//! so both are first lifted into the shared spatial coordinates
//! (`w̃ = Ũ_A·w`, `ṽ = Ũ_A'·v`).

use faer::MatRef;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SeisError, Side};
use crate::linalg::{cca, principal_subspace, CcaResult, TruncatedSubspace};
use crate::matricize::{center_rows, matricize};
use crate::tensor::ActivationTensor;

/// Allowed gap between the cosine form of `s_equiv` and the mean correlation.
pub const EQUIV_CONSISTENCY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeisScores {
    pub s_equiv: f64,
    pub s_inv: f64,
    pub r: usize,
    pub k_a: usize,
    pub k_a_prime: usize,
    pub correlations: Vec<f64>,
}

fn cosine(a: impl Iterator<Item = (f64, f64)>) -> Option<f64> {
    let (mut ab, mut aa, mut bb) = (0.0, 0.0, 0.0);
    for (x, y) in a {
        ab += x * y;
        aa += x * x;
        bb += y * y;
    }
    if aa > 0.0 && bb > 0.0 {
        Some(ab / (aa.sqrt() * bb.sqrt()))
    } else {
        None
    }
}

pub fn equivariance_score(c: &CcaResult) -> Result<f64> {
    let r = c.r();
    if r == 0 {
        return Err(SeisError::DegenerateRank("no canonical pairs".into()));
    }
    let (p, q) = (c.variates_left(), c.variates_right());
    let mut total = 0.0;
    for i in 0..r {
        let cos = cosine((0..p.ncols()).map(|t| (p[(i, t)], q[(i, t)])))
            .ok_or_else(|| SeisError::Numerical(format!("canonical variate {i} has zero norm")))?;
        total += cos.abs();
    }
    let score = total / r as f64;
    let mean_rho = c.mean_correlation();
    if (score - mean_rho).abs() > EQUIV_CONSISTENCY_TOL {
        return Err(SeisError::Numerical(format!(
            "variate cosine mean {score} disagrees with mean correlation {mean_rho}; are the inputs centered?"
        )));
    }
    Ok(score.min(1.0))
}

pub fn invariance_score(
    c: &CcaResult,
    left_basis: MatRef<'_, f64>,
    right_basis: MatRef<'_, f64>,
) -> Result<f64> {
    let r = c.r();
    if r == 0 {
        return Err(SeisError::DegenerateRank("no canonical pairs".into()));
    }
    let (w, v) = (c.proj_left(), c.proj_right());
    if left_basis.ncols() != w.nrows()
        || right_basis.ncols() != v.nrows()
        || left_basis.nrows() != right_basis.nrows()
    {
        return Err(SeisError::Shape(format!(
            "bases {}x{} and {}x{} do not fit projections with {} and {} rows",
            left_basis.nrows(),
            left_basis.ncols(),
            right_basis.nrows(),
            right_basis.ncols(),
            w.nrows(),
            v.nrows()
        )));
    }
    let lifted_w = left_basis * w;
    let lifted_v = right_basis * v;
    let mut total = 0.0;
    for (i, rho) in c.correlations().iter().enumerate() {
        let cos = cosine((0..lifted_w.nrows()).map(|a| (lifted_w[(a, i)], lifted_v[(a, i)])))
            .ok_or_else(|| {
                SeisError::Numerical(format!("lifted projection pair {i} has zero norm"))
            })?;
        total += rho * cos.abs();
    }
    Ok((total / r as f64).clamp(0.0, 1.0))
}

/// Matricize, center and truncate one activation tensor.
pub fn denoise(z: &ActivationTensor) -> Result<TruncatedSubspace> {
    let centered = center_rows(&matricize(z))?;
    principal_subspace(centered.data())
}

/// Scores two already denoised sides.
pub fn score_subspaces(left: &TruncatedSubspace, right: &TruncatedSubspace) -> Result<SeisScores> {
    let c = cca(left, right)?;
    let s_equiv = equivariance_score(&c)?;
    let s_inv = invariance_score(&c, left.basis(), right.basis())?;
    Ok(SeisScores {
        s_equiv,
        s_inv,
        r: c.r(),
        k_a: left.k(),
        k_a_prime: right.k(),
        correlations: c.correlations().to_vec(),
    })
}

/// End-to-end scores for `f(x)` versus `f(T(x))`.
pub fn seis(z_ref: &ActivationTensor, z_alt: &ActivationTensor) -> Result<SeisScores> {
    if z_ref.dims() != z_alt.dims() {
        return Err(SeisError::Shape(format!(
            "reference dims {} differ from alternate dims {}",
            z_ref.dims(),
            z_alt.dims()
        )));
    }
    let left = denoise(z_ref).map_err(|e| e.on_side(Side::Reference))?;
    let right = denoise(z_alt).map_err(|e| e.on_side(Side::Alternate))?;
    score_subspaces(&left, &right)
}
