//! Thin SVD and variance-based truncation of the left singular subspace.

use faer::diag::Diag;
use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::svd::{self as faer_svd, ComputeSvdVectors};
use faer::{Mat, MatRef, Par};

use crate::error::{Result, SeisError};

/// Cumulative σ² fraction the retained subspace must reach.
pub const VARIANCE_THRESHOLD: f64 = 0.99;

/// Singular values below this multiple of the largest are treated as zero.
pub const RANK_FLOOR: f64 = 1e-12;

/// `m = U·diag(S)·Vᵀ` with `min(d, n)` columns in `U` and `V`.
#[derive(Debug, Clone)]
pub struct ThinSvd {
    pub u: Mat<f64>,
    pub s: Vec<f64>,
    pub v: Mat<f64>,
}

impl ThinSvd {
    pub fn reconstruct(&self) -> Mat<f64> {
        let mut us = self.u.clone();
        for (j, sj) in self.s.iter().enumerate() {
            for i in 0..us.nrows() {
                us[(i, j)] *= sj;
            }
        }
        &us * self.v.transpose()
    }
}

fn check_finite(m: MatRef<'_, f64>) -> Result<()> {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if !m[(i, j)].is_finite() {
                return Err(SeisError::Validation(format!(
                    "non-finite matrix entry at ({i}, {j})"
                )));
            }
        }
    }
    Ok(())
}

pub fn thin_svd(m: MatRef<'_, f64>) -> Result<ThinSvd> {
    check_finite(m)?;
    let svd = m
        .thin_svd()
        .map_err(|e| SeisError::Numerical(format!("svd did not converge: {e:?}")))?;
    let s = (0..svd.S().dim()).map(|i| svd.S().column_vector()[i]).collect();
    Ok(ThinSvd {
        u: svd.U().to_owned(),
        s,
        v: svd.V().to_owned(),
    })
}

/// Left singular vectors and singular values only; skips forming `V`.
pub fn left_singular(m: MatRef<'_, f64>) -> Result<(Mat<f64>, Vec<f64>)> {
    check_finite(m)?;
    let (d, n) = (m.nrows(), m.ncols());
    let size = d.min(n);
    let mut u = Mat::<f64>::zeros(d, size);
    let mut s = Diag::<f64>::zeros(size);
    if size == 0 {
        return Ok((u, Vec::new()));
    }
    let par = Par::Seq;
    let mut buf = MemBuffer::new(faer_svd::svd_scratch::<f64>(
        d,
        n,
        ComputeSvdVectors::Thin,
        ComputeSvdVectors::No,
        par,
        Default::default(),
    ));
    faer_svd::svd(
        m,
        s.as_mut(),
        Some(u.as_mut()),
        None,
        par,
        MemStack::new(&mut buf),
        Default::default(),
    )
    .map_err(|e| SeisError::Numerical(format!("svd did not converge: {e:?}")))?;
    let s = (0..size).map(|i| s.column_vector()[i]).collect();
    Ok((u, s))
}

/// Leading left singular subspace of a centered spatial matrix.
#[derive(Debug, Clone)]
pub struct TruncatedSubspace {
    basis: Mat<f64>,
    singular_values: Vec<f64>,
    projected: Mat<f64>,
    retained_variance: f64,
}

impl TruncatedSubspace {
    /// `d × k` orthonormal basis.
    pub fn basis(&self) -> MatRef<'_, f64> {
        self.basis.as_ref()
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    /// `k × n` coordinates of the data in the basis.
    pub fn projected(&self) -> MatRef<'_, f64> {
        self.projected.as_ref()
    }

    pub fn retained_variance(&self) -> f64 {
        self.retained_variance
    }

    pub fn k(&self) -> usize {
        self.basis.ncols()
    }
}

/// Smallest `k` whose leading σ² reach `threshold` of the total, plus the
/// fraction reached. Values under the rank floor are excluded from the total.
pub fn variance_cutoff(s: &[f64], threshold: f64) -> Result<(usize, f64)> {
    if s.windows(2).any(|w| w[1] > w[0]) {
        return Err(SeisError::Validation(
            "singular values must be non-increasing".into(),
        ));
    }
    let s_max = s.first().copied().unwrap_or(0.0);
    if s_max.is_nan() || s_max <= 0.0 {
        return Err(SeisError::DegenerateRank(
            "all singular values are zero".into(),
        ));
    }
    let floor = RANK_FLOOR * s_max;
    let nonzero: Vec<f64> = s.iter().copied().take_while(|&v| v >= floor).collect();
    let total: f64 = nonzero.iter().map(|v| v * v).sum();
    let mut cum = 0.0;
    for (i, v) in nonzero.iter().enumerate() {
        cum += v * v;
        if cum / total >= threshold {
            return Ok((i + 1, cum / total));
        }
    }
    // rounding can leave the full sum a hair under the threshold
    Ok((nonzero.len(), cum / total))
}

/// Keeps the leading left singular vectors explaining `threshold` of the
/// variance and projects `centered` onto them.
pub fn truncate(
    u: MatRef<'_, f64>,
    s: &[f64],
    centered: MatRef<'_, f64>,
    threshold: f64,
) -> Result<TruncatedSubspace> {
    if u.nrows() != centered.nrows() || u.ncols() < s.len() {
        return Err(SeisError::Shape(format!(
            "basis is {}x{} but data has {} rows and {} singular values were given",
            u.nrows(),
            u.ncols(),
            centered.nrows(),
            s.len()
        )));
    }
    let (k, retained_variance) = variance_cutoff(s, threshold)?;
    let basis = u.subcols(0, k).to_owned();
    let projected = basis.transpose() * centered;
    Ok(TruncatedSubspace {
        basis,
        singular_values: s[..k].to_vec(),
        projected,
        retained_variance,
    })
}

pub fn truncate_99(
    u: MatRef<'_, f64>,
    s: &[f64],
    centered: MatRef<'_, f64>,
) -> Result<TruncatedSubspace> {
    truncate(u, s, centered, VARIANCE_THRESHOLD)
}

/// Thin SVD of a centered matrix followed by 99% truncation.
pub fn principal_subspace(centered: MatRef<'_, f64>) -> Result<TruncatedSubspace> {
    let (u, s) = left_singular(centered)?;
    truncate_99(u.as_ref(), &s, centered)
}
