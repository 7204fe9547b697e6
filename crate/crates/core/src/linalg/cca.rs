//! Canonical correlation analysis by whitening.
//!
//! The covariances of both inputs are ridge-regularized, whitened with their
//! symmetric inverse square roots, and the whitened cross-covariance is
//! decomposed with an SVD. Left/right singular vectors mapped back through the
//! inverse square roots give the projection directions.

use faer::{Mat, MatRef, Side};

use super::svd::TruncatedSubspace;
use crate::error::{Result, SeisError};

/// Ridge added to each covariance diagonal, relative to its mean eigenvalue.
pub const CCA_RIDGE: f64 = 1e-10;

/// Largest overshoot past `[0, 1]` a correlation may have before clamping is
/// treated as a numerical failure.
pub const CLAMP_SLACK: f64 = 1e-10;

/// Canonical pairs sorted by decreasing correlation.
///
/// Variates are scaled to unit sample variance, so each projection column
/// is scaled accordingly. Each left direction has its largest-magnitude entry
/// positive; the right direction's sign makes the pair's correlation
/// non-negative.
#[derive(Debug, Clone)]
pub struct CcaResult {
    correlations: Vec<f64>,
    proj_left: Mat<f64>,
    proj_right: Mat<f64>,
    variates_left: Mat<f64>,
    variates_right: Mat<f64>,
}

impl CcaResult {
    pub fn correlations(&self) -> &[f64] {
        &self.correlations
    }

    /// `k_A × r`, column `i` is `w_i`.
    pub fn proj_left(&self) -> MatRef<'_, f64> {
        self.proj_left.as_ref()
    }

    /// `k_A' × r`, column `i` is `v_i`.
    pub fn proj_right(&self) -> MatRef<'_, f64> {
        self.proj_right.as_ref()
    }

    /// `r × n`, row `i` is `p_i = w_iᵀ·X`.
    pub fn variates_left(&self) -> MatRef<'_, f64> {
        self.variates_left.as_ref()
    }

    /// `r × n`, row `i` is `q_i = v_iᵀ·Y`.
    pub fn variates_right(&self) -> MatRef<'_, f64> {
        self.variates_right.as_ref()
    }

    pub fn r(&self) -> usize {
        self.correlations.len()
    }

    pub fn mean_correlation(&self) -> f64 {
        self.correlations.iter().sum::<f64>() / self.r() as f64
    }
}

/// CCA between the projected data of two truncated subspaces.
pub fn cca(left: &TruncatedSubspace, right: &TruncatedSubspace) -> Result<CcaResult> {
    cca_matrices(left.projected(), right.projected())
}

/// CCA between the rows of `x` (`k_x × n`) and `y` (`k_y × n`).
///
/// Covariances are taken about the sample mean; the variates are formed from
/// the inputs as given.
pub fn cca_matrices(x: MatRef<'_, f64>, y: MatRef<'_, f64>) -> Result<CcaResult> {
    let n = x.ncols();
    if y.ncols() != n {
        return Err(SeisError::Shape(format!(
            "observation counts differ: {} vs {}",
            n,
            y.ncols()
        )));
    }
    if n < 2 {
        return Err(SeisError::DegenerateSample(format!(
            "CCA needs at least 2 observations, got {n}"
        )));
    }
    if x.nrows() == 0 || y.nrows() == 0 {
        return Err(SeisError::DegenerateRank("CCA input has no variables".into()));
    }

    let xc = row_centered(x);
    let yc = row_centered(y);
    let scale = 1.0 / (n as f64 - 1.0);
    let cxx = (&xc * xc.transpose()) * faer::Scale(scale);
    let cyy = (&yc * yc.transpose()) * faer::Scale(scale);
    let cxy = (&xc * yc.transpose()) * faer::Scale(scale);

    let wx = regularized_inv_sqrt(cxx.as_ref(), "left")?;
    let wy = regularized_inv_sqrt(cyy.as_ref(), "right")?;
    let whitened = &wx * &cxy * &wy;
    ensure_finite(whitened.as_ref(), "whitened cross-covariance")?;

    let svd = whitened
        .thin_svd()
        .map_err(|e| SeisError::Numerical(format!("svd of whitened cross-covariance: {e:?}")))?;
    let mut proj_left = &wx * svd.U();
    let mut proj_right = &wy * svd.V();
    ensure_finite(proj_left.as_ref(), "left projections")?;
    ensure_finite(proj_right.as_ref(), "right projections")?;

    let mut variates_left = proj_left.transpose() * x;
    let mut variates_right = proj_right.transpose() * y;
    let r = proj_left.ncols();
    let mut correlations = Vec::with_capacity(r);

    for i in 0..r {
        // sign: largest-magnitude entry of w_i positive
        let mut pivot = 0.0f64;
        for a in 0..proj_left.nrows() {
            let v = proj_left[(a, i)];
            if v.abs() > pivot.abs() {
                pivot = v;
            }
        }
        let left_sign = if pivot < 0.0 { -1.0 } else { 1.0 };

        let sd_p = sample_std(variates_left.as_ref(), i);
        let sd_q = sample_std(variates_right.as_ref(), i);
        if !(sd_p > 0.0 && sd_q > 0.0) {
            return Err(SeisError::Numerical(format!(
                "canonical variate {i} has zero variance"
            )));
        }
        scale_pair(&mut proj_left, &mut variates_left, i, left_sign / sd_p);
        scale_pair(&mut proj_right, &mut variates_right, i, 1.0 / sd_q);

        let mut rho = pearson(variates_left.as_ref(), variates_right.as_ref(), i);
        if rho < 0.0 {
            scale_pair(&mut proj_right, &mut variates_right, i, -1.0);
            rho = -rho;
        }
        if !rho.is_finite() || rho > 1.0 + CLAMP_SLACK {
            return Err(SeisError::Numerical(format!(
                "canonical correlation {i} = {rho} is outside [0, 1]"
            )));
        }
        correlations.push(rho.min(1.0));
    }

    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&a, &b| correlations[b].total_cmp(&correlations[a]));
    if order.iter().enumerate().any(|(i, &o)| i != o) {
        correlations = order.iter().map(|&o| correlations[o]).collect();
        proj_left = Mat::from_fn(proj_left.nrows(), r, |a, i| proj_left[(a, order[i])]);
        proj_right = Mat::from_fn(proj_right.nrows(), r, |a, i| proj_right[(a, order[i])]);
        variates_left = Mat::from_fn(r, n, |i, t| variates_left[(order[i], t)]);
        variates_right = Mat::from_fn(r, n, |i, t| variates_right[(order[i], t)]);
    }

    Ok(CcaResult {
        correlations,
        proj_left,
        proj_right,
        variates_left,
        variates_right,
    })
}

fn row_centered(m: MatRef<'_, f64>) -> Mat<f64> {
    let n = m.ncols() as f64;
    let means: Vec<f64> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).sum::<f64>() / n)
        .collect();
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] - means[i])
}

/// `(C + ε·tr(C)/k·I)^(-1/2)` via a symmetric eigendecomposition.
fn regularized_inv_sqrt(c: MatRef<'_, f64>, which: &str) -> Result<Mat<f64>> {
    let k = c.nrows();
    let trace: f64 = (0..k).map(|i| c[(i, i)]).sum();
    if !trace.is_finite() || trace <= 0.0 {
        return Err(SeisError::Numerical(format!(
            "{which} covariance has non-positive trace {trace}"
        )));
    }
    let ridge = CCA_RIDGE * trace / k as f64;
    let mut reg = c.to_owned();
    for i in 0..k {
        reg[(i, i)] += ridge;
    }
    let eig = reg
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| SeisError::Numerical(format!("{which} covariance eigendecomposition: {e:?}")))?;
    let vals = eig.S().column_vector();
    let vecs = eig.U();
    let mut inv_sqrt = Vec::with_capacity(k);
    for i in 0..k {
        let lam = vals[i];
        if !lam.is_finite() || lam <= 0.0 {
            return Err(SeisError::Numerical(format!(
                "{which} covariance is not positive definite (eigenvalue {lam})"
            )));
        }
        inv_sqrt.push(1.0 / lam.sqrt());
    }
    let scaled = Mat::from_fn(k, k, |a, b| vecs[(a, b)] * inv_sqrt[b]);
    Ok(&scaled * vecs.transpose())
}

fn ensure_finite(m: MatRef<'_, f64>, what: &str) -> Result<()> {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if !m[(i, j)].is_finite() {
                return Err(SeisError::Numerical(format!("non-finite entry in {what}")));
            }
        }
    }
    Ok(())
}

fn sample_std(rows: MatRef<'_, f64>, i: usize) -> f64 {
    let n = rows.ncols() as f64;
    let mean = (0..rows.ncols()).map(|t| rows[(i, t)]).sum::<f64>() / n;
    let ss: f64 = (0..rows.ncols()).map(|t| (rows[(i, t)] - mean).powi(2)).sum();
    (ss / (n - 1.0)).sqrt()
}

fn pearson(p: MatRef<'_, f64>, q: MatRef<'_, f64>, i: usize) -> f64 {
    let n = p.ncols();
    let mp = (0..n).map(|t| p[(i, t)]).sum::<f64>() / n as f64;
    let mq = (0..n).map(|t| q[(i, t)]).sum::<f64>() / n as f64;
    let (mut spq, mut spp, mut sqq) = (0.0, 0.0, 0.0);
    for t in 0..n {
        let a = p[(i, t)] - mp;
        let b = q[(i, t)] - mq;
        spq += a * b;
        spp += a * a;
        sqq += b * b;
    }
    spq / (spp * sqq).sqrt()
}

fn scale_pair(proj: &mut Mat<f64>, variates: &mut Mat<f64>, i: usize, factor: f64) {
    for a in 0..proj.nrows() {
        proj[(a, i)] *= factor;
    }
    for t in 0..variates.ncols() {
        variates[(i, t)] *= factor;
    }
}
