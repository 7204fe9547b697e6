//! Spatially-aware matricization.
//!
//! Spatial cells become the rows (features) and (batch, channel) pairs become
//! the columns (observations), so a transform of the spatial grid acts on the
//! row axis. Cell `(y, x)` maps to row `y·w + x`; observation `(i, j)` maps to
//! column `i·c + j`.

use faer::{Mat, MatRef};

use crate::error::{Result, SeisError};
use crate::tensor::{ActivationTensor, Dims};

/// The `d × n` view of an activation tensor, `d = h·w`, `n = b·c`.
#[derive(Debug, Clone)]
pub struct SpatialMatrix {
    data: Mat<f64>,
    source_dims: Dims,
}

impl SpatialMatrix {
    pub fn data(&self) -> MatRef<'_, f64> {
        self.data.as_ref()
    }

    pub fn source_dims(&self) -> Dims {
        self.source_dims
    }

    /// Number of spatial features.
    pub fn d(&self) -> usize {
        self.data.nrows()
    }

    /// Number of observations.
    pub fn n(&self) -> usize {
        self.data.ncols()
    }
}

/// Row-centered spatial matrix.
#[derive(Debug, Clone)]
pub struct CenteredMatrix {
    data: Mat<f64>,
    row_means: Vec<f64>,
}

impl CenteredMatrix {
    pub fn data(&self) -> MatRef<'_, f64> {
        self.data.as_ref()
    }

    pub fn row_means(&self) -> &[f64] {
        &self.row_means
    }

    pub fn into_inner(self) -> Mat<f64> {
        self.data
    }
}

pub fn matricize(z: &ActivationTensor) -> SpatialMatrix {
    let dims = z.dims();
    // The C-ordered buffer is already the column-major d×n layout.
    let view = MatRef::from_column_major_slice(z.as_slice(), dims.spatial(), dims.slices());
    SpatialMatrix {
        data: view.to_owned(),
        source_dims: dims,
    }
}

/// Inverse of [`matricize`].
pub fn dematricize(a: &SpatialMatrix) -> Result<ActivationTensor> {
    let dims = a.source_dims;
    let mut data = Vec::with_capacity(dims.len());
    for j in 0..a.n() {
        data.extend_from_slice(a.data.col_as_slice(j));
    }
    ActivationTensor::new(dims, data)
}

/// Subtracts each row's mean over the observations.
pub fn center_rows(a: &SpatialMatrix) -> Result<CenteredMatrix> {
    center_matrix(a.data())
}

pub(crate) fn center_matrix(m: MatRef<'_, f64>) -> Result<CenteredMatrix> {
    let (d, n) = (m.nrows(), m.ncols());
    if n < 2 {
        return Err(SeisError::DegenerateSample(format!(
            "centering needs at least 2 observations, got {n}"
        )));
    }
    let mut row_means = vec![0.0; d];
    for j in 0..n {
        for (i, mean) in row_means.iter_mut().enumerate() {
            *mean += m[(i, j)];
        }
    }
    for mean in &mut row_means {
        *mean /= n as f64;
    }
    let data = Mat::from_fn(d, n, |i, j| m[(i, j)] - row_means[i]);
    Ok(CenteredMatrix { data, row_means })
}

impl CenteredMatrix {
    /// Re-centers an already centered matrix; row means are accumulated.
    pub fn recenter(&self) -> Result<CenteredMatrix> {
        let mut again = center_matrix(self.data())?;
        for (m, prev) in again.row_means.iter_mut().zip(&self.row_means) {
            *m += prev;
        }
        Ok(again)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_grid_maps_row_major() {
        let z = ActivationTensor::new(Dims::new(1, 1, 2, 2).unwrap(), vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let a = matricize(&z);
        assert_eq!((a.d(), a.n()), (4, 1));
        let col: Vec<f64> = (0..4).map(|i| a.data()[(i, 0)]).collect();
        assert_eq!(col, [1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn shape_and_index_map() {
        let dims = Dims::new(2, 3, 4, 5).unwrap();
        let z = ActivationTensor::from_fn(dims, |i, j, y, x| (i * 1000 + j * 100 + y * 10 + x) as f64).unwrap();
        let a = matricize(&z);
        assert_eq!((a.d(), a.n()), (20, 6));
        for i in 0..2 {
            for j in 0..3 {
                for y in 0..4 {
                    for x in 0..5 {
                        assert_eq!(a.data()[(y * 5 + x, i * 3 + j)], z.get(i, j, y, x));
                    }
                }
            }
        }
        assert_eq!(dematricize(&a).unwrap(), z);
    }

    #[test]
    fn centering_examples() {
        let z = ActivationTensor::new(Dims::new(3, 1, 1, 2).unwrap(), vec![1.0, 5.0, 2.0, 5.0, 3.0, 5.0]).unwrap();
        let c = center_rows(&matricize(&z)).unwrap();
        assert_eq!(c.row_means(), &[2.0, 5.0]);
        let row0: Vec<f64> = (0..3).map(|j| c.data()[(0, j)]).collect();
        let row1: Vec<f64> = (0..3).map(|j| c.data()[(1, j)]).collect();
        assert_eq!(row0, [-1.0, 0.0, 1.0]);
        assert_eq!(row1, [0.0, 0.0, 0.0]);
    }

    #[test]
    fn centering_needs_two_observations() {
        let z = ActivationTensor::zeros(Dims::new(1, 1, 2, 2).unwrap());
        assert!(matches!(center_rows(&matricize(&z)), Err(SeisError::DegenerateSample(_))));
    }
}
