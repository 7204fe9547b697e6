//! Four-dimensional activation grids.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SeisError};

/// Shape of an activation tensor: batch, channel, height, width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[usize; 4]", into = "[usize; 4]")]
pub struct Dims {
    pub b: usize,
    pub c: usize,
    pub h: usize,
    pub w: usize,
}

impl Dims {
    pub fn new(b: usize, c: usize, h: usize, w: usize) -> Result<Self> {
        if b == 0 || c == 0 || h == 0 || w == 0 {
            return Err(SeisError::Shape(format!(
                "all dimensions must be at least 1, got ({b}, {c}, {h}, {w})"
            )));
        }
        Ok(Dims { b, c, h, w })
    }

    pub fn len(&self) -> usize {
        self.b * self.c * self.h * self.w
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of spatial cells per slice (`h·w`).
    pub fn spatial(&self) -> usize {
        self.h * self.w
    }

    /// Number of (batch, channel) slices (`b·c`).
    pub fn slices(&self) -> usize {
        self.b * self.c
    }

    pub fn as_array(&self) -> [usize; 4] {
        [self.b, self.c, self.h, self.w]
    }
}

impl TryFrom<[usize; 4]> for Dims {
    type Error = SeisError;

    fn try_from(d: [usize; 4]) -> Result<Self> {
        Dims::new(d[0], d[1], d[2], d[3])
    }
}

impl From<Dims> for [usize; 4] {
    fn from(d: Dims) -> Self {
        d.as_array()
    }
}

impl fmt::Display for Dims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.b, self.c, self.h, self.w)
    }
}

/// Parses `B,C,H,W`.
impl FromStr for Dims {
    type Err = SeisError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<usize> = s
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| SeisError::Parse(format!("dims {s:?}: {e}")))?;
        let arr: [usize; 4] = parts
            .try_into()
            .map_err(|_| SeisError::Parse(format!("dims {s:?}: expected B,C,H,W")))?;
        Dims::try_from(arr)
    }
}

/// A real-valued `(batch, channel, row, column)` grid stored in C order.
///
/// Every (batch, channel) slice occupies a contiguous run of `h·w` values,
/// and slices are ordered by `batch·c + channel`.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivationTensor {
    dims: Dims,
    data: Vec<f64>,
}

impl ActivationTensor {
    /// Builds a tensor, rejecting length mismatches and non-finite values.
    pub fn new(dims: Dims, data: Vec<f64>) -> Result<Self> {
        if data.len() != dims.len() {
            return Err(SeisError::Shape(format!(
                "dims {dims} need {} values, got {}",
                dims.len(),
                data.len()
            )));
        }
        if let Some(idx) = data.iter().position(|v| !v.is_finite()) {
            return Err(SeisError::Validation(format!(
                "non-finite value {} at flat index {idx}",
                data[idx]
            )));
        }
        Ok(ActivationTensor { dims, data })
    }

    pub fn zeros(dims: Dims) -> Self {
        ActivationTensor {
            dims,
            data: vec![0.0; dims.len()],
        }
    }

    pub fn from_fn(dims: Dims, mut f: impl FnMut(usize, usize, usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(dims.len());
        for i in 0..dims.b {
            for j in 0..dims.c {
                for y in 0..dims.h {
                    for x in 0..dims.w {
                        data.push(f(i, j, y, x));
                    }
                }
            }
        }
        ActivationTensor::new(dims, data)
    }

    /// Wraps data already known to be finite and correctly sized.
    pub(crate) fn from_raw(dims: Dims, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), dims.len());
        ActivationTensor { dims, data }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize, y: usize, x: usize) -> f64 {
        let Dims { c, h, w, .. } = self.dims;
        self.data[((i * c + j) * h + y) * w + x]
    }

    /// The `h·w` spatial values of slice (batch `i`, channel `j`).
    pub fn slice(&self, i: usize, j: usize) -> &[f64] {
        let d = self.dims.spatial();
        let start = (i * self.dims.c + j) * d;
        &self.data[start..start + d]
    }

    pub fn slices(&self) -> std::slice::ChunksExact<'_, f64> {
        self.data.chunks_exact(self.dims.spatial())
    }

    /// Elementwise `alpha·self + beta·other`.
    pub fn axpby(&self, alpha: f64, other: &ActivationTensor, beta: f64) -> Result<Self> {
        if self.dims != other.dims {
            return Err(SeisError::Shape(format!(
                "cannot combine tensors of dims {} and {}",
                self.dims, other.dims
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        ActivationTensor::new(self.dims, data)
    }

    pub fn scaled(&self, alpha: f64) -> Result<Self> {
        ActivationTensor::new(self.dims, self.data.iter().map(|v| alpha * v).collect())
    }
}
