//! Independent oracles shared by the integration and acceptance tests.
//!
//! Nothing here calls into the library's linear algebra: the CCA oracle goes
//! through nalgebra with explicit inverses and a nonsymmetric eigensolver, and
//! the warp oracles are plain index remaps.

#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use seis::{ActivationTensor, Dims};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

pub fn to_faer(m: &DMatrix<f64>) -> faer::Mat<f64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

pub fn from_faer(m: faer::MatRef<'_, f64>) -> DMatrix<f64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn centered(m: &DMatrix<f64>) -> DMatrix<f64> {
    let mut c = m.clone();
    for mut row in c.row_iter_mut() {
        let mean = row.sum() / row.len() as f64;
        row.add_scalar_mut(-mean);
    }
    c
}

/// Canonical correlations from the generalized eigenproblem
/// `Cxx⁻¹·Cxy·Cyy⁻¹·Cyx·w = ρ²·w`, sorted descending, `min(kx, ky)` values.
pub fn cca_oracle(x: &DMatrix<f64>, y: &DMatrix<f64>) -> Vec<f64> {
    let (xc, yc) = (centered(x), centered(y));
    let s = 1.0 / (x.ncols() as f64 - 1.0);
    let cxx = &xc * xc.transpose() * s;
    let cyy = &yc * yc.transpose() * s;
    let cxy = &xc * yc.transpose() * s;
    let m = cxx.try_inverse().expect("Cxx invertible")
        * &cxy
        * cyy.try_inverse().expect("Cyy invertible")
        * cxy.transpose();
    let mut rho2: Vec<f64> = m.complex_eigenvalues().iter().map(|z| z.re).collect();
    rho2.sort_by(|a, b| b.total_cmp(a));
    rho2.truncate(x.nrows().min(y.nrows()));
    rho2.into_iter().map(|v| v.max(0.0).sqrt().min(1.0)).collect()
}

/// A pair whose canonical correlations are spread well away from zero:
/// `y = M·x + noise` with a random mixing `M`.
pub fn correlated_pair(kx: usize, ky: usize, n: usize, rng: &mut impl Rng) -> (DMatrix<f64>, DMatrix<f64>) {
    let x = normal_matrix(kx, n, rng);
    let mix = normal_matrix(ky, kx, rng);
    let noise_level: f64 = rng.random_range(0.2..1.0);
    let y = &mix * &x + normal_matrix(ky, n, rng) * noise_level;
    (x, y)
}

/// Integer shift by `(dx, dy)` pixels with zero fill.
pub fn shift_oracle(z: &ActivationTensor, dx: isize, dy: isize) -> Vec<f64> {
    let d = z.dims();
    let mut out = vec![0.0; d.len()];
    for (s, src) in z.slices().enumerate() {
        for y in 0..d.h as isize {
            for x in 0..d.w as isize {
                let (sy, sx) = (y - dy, x - dx);
                if (0..d.h as isize).contains(&sy) && (0..d.w as isize).contains(&sx) {
                    out[s * d.spatial() + (y as usize) * d.w + x as usize] = src[sy as usize * d.w + sx as usize];
                }
            }
        }
    }
    out
}

/// Counter-clockwise quarter turn as displayed (rows grow downward), square grids.
pub fn quarter_turn_oracle(z: &ActivationTensor) -> Vec<f64> {
    let d = z.dims();
    assert_eq!(d.h, d.w);
    let n = d.w;
    let mut out = vec![0.0; d.len()];
    for (s, src) in z.slices().enumerate() {
        for y in 0..n {
            for x in 0..n {
                out[s * d.spatial() + y * n + x] = src[x * n + (n - 1 - y)];
            }
        }
    }
    out
}

pub fn half_turn_oracle(z: &ActivationTensor) -> Vec<f64> {
    let d = z.dims();
    let mut out = vec![0.0; d.len()];
    for (s, src) in z.slices().enumerate() {
        for y in 0..d.h {
            for x in 0..d.w {
                out[s * d.spatial() + y * d.w + x] = src[(d.h - 1 - y) * d.w + (d.w - 1 - x)];
            }
        }
    }
    out
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn normal_tensor(dims: Dims, rng: &mut impl Rng) -> ActivationTensor {
    ActivationTensor::from_fn(dims, |_, _, _, _| rng.sample(StandardNormal)).unwrap()
}

pub fn smooth_tensor(dims: Dims, seed: u64) -> ActivationTensor {
    seis::gen_synthetic_activations(dims, 2.0, &mut seis::rng::stream(seed, 0, 0)).unwrap()
}

/// Mixes the channel axis with `m` (`c × c`): `z'[i, a] = Σ_j m[a, j]·z[i, j]`.
pub fn mix_channels(z: &ActivationTensor, m: &DMatrix<f64>) -> ActivationTensor {
    let d = z.dims();
    ActivationTensor::from_fn(d, |i, a, y, x| (0..d.c).map(|j| m[(a, j)] * z.get(i, j, y, x)).sum()).unwrap()
}

/// Reorders the `(b, c)` slices: output slice `s` is input slice `perm[s]`.
pub fn permute_observations(z: &ActivationTensor, perm: &[usize]) -> ActivationTensor {
    let d = z.dims();
    let mut data = Vec::with_capacity(d.len());
    for &p in perm {
        data.extend_from_slice(&z.as_slice()[p * d.spatial()..(p + 1) * d.spatial()]);
    }
    ActivationTensor::new(d, data).unwrap()
}

/// Applies `q` (`d × d`) to the flattened spatial axis of every slice.
pub fn map_spatial(z: &ActivationTensor, q: &DMatrix<f64>) -> ActivationTensor {
    let d = z.dims();
    let mut data = Vec::with_capacity(d.len());
    for s in z.slices() {
        let v = q * nalgebra::DVector::from_column_slice(s);
        data.extend(v.iter());
    }
    ActivationTensor::new(d, data).unwrap()
}

pub fn shuffled(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Minimal NPY v1.0 writer, independent of the library codec.
pub fn npy_bytes(descr: &str, fortran: bool, shape: &[usize], payload: &[u8]) -> Vec<u8> {
    let dims: Vec<String> = shape.iter().map(|s| s.to_string()).collect();
    let shape_txt = if dims.len() == 1 { format!("({},)", dims[0]) } else { format!("({})", dims.join(", ")) };
    let mut header = format!(
        "{{'descr': '{descr}', 'fortran_order': {}, 'shape': {shape_txt}, }}",
        if fortran { "True" } else { "False" }
    );
    while (10 + header.len() + 1) % 64 != 0 {
        header.push(' ');
    }
    header.push('\n');
    let mut out = b"\x93NUMPY\x01\x00".to_vec();
    out.extend_from_slice(&(header.len() as u16).to_le_bytes());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(payload);
    out
}
