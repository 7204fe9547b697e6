//! Spatial transforms applied directly to activation grids.
//!
//! Pixel centers sit at integer coordinates and the grid center is
//! `((w − 1)/2, (h − 1)/2)`, so quarter turns of a square grid and whole-pixel
//! shifts are exact permutations (with zero fill). The composite warp scales
//! about the center, rotates counter-clockwise as displayed (row 0 at the top),
//! then translates, and is resampled once by inverse mapping with bilinear
//! interpolation. Reads outside the grid return 0.

use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SeisError};
use crate::rng::uniform;
use crate::tensor::{ActivationTensor, Dims};

/// Translation bound as a fraction of the grid side.
pub const MAX_TRANSLATION: f64 = 0.15;
pub const SCALE_RANGE: (f64, f64) = (0.8, 1.2);
pub const ANGLE_RANGE_DEG: (f64, f64) = (0.0, 360.0);

/// Source coordinates this close to an integer are snapped onto it.
const SNAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionKind {
    Identity,
    Translation,
    Scaling,
    Rotation,
    Affine,
    #[serde(alias = "random")]
    RandomBaseline,
}

impl ConditionKind {
    /// All six conditions in reporting order.
    pub const ALL: [ConditionKind; 6] = [
        ConditionKind::Identity,
        ConditionKind::Translation,
        ConditionKind::Scaling,
        ConditionKind::Rotation,
        ConditionKind::Affine,
        ConditionKind::RandomBaseline,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConditionKind::Identity => "identity",
            ConditionKind::Translation => "translation",
            ConditionKind::Scaling => "scaling",
            ConditionKind::Rotation => "rotation",
            ConditionKind::Affine => "affine",
            ConditionKind::RandomBaseline => "random_baseline",
        }
    }

    pub fn is_geometric(self) -> bool {
        matches!(
            self,
            ConditionKind::Translation
                | ConditionKind::Scaling
                | ConditionKind::Rotation
                | ConditionKind::Affine
        )
    }
}

impl fmt::Display for ConditionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConditionKind {
    type Err = SeisError;

    fn from_str(s: &str) -> Result<Self> {
        let kind = match s.trim().to_ascii_lowercase().as_str() {
            "identity" => ConditionKind::Identity,
            "translation" => ConditionKind::Translation,
            "scaling" => ConditionKind::Scaling,
            "rotation" => ConditionKind::Rotation,
            "affine" => ConditionKind::Affine,
            "random_baseline" | "random" => ConditionKind::RandomBaseline,
            other => return Err(SeisError::Parse(format!("unknown condition {other:?}"))),
        };
        Ok(kind)
    }
}

/// Parameters of the composite warp.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineParams {
    /// Horizontal shift as a signed fraction of the width (positive moves content right).
    pub tx: f64,
    /// Vertical shift as a signed fraction of the height (positive moves content down).
    pub ty: f64,
    pub scale: f64,
    pub angle_deg: f64,
}

impl AffineParams {
    pub const IDENTITY: AffineParams = AffineParams {
        tx: 0.0,
        ty: 0.0,
        scale: 1.0,
        angle_deg: 0.0,
    };

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    pub fn validate(&self) -> Result<()> {
        if ![self.tx, self.ty, self.scale, self.angle_deg]
            .iter()
            .all(|v| v.is_finite())
        {
            return Err(SeisError::Validation(format!("non-finite warp parameters {self:?}")));
        }
        if self.scale <= 0.0 {
            return Err(SeisError::Validation(format!("scale must be positive, got {}", self.scale)));
        }
        Ok(())
    }
}

impl Default for AffineParams {
    fn default() -> Self {
        Self::IDENTITY
    }
}

/// Draws warp parameters for a geometric condition. Draw order for the
/// composite is tx, ty, scale, angle.
pub fn sample_params<R: RngCore + ?Sized>(kind: ConditionKind, rng: &mut R) -> Result<AffineParams> {
    let mut p = AffineParams::IDENTITY;
    let (s_lo, s_hi) = SCALE_RANGE;
    let (a_lo, a_hi) = ANGLE_RANGE_DEG;
    match kind {
        ConditionKind::Identity => {}
        ConditionKind::Translation => {
            p.tx = uniform(rng, -MAX_TRANSLATION, MAX_TRANSLATION);
            p.ty = uniform(rng, -MAX_TRANSLATION, MAX_TRANSLATION);
        }
        ConditionKind::Scaling => p.scale = uniform(rng, s_lo, s_hi),
        ConditionKind::Rotation => p.angle_deg = uniform(rng, a_lo, a_hi),
        ConditionKind::Affine => {
            p.tx = uniform(rng, -MAX_TRANSLATION, MAX_TRANSLATION);
            p.ty = uniform(rng, -MAX_TRANSLATION, MAX_TRANSLATION);
            p.scale = uniform(rng, s_lo, s_hi);
            p.angle_deg = uniform(rng, a_lo, a_hi);
        }
        ConditionKind::RandomBaseline => {
            return Err(SeisError::InvalidKind(
                "random_baseline has no warp parameters".into(),
            ))
        }
    }
    Ok(p)
}

/// cos/sin with exact values at multiples of 90°.
fn exact_trig(angle_deg: f64) -> (f64, f64) {
    let a = angle_deg.rem_euclid(360.0);
    if a % 90.0 == 0.0 {
        match (a / 90.0) as u32 {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        }
    } else {
        let r = a.to_radians();
        (r.cos(), r.sin())
    }
}

fn snap(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() < SNAP {
        r
    } else {
        v
    }
}

/// Precomputed bilinear taps for one grid size and parameter set.
#[derive(Debug, Clone)]
pub struct WarpPlan {
    h: usize,
    w: usize,
    /// `(output cell, source cell, weight)`, grouped by output cell.
    taps: Vec<(u32, u32, f64)>,
}

impl WarpPlan {
    pub fn new(h: usize, w: usize, p: &AffineParams) -> Result<Self> {
        p.validate()?;
        if h < 2 || w < 2 {
            return Err(SeisError::Shape(format!(
                "warping needs a grid of at least 2x2, got {h}x{w}"
            )));
        }
        let (cos, sin) = exact_trig(p.angle_deg);
        let cx = (w as f64 - 1.0) / 2.0;
        let cy = (h as f64 - 1.0) / 2.0;
        let shift_x = p.tx * w as f64;
        let shift_y = p.ty * h as f64;
        let mut taps = Vec::with_capacity(h * w * 4);
        for yo in 0..h {
            for xo in 0..w {
                let u = (xo as f64 - cx - shift_x) / p.scale;
                let v = (yo as f64 - cy - shift_y) / p.scale;
                let xs = snap(cx + cos * u - sin * v);
                let ys = snap(cy + sin * u + cos * v);
                let x0 = xs.floor();
                let y0 = ys.floor();
                let fx = xs - x0;
                let fy = ys - y0;
                let out = (yo * w + xo) as u32;
                for (dy, wy) in [(0.0, 1.0 - fy), (1.0, fy)] {
                    for (dx, wx) in [(0.0, 1.0 - fx), (1.0, fx)] {
                        let weight = wy * wx;
                        let (sx, sy) = (x0 + dx, y0 + dy);
                        if weight == 0.0 || sx < 0.0 || sy < 0.0 || sx >= w as f64 || sy >= h as f64 {
                            continue;
                        }
                        taps.push((out, (sy as usize * w + sx as usize) as u32, weight));
                    }
                }
            }
        }
        Ok(WarpPlan { h, w, taps })
    }

    pub fn apply_slice(&self, src: &[f64], dst: &mut [f64]) {
        debug_assert_eq!(src.len(), self.h * self.w);
        dst.fill(0.0);
        for &(o, s, weight) in &self.taps {
            dst[o as usize] += weight * src[s as usize];
        }
    }
}

/// Warps every (batch, channel) slice.
pub fn apply_affine(z: &ActivationTensor, p: &AffineParams) -> Result<ActivationTensor> {
    p.validate()?;
    if p.is_identity() {
        return Ok(z.clone());
    }
    let Dims { h, w, .. } = z.dims();
    let plan = WarpPlan::new(h, w, p)?;
    let mut out = vec![0.0; z.dims().len()];
    for (src, dst) in z.slices().zip(out.chunks_exact_mut(h * w)) {
        plan.apply_slice(src, dst);
    }
    Ok(ActivationTensor::from_raw(z.dims(), out))
}

fn check_permutation(perm: &[usize], d: usize) -> Result<()> {
    if perm.len() != d {
        return Err(SeisError::Validation(format!(
            "permutation has {} entries, grid has {d} cells",
            perm.len()
        )));
    }
    let mut seen = vec![false; d];
    for &p in perm {
        if p >= d || std::mem::replace(&mut seen[p], true) {
            return Err(SeisError::Validation(format!(
                "not a bijection on 0..{d}: entry {p}"
            )));
        }
    }
    Ok(())
}

/// Moves flattened spatial cell `i` of every slice to `perm[i]`.
pub fn permute_spatial(z: &ActivationTensor, perm: &[usize]) -> Result<ActivationTensor> {
    let d = z.dims().spatial();
    check_permutation(perm, d)?;
    let mut out = vec![0.0; z.dims().len()];
    for (src, dst) in z.slices().zip(out.chunks_exact_mut(d)) {
        for (i, &p) in perm.iter().enumerate() {
            dst[p] = src[i];
        }
    }
    Ok(ActivationTensor::from_raw(z.dims(), out))
}

pub fn invert_permutation(perm: &[usize]) -> Result<Vec<usize>> {
    check_permutation(perm, perm.len())?;
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    Ok(inv)
}

/// I.i.d. standard normal tensor.
pub fn random_baseline<R: RngCore + ?Sized>(dims: Dims, rng: &mut R) -> ActivationTensor {
    let data = (0..dims.len()).map(|_| StandardNormal.sample(rng)).collect();
    ActivationTensor::from_raw(dims, data)
}
