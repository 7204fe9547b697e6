//! Six-condition synthetic validation.
//!
//! Each trial draws a smooth random activation tensor from stream
//! `(seed, trial, 0)` and builds its counterpart from stream `(seed, trial, 1)`:
//! an exact copy, a warped copy, or an unrelated tensor. Both tensors of every
//! pair are scored, one row per (condition, trial).

use log::{info, warn};
use rand::RngCore;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SeisError};
use crate::io::ResultRow;
use crate::linalg::TruncatedSubspace;
use crate::metrics::{denoise, score_subspaces, SeisScores};
use crate::rng::{stream, ROLE_ALTERNATE, ROLE_REFERENCE};
use crate::tensor::{ActivationTensor, Dims};
use crate::transforms::{apply_affine, random_baseline, sample_params, ConditionKind};

/// Label written into every synthetic result row.
pub const SYNTHETIC_LABEL: &str = "synthetic";

/// Chance-level canonical correlation scales like √(k/n); below this many
/// observations per retained component it exceeds 0.2.
pub const MIN_OBSERVATIONS_PER_COMPONENT: usize = 25;

/// What stands in for `f(T(x))` in the random-baseline condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RandomNull {
    /// An independent draw from the same smooth-field generator.
    #[default]
    Matched,
    /// I.i.d. standard normal entries.
    White,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HarnessConfig {
    pub dims: Dims,
    pub trials: usize,
    pub master_seed: u64,
    pub conditions: Vec<ConditionKind>,
    /// Gaussian length-scale of the synthetic fields, in pixels.
    pub smoothness: f64,
    pub random_null: RandomNull,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            dims: Dims {
                b: 64,
                c: 32,
                h: 28,
                w: 28,
            },
            trials: 50,
            master_seed: 42,
            conditions: ConditionKind::ALL.to_vec(),
            smoothness: 2.0,
            random_null: RandomNull::Matched,
        }
    }
}

impl HarnessConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(SeisError::Validation("trials must be at least 1".into()));
        }
        if !(self.smoothness.is_finite() && self.smoothness > 0.0) {
            return Err(SeisError::Validation(format!(
                "smoothness must be a positive number, got {}",
                self.smoothness
            )));
        }
        if self.conditions.is_empty() {
            return Err(SeisError::Validation("no conditions selected".into()));
        }
        Dims::new(self.dims.b, self.dims.c, self.dims.h, self.dims.w)?;
        if self.dims.slices() < 2 {
            return Err(SeisError::Validation("b·c must be at least 2".into()));
        }
        Ok(())
    }

    /// Selected conditions, deduplicated, in reporting order.
    pub fn ordered_conditions(&self) -> Vec<ConditionKind> {
        ConditionKind::ALL
            .into_iter()
            .filter(|k| self.conditions.contains(k))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionSummary {
    pub condition: ConditionKind,
    pub mean_equiv: f64,
    pub std_equiv: f64,
    pub mean_inv: f64,
    pub std_inv: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub summaries: Vec<ConditionSummary>,
    pub rows: Vec<ResultRow>,
}

impl SuiteReport {
    pub fn summary(&self, kind: ConditionKind) -> Option<&ConditionSummary> {
        self.summaries.iter().find(|s| s.condition == kind)
    }

    pub fn rows_for(&self, kind: ConditionKind) -> impl Iterator<Item = &ResultRow> {
        self.rows.iter().filter(move |r| r.condition == kind.as_str())
    }
}

fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil() as isize;
    (-radius..=radius)
        .map(|k| (-(k * k) as f64 / (2.0 * sigma * sigma)).exp())
        .collect()
}

/// One smooth `h × w` field: white noise on a padded grid, blurred separably
/// with the Gaussian kernel (valid region only), standardized to zero mean
/// and unit variance.
fn smooth_slice<R: RngCore + ?Sized>(h: usize, w: usize, kernel: &[f64], rng: &mut R, out: &mut [f64]) {
    let pad = kernel.len() - 1;
    let (ph, pw) = (h + pad, w + pad);
    let noise: Vec<f64> = (0..ph * pw).map(|_| StandardNormal.sample(rng)).collect();
    // horizontal pass: ph rows × w cols
    let mut tmp = vec![0.0; ph * w];
    for y in 0..ph {
        let row = &noise[y * pw..(y + 1) * pw];
        for x in 0..w {
            tmp[y * w + x] = kernel.iter().zip(&row[x..x + kernel.len()]).map(|(k, v)| k * v).sum();
        }
    }
    for y in 0..h {
        for x in 0..w {
            out[y * w + x] = kernel
                .iter()
                .enumerate()
                .map(|(i, k)| k * tmp[(y + i) * w + x])
                .sum();
        }
    }
    let n = out.len() as f64;
    let mean = out.iter().sum::<f64>() / n;
    let var = out.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let sd = var.sqrt();
    for v in out.iter_mut() {
        *v -= mean;
        if sd > 0.0 {
            *v /= sd;
        }
    }
}

/// Spatially smooth stand-in for convolutional activations.
pub fn gen_synthetic_activations<R: RngCore + ?Sized>(
    dims: Dims,
    smoothness: f64,
    rng: &mut R,
) -> Result<ActivationTensor> {
    if !(smoothness.is_finite() && smoothness > 0.0) {
        return Err(SeisError::Validation(format!(
            "smoothness must be a positive number, got {smoothness}"
        )));
    }
    let kernel = gaussian_kernel(smoothness);
    let mut data = vec![0.0; dims.len()];
    for slice in data.chunks_exact_mut(dims.spatial()) {
        smooth_slice(dims.h, dims.w, &kernel, rng, slice);
    }
    Ok(ActivationTensor::from_raw(dims, data))
}

fn reference_tensor(cfg: &HarnessConfig, trial: usize) -> Result<ActivationTensor> {
    let mut rng = stream(cfg.master_seed, trial as u64, ROLE_REFERENCE);
    gen_synthetic_activations(cfg.dims, cfg.smoothness, &mut rng)
}

/// Counterpart tensor for a condition; `None` means an exact copy.
fn alternate_tensor(
    cfg: &HarnessConfig,
    kind: ConditionKind,
    trial: usize,
    reference: &ActivationTensor,
) -> Result<Option<ActivationTensor>> {
    let mut rng = stream(cfg.master_seed, trial as u64, ROLE_ALTERNATE);
    match kind {
        ConditionKind::Identity => Ok(None),
        ConditionKind::RandomBaseline => match cfg.random_null {
            RandomNull::Matched => Ok(Some(gen_synthetic_activations(cfg.dims, cfg.smoothness, &mut rng)?)),
            RandomNull::White => Ok(Some(random_baseline(cfg.dims, &mut rng))),
        },
        geometric => {
            let params = sample_params(geometric, &mut rng)?;
            Ok(Some(apply_affine(reference, &params)?))
        }
    }
}

fn row(cfg: &HarnessConfig, kind: ConditionKind, trial: usize, s: SeisScores) -> ResultRow {
    ResultRow {
        label: SYNTHETIC_LABEL.to_string(),
        condition: kind.as_str().to_string(),
        trial,
        seed: cfg.master_seed,
        s_equiv: s.s_equiv,
        s_inv: s.s_inv,
        k_a: s.k_a,
        k_a_prime: s.k_a_prime,
        r: s.r,
    }
}

fn score_trial(
    cfg: &HarnessConfig,
    kind: ConditionKind,
    trial: usize,
    reference: &ActivationTensor,
    reference_side: &TruncatedSubspace,
) -> Result<ResultRow> {
    let annotate = |e: SeisError| SeisError::InTrial {
        condition: kind.as_str().to_string(),
        trial,
        source: Box::new(e),
    };
    let scores = match alternate_tensor(cfg, kind, trial, reference).map_err(annotate)? {
        // an exact copy denoises to the identical subspace
        None => score_subspaces(reference_side, reference_side),
        Some(alt) => {
            let alt_side = denoise(&alt).map_err(annotate)?;
            score_subspaces(reference_side, &alt_side)
        }
    }
    .map_err(annotate)?;
    Ok(row(cfg, kind, trial, scores))
}

fn prepare_reference(cfg: &HarnessConfig, trial: usize) -> Result<(ActivationTensor, TruncatedSubspace)> {
    let reference = reference_tensor(cfg, trial)?;
    let side = denoise(&reference).map_err(|e| SeisError::InTrial {
        condition: "reference".into(),
        trial,
        source: Box::new(e),
    })?;
    if trial == 0 {
        let n = cfg.dims.slices();
        if n < MIN_OBSERVATIONS_PER_COMPONENT * side.k() {
            warn!(
                "n = b·c = {n} is below {MIN_OBSERVATIONS_PER_COMPONENT}·k = {}; chance-level scores will be inflated",
                MIN_OBSERVATIONS_PER_COMPONENT * side.k()
            );
        }
    }
    Ok((reference, side))
}

/// All trials of one condition, ordered by trial.
pub fn run_condition(cfg: &HarnessConfig, kind: ConditionKind) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let (reference, side) = prepare_reference(cfg, t)?;
            score_trial(cfg, kind, t, &reference, &side)
        })
        .collect()
}

pub fn summarize(kind: ConditionKind, rows: &[&ResultRow]) -> ConditionSummary {
    let n = rows.len();
    let mean_std = |vals: Vec<f64>| -> (f64, f64) {
        if vals.is_empty() {
            return (f64::NAN, f64::NAN);
        }
        let m = vals.iter().sum::<f64>() / vals.len() as f64;
        let sd = if vals.len() > 1 {
            (vals.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (vals.len() - 1) as f64).sqrt()
        } else {
            0.0
        };
        (m, sd)
    };
    let (mean_equiv, std_equiv) = mean_std(rows.iter().map(|r| r.s_equiv).collect());
    let (mean_inv, std_inv) = mean_std(rows.iter().map(|r| r.s_inv).collect());
    ConditionSummary {
        condition: kind,
        mean_equiv,
        std_equiv,
        mean_inv,
        std_inv,
        trials: n,
    }
}

/// Runs every configured condition. Each trial's reference tensor is shared
/// by all conditions; rows come back ordered by (condition, trial).
pub fn run_validation_suite(cfg: &HarnessConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let kinds = cfg.ordered_conditions();
    info!(
        "running {} condition(s) x {} trial(s) at dims {}",
        kinds.len(),
        cfg.trials,
        cfg.dims
    );
    let per_trial: Vec<Vec<ResultRow>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let (reference, side) = prepare_reference(cfg, t)?;
            kinds
                .iter()
                .map(|&k| score_trial(cfg, k, t, &reference, &side))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(kinds.len() * cfg.trials);
    let mut summaries = Vec::with_capacity(kinds.len());
    for (ci, &kind) in kinds.iter().enumerate() {
        let start = rows.len();
        rows.extend(per_trial.iter().map(|trial_rows| trial_rows[ci].clone()));
        let these: Vec<&ResultRow> = rows[start..].iter().collect();
        summaries.push(summarize(kind, &these));
    }
    Ok(SuiteReport { summaries, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(trials: usize) -> HarnessConfig {
        HarnessConfig {
            dims: Dims::new(16, 16, 10, 10).unwrap(),
            trials,
            smoothness: 1.5,
            ..HarnessConfig::default()
        }
    }

    #[test]
    fn defaults() {
        let cfg = HarnessConfig::default();
        assert_eq!(cfg.dims.as_array(), [64, 32, 28, 28]);
        assert_eq!(cfg.trials, 50);
        assert_eq!(cfg.conditions.len(), 6);
        assert_eq!(cfg.smoothness, 2.0);
    }

    #[test]
    fn invalid_configs() {
        let mut cfg = small(1);
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = small(1);
        cfg.smoothness = 0.0;
        assert!(cfg.validate().is_err());
        let mut cfg = small(1);
        cfg.conditions.clear();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn generator_is_standardized_and_seeded() {
        let dims = Dims::new(2, 2, 9, 7).unwrap();
        let a = gen_synthetic_activations(dims, 2.0, &mut stream(1, 0, 0)).unwrap();
        let b = gen_synthetic_activations(dims, 2.0, &mut stream(1, 0, 0)).unwrap();
        assert_eq!(a, b);
        for s in a.slices() {
            let m = s.iter().sum::<f64>() / s.len() as f64;
            let v = s.iter().map(|x| (x - m).powi(2)).sum::<f64>() / s.len() as f64;
            assert!(m.abs() < 1e-12);
            assert!((v - 1.0).abs() < 1e-12);
        }
        assert!(gen_synthetic_activations(dims, -1.0, &mut stream(1, 0, 0)).is_err());
    }

    #[test]
    fn suite_matches_single_condition_runs() {
        let mut cfg = small(3);
        cfg.conditions = vec![ConditionKind::RandomBaseline, ConditionKind::Identity, ConditionKind::Rotation];
        let report = run_validation_suite(&cfg).unwrap();
        let order: Vec<_> = report.summaries.iter().map(|s| s.condition).collect();
        assert_eq!(order, [ConditionKind::Identity, ConditionKind::Rotation, ConditionKind::RandomBaseline]);
        assert_eq!(report.rows.len(), 9);
        for kind in order {
            let single = run_condition(&cfg, kind).unwrap();
            let from_suite: Vec<_> = report.rows_for(kind).cloned().collect();
            assert_eq!(single, from_suite);
        }
    }

    #[test]
    fn identity_rows_are_perfect() {
        for row in run_condition(&small(2), ConditionKind::Identity).unwrap() {
            assert!(row.s_equiv >= 0.999 && row.s_inv >= 0.99, "{row:?}");
            assert_eq!(row.k_a, row.k_a_prime);
        }
    }

    #[test]
    fn summary_statistics() {
        let rows: Vec<ResultRow> = [0.2, 0.4]
            .iter()
            .enumerate()
            .map(|(t, &v)| ResultRow {
                label: "x".into(),
                condition: "identity".into(),
                trial: t,
                seed: 0,
                s_equiv: v,
                s_inv: v / 2.0,
                k_a: 1,
                k_a_prime: 1,
                r: 1,
            })
            .collect();
        let refs: Vec<&ResultRow> = rows.iter().collect();
        let s = summarize(ConditionKind::Identity, &refs);
        assert!((s.mean_equiv - 0.3).abs() < 1e-15);
        assert!((s.std_equiv - 0.1f64.hypot(0.1)).abs() < 1e-15);
        assert!((s.mean_inv - 0.15).abs() < 1e-15);
        assert_eq!(s.trials, 2);
    }
}
