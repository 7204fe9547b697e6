//! The `seis` command line.
//!
//! Results go to stdout (or `--out`), diagnostics to stderr. Exit status is
//! 0 on success, 1 on a fatal error and 2 when a `layers` batch completed
//! with some entries skipped.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use log::{info, warn};
use serde::Deserialize;

use crate::error::{Result, SeisError};
use crate::harness::{gen_synthetic_activations, run_validation_suite, HarnessConfig, RandomNull};
use crate::io::results::{fmt6, render_results};
use crate::io::{load_manifest, read_tensor, write_tensor, OutputFormat, ResultRow};
use crate::metrics::{seis, SeisScores};
use crate::rng::{stream, ROLE_ALTERNATE, ROLE_REFERENCE};
use crate::tensor::{ActivationTensor, Dims};
use crate::transforms::{apply_affine, random_baseline, sample_params, AffineParams, ConditionKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FATAL: i32 = 1;
pub const EXIT_PARTIAL: i32 = 2;

/// Environment variable holding the log filter.
pub const LOG_ENV: &str = "SEIS_LOG";

/// Condition label written for every `layers` row.
pub const MANIFEST_CONDITION: &str = "manifest";

#[derive(Debug, Parser)]
#[command(name = "seis", version, about = "Subspace-based equivariance and invariance scores")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score one pair of activation tensors stored as .npy files.
    Score(ScoreArgs),
    /// Run the synthetic validation suite.
    Synth(SynthArgs),
    /// Score every pair listed in a manifest, one row per entry.
    Layers(LayersArgs),
    /// Write a synthetic activation tensor, optionally with a transformed copy.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Reference activations f(x).
    pub reference: PathBuf,
    /// Alternate activations f(T(x)).
    pub alternate: PathBuf,
    /// Print a JSON object instead of the key=value line.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Tensor shape as B,C,H,W.
    #[arg(long)]
    pub dims: Option<Dims>,
    #[arg(long)]
    pub smoothness: Option<f64>,
    /// Comma-separated condition names.
    #[arg(long, value_delimiter = ',')]
    pub conditions: Option<Vec<ConditionKind>>,
    /// Null model for the random baseline: matched or white.
    #[arg(long, value_parser = parse_null)]
    pub random_null: Option<RandomNull>,
    /// File receiving one row per (condition, trial).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<OutputFormat>,
    /// JSON file with defaults for any of the flags above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LayersArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub dims: Option<Dims>,
    #[arg(long)]
    pub smoothness: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Destination .npy; the transformed copy gets an `_alt` suffix.
    #[arg(long)]
    pub out: PathBuf,
    /// Condition applied to make the `_alt` copy.
    #[arg(long)]
    pub warp: Option<ConditionKind>,
    #[arg(long, default_value_t = 0)]
    pub warp_seed: u64,
    /// Fixed rotation in degrees, overriding the drawn value.
    #[arg(long, allow_negative_numbers = true)]
    pub angle: Option<f64>,
    #[arg(long)]
    pub scale: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub tx: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub ty: Option<f64>,
}

fn parse_null(s: &str) -> std::result::Result<RandomNull, String> {
    match s {
        "matched" => Ok(RandomNull::Matched),
        "white" => Ok(RandomNull::White),
        other => Err(format!("unknown null model {other:?}; expected matched or white")),
    }
}

/// Contents of a `--config` file. Every key is optional; flags win.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub trials: Option<usize>,
    #[serde(alias = "master_seed")]
    pub seed: Option<u64>,
    pub dims: Option<Dims>,
    pub smoothness: Option<f64>,
    pub conditions: Option<Vec<ConditionKind>>,
    pub random_null: Option<RandomNull>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| SeisError::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| SeisError::Parse(format!("config {}: {e}", path.display())))
    }
}

/// Fully resolved `synth` settings.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthRun {
    pub harness: HarnessConfig,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl SynthArgs {
    /// Layers flags over the config file over the built-in defaults.
    pub fn resolve(&self) -> Result<SynthRun> {
        let file = match &self.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let mut h = HarnessConfig::default();
        if let Some(v) = self.trials.or(file.trials) {
            h.trials = v;
        }
        if let Some(v) = self.seed.or(file.seed) {
            h.master_seed = v;
        }
        if let Some(v) = self.dims.or(file.dims) {
            h.dims = v;
        }
        if let Some(v) = self.smoothness.or(file.smoothness) {
            h.smoothness = v;
        }
        if let Some(v) = self.conditions.clone().or(file.conditions) {
            h.conditions = v;
        }
        if let Some(v) = self.random_null.or(file.random_null) {
            h.random_null = v;
        }
        h.validate()?;
        let out = self.out.clone().or(file.out);
        let format = self.format.or(file.format).unwrap_or_default();
        Ok(SynthRun { harness: h, out, format })
    }
}

fn check_input(path: &Path) -> Result<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(SeisError::io(
            path,
            std::io::Error::new(std::io::ErrorKind::NotFound, "no such file"),
        ))
    }
}

fn check_output(path: &Path) -> Result<()> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    if !parent.is_dir() {
        return Err(SeisError::io(
            path,
            std::io::Error::new(std::io::ErrorKind::NotFound, "parent directory does not exist"),
        ));
    }
    if path.is_dir() {
        return Err(SeisError::io(
            path,
            std::io::Error::new(std::io::ErrorKind::InvalidInput, "is a directory"),
        ));
    }
    Ok(())
}

fn emit(bytes: &[u8], out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, bytes).map_err(|e| SeisError::io(p, e)),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| SeisError::io("<stdout>", e)),
    }
}

pub fn format_scores(s: &SeisScores) -> String {
    format!(
        "s_equiv={} s_inv={} k_a={} k_a_prime={} r={}",
        fmt6(s.s_equiv),
        fmt6(s.s_inv),
        s.k_a,
        s.k_a_prime,
        s.r
    )
}

pub fn cmd_score(args: &ScoreArgs) -> Result<i32> {
    check_input(&args.reference)?;
    check_input(&args.alternate)?;
    let a = read_tensor(&args.reference)?;
    let b = read_tensor(&args.alternate)?;
    let scores = seis(&a, &b)?;
    if args.json {
        println!(
            "{{\"s_equiv\": {}, \"s_inv\": {}, \"k_a\": {}, \"k_a_prime\": {}, \"r\": {}}}",
            fmt6(scores.s_equiv),
            fmt6(scores.s_inv),
            scores.k_a,
            scores.k_a_prime,
            scores.r
        );
    } else {
        println!("{}", format_scores(&scores));
    }
    Ok(EXIT_OK)
}

/// Fixed-width summary table, one line per condition after the header.
pub fn format_summary(report: &crate::harness::SuiteReport) -> String {
    let mut s = format!(
        "{:<16} {:>10} {:>10} {:>10} {:>10} {:>6}\n",
        "condition", "mean_equiv", "std_equiv", "mean_inv", "std_inv", "trials"
    );
    for c in &report.summaries {
        s.push_str(&format!(
            "{:<16} {:>10} {:>10} {:>10} {:>10} {:>6}\n",
            c.condition.as_str(),
            fmt6(c.mean_equiv),
            fmt6(c.std_equiv),
            fmt6(c.mean_inv),
            fmt6(c.std_inv),
            c.trials
        ));
    }
    s
}

pub fn cmd_synth(args: &SynthArgs) -> Result<i32> {
    let run = args.resolve()?;
    if let Some(out) = &run.out {
        check_output(out)?;
    }
    let report = run_validation_suite(&run.harness)?;
    if let Some(out) = &run.out {
        emit(&render_results(&report.rows, run.format)?, Some(out))?;
        info!("wrote {} rows to {}", report.rows.len(), out.display());
    }
    print!("{}", format_summary(&report));
    Ok(EXIT_OK)
}

fn score_entry(reference: &Path, alternate: &Path) -> Result<SeisScores> {
    let a = read_tensor(reference)?;
    let b = read_tensor(alternate)?;
    seis(&a, &b)
}

pub fn cmd_layers(args: &LayersArgs) -> Result<i32> {
    check_input(&args.manifest)?;
    if let Some(out) = &args.out {
        check_output(out)?;
    }
    let mut manifest = load_manifest(&args.manifest)?;
    if let Some(dir) = args.manifest.parent() {
        manifest.resolve_against(dir);
    }
    let mut rows = Vec::with_capacity(manifest.len());
    let mut failed = 0usize;
    for entry in &manifest.entries {
        match score_entry(&entry.ref_path, &entry.alt_path) {
            Ok(s) => rows.push(ResultRow {
                label: entry.label.clone(),
                condition: MANIFEST_CONDITION.to_string(),
                trial: 0,
                seed: 0,
                s_equiv: s.s_equiv,
                s_inv: s.s_inv,
                k_a: s.k_a,
                k_a_prime: s.k_a_prime,
                r: s.r,
            }),
            Err(e) => {
                warn!("skipping {}: {e}", entry.label);
                failed += 1;
            }
        }
    }
    if rows.is_empty() {
        return Err(SeisError::Validation(format!(
            "all {} manifest entries failed",
            manifest.len()
        )));
    }
    emit(&render_results(&rows, args.format)?, args.out.as_deref())?;
    Ok(if failed > 0 { EXIT_PARTIAL } else { EXIT_OK })
}

/// `base.npy` becomes `base_alt.npy`.
pub fn alt_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match out.extension() {
        Some(ext) => format!("{stem}_alt.{}", ext.to_string_lossy()),
        None => format!("{stem}_alt"),
    };
    out.with_file_name(name)
}

impl GenArgs {
    fn has_overrides(&self) -> bool {
        self.angle.is_some() || self.scale.is_some() || self.tx.is_some() || self.ty.is_some()
    }

    /// Drawn parameters for the warp kind, with any explicit flags applied on top.
    pub fn warp_params(&self, kind: ConditionKind) -> Result<AffineParams> {
        let mut p = if kind.is_geometric() {
            sample_params(kind, &mut stream(self.warp_seed, 0, ROLE_ALTERNATE))?
        } else {
            AffineParams::IDENTITY
        };
        p.angle_deg = self.angle.unwrap_or(p.angle_deg);
        p.scale = self.scale.unwrap_or(p.scale);
        p.tx = self.tx.unwrap_or(p.tx);
        p.ty = self.ty.unwrap_or(p.ty);
        p.validate()?;
        Ok(p)
    }
}

pub fn cmd_gen(args: &GenArgs) -> Result<i32> {
    let defaults = HarnessConfig::default();
    let dims = args.dims.unwrap_or(defaults.dims);
    let smoothness = args.smoothness.unwrap_or(defaults.smoothness);
    let seed = args.seed.unwrap_or(defaults.master_seed);
    check_output(&args.out)?;
    if args.warp.is_none() && args.has_overrides() {
        return Err(SeisError::Validation("--angle/--scale/--tx/--ty need --warp".into()));
    }
    let alt_out = args.warp.map(|_| alt_path(&args.out));
    if let Some(p) = &alt_out {
        check_output(p)?;
    }

    let z = gen_synthetic_activations(dims, smoothness, &mut stream(seed, 0, ROLE_REFERENCE))?;
    write_tensor(&z, &args.out)?;
    info!("wrote {} with shape {}", args.out.display(), dims);

    if let (Some(kind), Some(path)) = (args.warp, alt_out) {
        let alt: ActivationTensor = match kind {
            ConditionKind::RandomBaseline => {
                if args.has_overrides() {
                    return Err(SeisError::Validation(
                        "warp parameters do not apply to random_baseline".into(),
                    ));
                }
                random_baseline(dims, &mut stream(args.warp_seed, 0, ROLE_ALTERNATE))
            }
            _ => {
                let p = args.warp_params(kind)?;
                info!(
                    "warp {kind}: tx={} ty={} scale={} angle={}",
                    fmt6(p.tx),
                    fmt6(p.ty),
                    fmt6(p.scale),
                    fmt6(p.angle_deg)
                );
                apply_affine(&z, &p)?
            }
        };
        write_tensor(&alt, &path)?;
        info!("wrote {}", path.display());
    }
    Ok(EXIT_OK)
}

pub fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Score(a) => cmd_score(a),
        Command::Synth(a) => cmd_synth(a),
        Command::Layers(a) => cmd_layers(a),
        Command::Gen(a) => cmd_gen(a),
    }
}

fn init_logging() {
    let env = env_logger::Env::new().filter_or(LOG_ENV, "warn");
    // a second call (e.g. from tests) is harmless
    let _ = env_logger::Builder::from_env(env)
        .format_timestamp(None)
        .target(env_logger::Target::Stderr)
        .try_init();
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_FATAL } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FATAL
        }
    }
}
