//! Command-line front end. [`run`] parses arguments, dispatches and maps
//! outcomes to exit codes: 0 success, 1 runtime failure, 2 usage error.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::denoise::{self, DenoiseConfig, GammaMode, NoiseSpec, ResidualReference};
use crate::dwt::{load_filters, DwtTransform, FilterPair};
use crate::error::{Error, Result};
use crate::frame::{build_frame, ConeGeometry, FrameSpec, TIGHTNESS_TOLERANCE};
use crate::grid::{GridGeometry, WavefieldGrid};
use crate::io;
use crate::representation::AnyRepresentation;
use crate::sparsity::{nterm_curve, summarize_curves};
use crate::synth::{gen_wavefield, SyntheticSpec};
use crate::transform::BoostletTransform;

#[derive(Debug, Parser)]
#[command(name = "boostlets", version, about = "Boostlet analysis of space-time wavefields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a frame and report the largest deviation of the squared windows from one.
    Framecheck(FramecheckArgs),
    /// Generate synthetic wavefields from a JSON spec.
    Synth(SynthArgs),
    /// Write the boostlet bands of a wavefield to a directory.
    Decompose(DecomposeArgs),
    /// Rebuild a wavefield from a directory written by `decompose`.
    Reconstruct(ReconstructArgs),
    /// n-term approximation curves for one field or a corpus.
    Nterm(NtermArgs),
    /// Denoise one field by hard thresholding at the L-curve corner.
    Denoise(DenoiseArgs),
    /// Mean denoising error per SNR over a corpus.
    SweepSnr(SweepSnrArgs),
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long, default_value_t = 100)]
    nx: usize,
    #[arg(long, default_value_t = 100)]
    nt: usize,
    /// Spatial sample spacing in meters.
    #[arg(long, default_value_t = 0.03)]
    dx: f64,
    /// Time step in seconds.
    #[arg(long, default_value_t = 1.0 / 11250.0)]
    dt: f64,
}

impl GridArgs {
    fn geometry(&self) -> Result<GridGeometry> {
        GridGeometry::new(self.nx, self.nt, self.dx, self.dt)
    }
}

#[derive(Debug, Args)]
struct FrameArgs {
    /// Number of dilation scales.
    #[arg(long, default_value_t = 2)]
    scales: usize,
    /// Number of boosts per scale (odd).
    #[arg(long, default_value_t = 7)]
    boosts: usize,
    /// Spacing of boost window centers in rapidity units.
    #[arg(long, default_value_t = 0.5)]
    boost_spacing: f64,
    /// Put the cone edge on the physical line w = speed * k (m/s) instead of the grid diagonal.
    #[arg(long)]
    cone_speed: Option<f64>,
}

impl FrameArgs {
    fn spec(&self, geometry: GridGeometry) -> Result<FrameSpec> {
        let spec = FrameSpec::new(geometry, self.scales, self.boosts)?.with_boost_spacing(self.boost_spacing)?;
        match self.cone_speed {
            Some(speed) => spec.with_cone(ConeGeometry::Physical { speed }),
            None => Ok(spec),
        }
    }
}

#[derive(Debug, Args)]
struct WaveletArgs {
    /// Lowpass filter file (whitespace-separated taps); defaults to the bundled db45.
    #[arg(long)]
    filters: Option<PathBuf>,
    /// Wavelet decomposition levels.
    #[arg(long, default_value_t = 2)]
    levels: usize,
}

impl WaveletArgs {
    fn filters(&self) -> Result<FilterPair> {
        match &self.filters {
            Some(path) => load_filters(path),
            None => Ok(FilterPair::db45()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RepChoice {
    Boostlet,
    Dwt,
}

fn build_rep(choice: RepChoice, geometry: GridGeometry, frame: &FrameArgs, wavelet: &WaveletArgs) -> Result<AnyRepresentation> {
    Ok(match choice {
        RepChoice::Boostlet => AnyRepresentation::Boostlet(BoostletTransform::new(&frame.spec(geometry)?)?),
        RepChoice::Dwt => AnyRepresentation::Dwt(DwtTransform::new(wavelet.filters()?, wavelet.levels)),
    })
}

#[derive(Debug, Args)]
struct FramecheckArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    frame: FrameArgs,
    /// Also write every atom window to this (new) directory.
    #[arg(long)]
    export: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SynthArgs {
    /// JSON generator spec; omitted fields take their defaults.
    #[arg(long, conflicts_with = "from_csv")]
    spec: Option<PathBuf>,
    /// Cut windows from a recording (CSV, rows are sensors) instead of generating fields.
    #[arg(long, requires = "count")]
    from_csv: Option<PathBuf>,
    /// Seed for the window start times with `--from-csv`.
    #[arg(long, default_value_t = 0, requires = "from_csv")]
    window_seed: u64,
    /// Output WVF1 file, or a new directory when `--count` is given.
    #[arg(long)]
    out: PathBuf,
    /// Number of fields to write: consecutive generator seeds, or random windows.
    #[arg(long)]
    count: Option<usize>,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Debug, Args)]
struct DecomposeArgs {
    #[arg(long)]
    input: PathBuf,
    /// New directory for the band files and manifest.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    frame: FrameArgs,
}

#[derive(Debug, Args)]
struct ReconstructArgs {
    /// Directory written by `decompose`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["input", "corpus"]))]
struct NtermArgs {
    /// One WVF1 file; writes its curves.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Directory of WVF1 files; writes per-n means with 95% intervals.
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "boostlet,dwt")]
    rep: Vec<RepChoice>,
    /// Increasing truncation sizes, e.g. `10,50,100` or `100:100:1000`.
    #[arg(long, default_value = "10,50,100,500,1000")]
    n_list: String,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    frame: FrameArgs,
    #[command(flatten)]
    wavelet: WaveletArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ResidualChoice {
    Observation,
    GroundTruth,
}

#[derive(Debug, Args)]
struct DenoiseShared {
    #[arg(long, value_enum, default_value = "auto")]
    gamma_mode: GammaChoice,
    #[arg(long, default_value_t = denoise::DEFAULT_GAMMA_COUNT)]
    n_gammas: usize,
    /// Signal the L-curve residual is measured against.
    #[arg(long, value_enum, default_value = "observation")]
    residual: ResidualChoice,
    /// Neighbor spacing for the curvature estimate, as a fraction of the curve extent.
    #[arg(long, default_value_t = denoise::DEFAULT_CORNER_SPACING)]
    corner_spacing: f64,
    #[arg(long, default_value_t = 0)]
    noise_seed: u64,
}

impl DenoiseShared {
    fn config(&self) -> DenoiseConfig {
        DenoiseConfig {
            gamma_mode: match self.gamma_mode {
                GammaChoice::Auto => GammaMode::Auto,
                GammaChoice::SqrtN => GammaMode::SqrtN,
            },
            n_gammas: self.n_gammas,
            residual: match self.residual {
                ResidualChoice::Observation => ResidualReference::Observation,
                ResidualChoice::GroundTruth => ResidualReference::GroundTruth,
            },
            corner_spacing: self.corner_spacing,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GammaChoice {
    /// Log-spaced grid relative to the largest coefficient.
    Auto,
    /// Fixed per-representation range in units of sqrt(N), for normalized data.
    #[value(name = "paper")]
    SqrtN,
}

#[derive(Debug, Args)]
struct DenoiseArgs {
    /// Clean field when `--snr` is given; otherwise the observation to denoise.
    #[arg(long)]
    input: PathBuf,
    /// Add Gaussian noise at this SNR (dB) and score against the clean input.
    #[arg(long, allow_negative_numbers = true)]
    snr: Option<f64>,
    #[arg(long, value_enum, default_value = "boostlet")]
    rep: RepChoice,
    /// Sweep table output.
    #[arg(long)]
    out_sweep: PathBuf,
    /// Denoised field output.
    #[arg(long)]
    out_field: Option<PathBuf>,
    #[command(flatten)]
    shared: DenoiseShared,
    #[command(flatten)]
    frame: FrameArgs,
    #[command(flatten)]
    wavelet: WaveletArgs,
}

#[derive(Debug, Args)]
struct SweepSnrArgs {
    /// SNR values in dB: `start:step:stop` or a comma list.
    #[arg(long, default_value = "5:5:35", allow_hyphen_values = true)]
    snrs: String,
    /// Directory of clean WVF1 fields.
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "boostlet,dwt")]
    reps: Vec<RepChoice>,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    shared: DenoiseShared,
    #[command(flatten)]
    frame: FrameArgs,
    #[command(flatten)]
    wavelet: WaveletArgs,
}

/// Parses `a:step:b` (inclusive) or `a,b,c`.
fn parse_list(text: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidArgument(format!("cannot parse list {text:?}"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [start, step, stop] => {
            let (start, step, stop) = (num(start)?, num(step)?, num(stop)?);
            if step.is_nan() || step <= 0.0 || stop < start {
                return Err(bad());
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|i| start + i as f64 * step).collect())
        }
        [_] => text.split(',').map(num).collect(),
        _ => Err(bad()),
    }
}

fn parse_counts(text: &str) -> Result<Vec<usize>> {
    parse_list(text)?
        .into_iter()
        .map(|v| {
            if v >= 0.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(Error::InvalidArgument(format!("{v} is not a count")))
            }
        })
        .collect()
}

/// Sorted `.wvf` files in `dir`.
fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let files: Vec<PathBuf> = io::list_dir(dir)?
        .into_iter()
        .filter(|p| p.extension().is_some_and(|e| e == "wvf"))
        .collect();
    if files.is_empty() {
        return Err(Error::InvalidArgument(format!("no .wvf files in {}", dir.display())));
    }
    Ok(files)
}

fn read_corpus(dir: &Path) -> Result<Vec<WavefieldGrid>> {
    corpus_files(dir)?.iter().map(io::read_wavefield).collect()
}

fn framecheck(args: &FramecheckArgs) -> Result<i32> {
    let frame = build_frame(&args.frame.spec(args.grid.geometry()?)?)?;
    let error = frame.tightness_error();
    println!("tightness_error: {}", io::fmt_num(error));
    if let Some(dir) = &args.export {
        io::write_frame(&frame, dir)?;
    }
    Ok(if error <= TIGHTNESS_TOLERANCE { 0 } else { 1 })
}

fn synth(args: &SynthArgs) -> Result<i32> {
    let spec: SyntheticSpec = match &args.spec {
        Some(path) => serde_json::from_slice(&fs::read(path)?)?,
        None => SyntheticSpec::default(),
    };
    let geometry = args.grid.geometry()?;
    let Some(count) = args.count else {
        io::write_wavefield(&gen_wavefield(&geometry, &spec)?, &args.out)?;
        return Ok(0);
    };
    let fields = match &args.from_csv {
        Some(path) => io::import_csv_windows(path, &geometry, count, args.window_seed)?,
        None => (0..count as u64)
            .map(|i| gen_wavefield(&geometry, &spec.clone().with_seed(spec.seed + i)))
            .collect::<Result<Vec<_>>>()?,
    };
    io::write_dir_atomic(&args.out, |dir| {
        for (i, field) in fields.iter().enumerate() {
            fs::write(dir.join(format!("field_{i:05}.wvf")), io::encode_wavefield(field)?)?;
        }
        Ok(())
    })?;
    Ok(0)
}

fn decompose(args: &DecomposeArgs) -> Result<i32> {
    let field = io::read_wavefield(&args.input)?;
    let rep = BoostletTransform::new(&args.frame.spec(*field.geometry())?)?;
    let coefficients = rep.analyze(&field)?;
    io::write_coefficients(&coefficients, &args.out)?;
    println!("bands: {}", coefficients.band_count());
    Ok(0)
}

fn reconstruct(args: &ReconstructArgs) -> Result<i32> {
    let coefficients = io::read_coefficients(&args.input)?;
    let rep = BoostletTransform::new(coefficients.spec())?;
    io::write_wavefield(&rep.synthesize(&coefficients)?, &args.out)?;
    Ok(0)
}

fn nterm(args: &NtermArgs) -> Result<i32> {
    let n_values = parse_counts(&args.n_list)?;
    let fields = match (&args.input, &args.corpus) {
        (Some(path), _) => vec![io::read_wavefield(path)?],
        (None, Some(dir)) => read_corpus(dir)?,
        (None, None) => unreachable!("clap requires a source"),
    };
    let geometry = *fields[0].geometry();
    let mut per_rep = Vec::new();
    for &choice in &args.rep {
        let rep = build_rep(choice, geometry, &args.frame, &args.wavelet)?;
        let curves = fields
            .iter()
            .map(|y| nterm_curve(y, &rep, &n_values))
            .collect::<Result<Vec<_>>>()?;
        per_rep.push(curves);
    }
    if args.input.is_some() {
        let curves: Vec<_> = per_rep.into_iter().flatten().collect();
        io::write_curve_csv(&curves, &args.out)?;
    } else {
        let summaries = per_rep.iter().map(|c| summarize_curves(c)).collect::<Result<Vec<_>>>()?;
        io::write_curve_summary_csv(&summaries, &args.out)?;
    }
    Ok(0)
}

fn denoise_cmd(args: &DenoiseArgs) -> Result<i32> {
    let input = io::read_wavefield(&args.input)?;
    let rep = build_rep(args.rep, *input.geometry(), &args.frame, &args.wavelet)?;
    let (observation, truth) = match args.snr {
        Some(snr) => (denoise::add_noise(&input, &NoiseSpec::new(snr, args.shared.noise_seed)?)?, Some(&input)),
        None => (input.clone(), None),
    };
    let outcome = denoise::denoise(&observation, &rep, &args.shared.config(), truth).map_err(|e| match args.shared.gamma_mode {
        GammaChoice::SqrtN => Error::InvalidArgument(format!(
            "{} (these thresholds scale with sqrt(N); rescale the input so they bracket its coefficients)",
            match e {
                Error::InvalidArgument(msg) => msg,
                other => other.to_string(),
            }
        )),
        GammaChoice::Auto => e,
    })?;
    io::write_sweep_csv(&outcome.report, &args.out_sweep)?;
    if let Some(path) = &args.out_field {
        io::write_wavefield(&outcome.denoised, path)?;
    }
    let selection = outcome.report.selection.expect("denoise selects a threshold");
    println!("gamma_star: {}", io::fmt_num(selection.gamma));
    if selection.degenerate {
        println!("warning: L-curve has no corner; used the middle of the threshold grid");
    }
    if let Some(e) = outcome.error_percent() {
        println!("error_percent: {}", io::fmt_num(e));
    }
    Ok(0)
}

fn sweep_snr(args: &SweepSnrArgs) -> Result<i32> {
    let snrs = parse_list(&args.snrs)?;
    let fields = read_corpus(&args.corpus)?;
    let geometry = *fields[0].geometry();
    let reps = args
        .reps
        .iter()
        .map(|&c| build_rep(c, geometry, &args.frame, &args.wavelet))
        .collect::<Result<Vec<_>>>()?;
    let rows = denoise::snr_sweep(&fields, &reps, &snrs, &args.shared.config(), args.shared.noise_seed)?;
    io::write_snr_summary_csv(&rows, &args.out)?;
    for row in &rows {
        println!("{:>6} dB  {:<9} {:.4}%", row.snr_db, row.representation_tag, row.errors.mean);
    }
    Ok(0)
}

/// Runs the command line given in `argv` (including the program name) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = match &cli.command {
        Command::Framecheck(a) => framecheck(a),
        Command::Synth(a) => synth(a),
        Command::Decompose(a) => decompose(a),
        Command::Reconstruct(a) => reconstruct(a),
        Command::Nterm(a) => nterm(a),
        Command::Denoise(a) => denoise_cmd(a),
        Command::SweepSnr(a) => sweep_snr(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
