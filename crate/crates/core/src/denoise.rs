//! Noise injection, hard thresholding, threshold sweeps and L-curve
//! selection of the operating threshold.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::WavefieldGrid;
use crate::representation::{Coefficients, Representation};
use crate::sparsity::rel_error;
use crate::stats::MeanCi;

/// Zero-mean Gaussian white noise at a target signal-to-noise ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub snr_db: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(snr_db: f64, seed: u64) -> Result<Self> {
        if !snr_db.is_finite() {
            return Err(Error::InvalidArgument(format!("SNR must be finite, got {snr_db}")));
        }
        Ok(Self { snr_db, seed })
    }
}

/// Returns `y + e` with `10 log10(mean(y^2) / mean(e^2))` equal to the
/// requested SNR for the realized noise sample.
pub fn add_noise(y: &WavefieldGrid, spec: &NoiseSpec) -> Result<WavefieldGrid> {
    NoiseSpec::new(spec.snr_db, spec.seed)?;
    let signal_power = y.power();
    if signal_power == 0.0 {
        return Err(Error::InvalidArgument("cannot set an SNR against a zero field".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let noise: Vec<f64> = (0..y.geometry().len()).map(|_| StandardNormal.sample(&mut rng)).collect();
    let noise_power = noise.iter().map(|v| v * v).sum::<f64>() / noise.len() as f64;
    let target = signal_power / 10f64.powf(spec.snr_db / 10.0);
    let scale = (target / noise_power).sqrt();
    let mut data = y.data().clone();
    for (d, e) in data.iter_mut().zip(&noise) {
        *d += scale * e;
    }
    y.with_data(data)
}

/// Keeps coefficients with `|a| >= gamma` and zeroes the rest.
pub fn hard_threshold<C: Coefficients>(coefficients: &C, gamma: f64) -> Result<C> {
    check_gamma(gamma)?;
    let mut out = coefficients.clone();
    for v in out.values_mut() {
        if v.abs() < gamma {
            *v = 0.0;
        }
    }
    Ok(out)
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma.is_nan() || gamma < 0.0 {
        return Err(Error::InvalidArgument(format!("threshold must be non-negative, got {gamma}")));
    }
    Ok(())
}

/// How the threshold grid is laid out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GammaMode {
    /// Log-spaced from `1e-3 * max|a|` to `max|a|`; invariant to data scaling.
    #[default]
    Auto,
    /// Linear over a per-representation range in units of `sqrt(N)`, with `N`
    /// the number of samples in the window. Assumes the caller normalized the data.
    #[serde(rename = "paper")]
    SqrtN,
}

/// Threshold range in units of `sqrt(N)` used by [`GammaMode::SqrtN`].
pub fn sqrt_n_gamma_range(tag: &str) -> Option<(f64, f64)> {
    match tag {
        "boostlet" => Some((0.5, 1.0)),
        "dwt" => Some((1.0, 10.0)),
        _ => None,
    }
}

pub const DEFAULT_GAMMA_COUNT: usize = 100;

/// Builds a strictly increasing, positive threshold grid.
pub fn gamma_grid<C: Coefficients>(
    mode: GammaMode,
    coefficients: &C,
    tag: &str,
    n_samples: usize,
    count: usize,
) -> Result<Vec<f64>> {
    if count < 2 {
        return Err(Error::InvalidArgument("a threshold grid needs at least two values".into()));
    }
    let (lo, hi, log) = match mode {
        GammaMode::Auto => {
            let max = coefficients.max_abs();
            if max == 0.0 {
                return Err(Error::InvalidArgument("all coefficients are zero".into()));
            }
            (1e-3 * max, max, true)
        }
        GammaMode::SqrtN => {
            let (lo, hi) = sqrt_n_gamma_range(tag)
                .ok_or_else(|| Error::InvalidArgument(format!("no threshold range for representation {tag:?}")))?;
            let root = (n_samples as f64).sqrt();
            (lo * root, hi * root, false)
        }
    };
    let step = |i: usize| i as f64 / (count - 1) as f64;
    Ok((0..count)
        .map(|i| match i {
            0 => lo,
            i if i == count - 1 => hi,
            i if log => lo * (hi / lo).powf(step(i)),
            i => lo + (hi - lo) * step(i),
        })
        .collect())
}

/// Signal that `rho(gamma)` measures the residual against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualReference {
    /// The noisy observation that was thresholded.
    #[default]
    Observation,
    /// The clean field; requires ground truth.
    GroundTruth,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LcurveSelection {
    pub index: usize,
    pub gamma: f64,
    /// Set when the curve has no usable corner; `index` is then the mid-grid point.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdSweepResult {
    pub representation_tag: String,
    pub gammas: Vec<f64>,
    /// `ln ||y(gamma) - y_res||_2`; negative infinity when the residual vanishes.
    pub rho: Vec<f64>,
    /// `ln ||b(gamma)||_1`; negative infinity when every coefficient is removed.
    pub eta: Vec<f64>,
    /// Relative error against ground truth in percent, if it was supplied.
    pub errors_percent: Option<Vec<f64>>,
    /// Number of coefficients kept at each threshold.
    pub kept: Vec<usize>,
    pub selection: Option<LcurveSelection>,
}

impl ThresholdSweepResult {
    pub fn gamma_star(&self) -> Option<f64> {
        self.selection.map(|s| s.gamma)
    }

    pub fn gamma_star_index(&self) -> Option<usize> {
        self.selection.map(|s| s.index)
    }

    /// Error at the selected threshold.
    pub fn selected_error(&self) -> Option<f64> {
        Some(self.errors_percent.as_ref()?[self.selection?.index])
    }

    /// Smallest error anywhere on the grid.
    pub fn best_error(&self) -> Option<f64> {
        self.errors_percent.as_ref()?.iter().copied().reduce(f64::min)
    }
}

struct SweepPoint {
    rho: f64,
    eta: f64,
    error: Option<f64>,
    kept: usize,
    field: Option<WavefieldGrid>,
}

fn ln_or_neg_inf(v: f64) -> f64 {
    if v > 0.0 {
        v.ln()
    } else {
        f64::NEG_INFINITY
    }
}

fn l2_distance(a: &WavefieldGrid, b: &WavefieldGrid) -> f64 {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

#[allow(clippy::too_many_arguments)]
fn sweep_point<R: Representation>(
    rep: &R,
    y_eps: &WavefieldGrid,
    coefficients: &R::Coefficients,
    gamma: f64,
    residual_ref: &WavefieldGrid,
    y_ref: Option<&WavefieldGrid>,
    keep_field: bool,
) -> Result<SweepPoint> {
    let b = hard_threshold(coefficients, gamma)?;
    let kept = b.values().iter().filter(|v| **v != 0.0).count();
    let removed = coefficients.values().iter().filter(|v| **v != 0.0).count() - kept;
    // Nothing removed: the reconstruction is the observation itself.
    let y_gamma = if removed == 0 {
        y_eps.clone()
    } else {
        rep.synthesize(&b)?
    };
    let error = y_ref.map(|y| rel_error(y, &y_gamma)).transpose()?;
    Ok(SweepPoint {
        rho: ln_or_neg_inf(l2_distance(&y_gamma, residual_ref)),
        eta: ln_or_neg_inf(b.l1_norm()),
        error,
        kept,
        field: keep_field.then_some(y_gamma),
    })
}

/// Thresholds `y_eps` at every `gamma`, recording the L-curve coordinates and,
/// when `y_ref` is given, the error against it. No threshold is selected.
pub fn threshold_sweep<R: Representation>(
    y_eps: &WavefieldGrid,
    rep: &R,
    gammas: &[f64],
    y_ref: Option<&WavefieldGrid>,
    residual: ResidualReference,
) -> Result<ThresholdSweepResult> {
    let coefficients = rep.analyze(y_eps)?;
    sweep_coefficients(y_eps, rep, &coefficients, gammas, y_ref, residual)
}

fn residual_reference<'a>(
    y_eps: &'a WavefieldGrid,
    y_ref: Option<&'a WavefieldGrid>,
    residual: ResidualReference,
) -> Result<&'a WavefieldGrid> {
    match residual {
        ResidualReference::Observation => Ok(y_eps),
        ResidualReference::GroundTruth => {
            y_ref.ok_or_else(|| Error::InvalidArgument("ground-truth residual requested without ground truth".into()))
        }
    }
}

fn check_gammas(gammas: &[f64]) -> Result<()> {
    if gammas.is_empty() {
        return Err(Error::InvalidArgument("empty threshold list".into()));
    }
    for &g in gammas {
        check_gamma(g)?;
    }
    if gammas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("thresholds must be strictly increasing".into()));
    }
    Ok(())
}

fn sweep_coefficients<R: Representation>(
    y_eps: &WavefieldGrid,
    rep: &R,
    coefficients: &R::Coefficients,
    gammas: &[f64],
    y_ref: Option<&WavefieldGrid>,
    residual: ResidualReference,
) -> Result<ThresholdSweepResult> {
    check_gammas(gammas)?;
    let residual_ref = residual_reference(y_eps, y_ref, residual)?;
    let points = gammas
        .par_iter()
        .map(|&g| sweep_point(rep, y_eps, coefficients, g, residual_ref, y_ref, false))
        .collect::<Result<Vec<_>>>()?;
    Ok(ThresholdSweepResult {
        representation_tag: rep.tag().to_string(),
        gammas: gammas.to_vec(),
        rho: points.iter().map(|p| p.rho).collect(),
        eta: points.iter().map(|p| p.eta).collect(),
        errors_percent: y_ref.map(|_| points.iter().map(|p| p.error.unwrap_or(f64::NAN)).collect()),
        kept: points.iter().map(|p| p.kept).collect(),
        selection: None,
    })
}

/// Relative size below which a triple counts as collinear.
const COLLINEAR_TOLERANCE: f64 = 1e-12;

/// Default neighbor spacing for [`lcurve_select`], as a fraction of the
/// diagonal of the curve's bounding box.
pub const DEFAULT_CORNER_SPACING: f64 = 0.02;

/// [`lcurve_select_with`] at [`DEFAULT_CORNER_SPACING`].
pub fn lcurve_select(sweep: &ThresholdSweepResult) -> Result<LcurveSelection> {
    lcurve_select_with(sweep, DEFAULT_CORNER_SPACING)
}

/// Picks the threshold at the point of maximum Menger (circumscribed-circle)
/// curvature of the `(eta, rho)` curve.
///
/// Points with an infinite coordinate are dropped and runs of identical
/// points are collapsed onto their smallest threshold. The curvature at a
/// point is taken from the triangle it forms with the nearest points on
/// either side lying at least `spacing * diagonal` away, so removal-to-removal
/// jitter along the curve does not masquerade as a corner; `spacing = 0`
/// uses the immediate neighbors. Points without such neighbors on both sides,
/// including the endpoints, are not candidates. Ties go to the smaller
/// threshold. A curve without any bend selects the middle of the grid and
/// sets the degeneracy flag.
pub fn lcurve_select_with(sweep: &ThresholdSweepResult, spacing: f64) -> Result<LcurveSelection> {
    let n = sweep.gammas.len();
    if sweep.rho.len() != n || sweep.eta.len() != n {
        return Err(Error::InvalidArgument("sweep columns have different lengths".into()));
    }
    if !(spacing.is_finite() && spacing >= 0.0) {
        return Err(Error::InvalidArgument(format!("corner spacing must be non-negative, got {spacing}")));
    }
    let mut points: Vec<(usize, f64, f64)> = Vec::new();
    for i in 0..n {
        let (x, y) = (sweep.eta[i], sweep.rho[i]);
        if !(x.is_finite() && y.is_finite()) {
            continue;
        }
        if points.last().is_some_and(|&(_, px, py)| px == x && py == y) {
            continue;
        }
        points.push((i, x, y));
    }
    if points.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "L-curve needs at least 3 distinct finite points, found {}",
            points.len()
        )));
    }
    let span = |pick: fn(&(usize, f64, f64)) -> f64| {
        let (lo, hi) = points
            .iter()
            .map(pick)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        hi - lo
    };
    let min_chord = spacing * span(|p| p.1).hypot(span(|p| p.2));
    let dist = |a: &(usize, f64, f64), b: &(usize, f64, f64)| (b.1 - a.1).hypot(b.2 - a.2);

    let mut best: Option<(usize, f64)> = None;
    let mut bent = false;
    for (i, b) in points.iter().enumerate() {
        let before = points[..i].iter().rev().find(|a| dist(a, b) >= min_chord && dist(a, b) > 0.0);
        let after = points[i + 1..].iter().find(|c| dist(b, c) >= min_chord && dist(b, c) > 0.0);
        let (Some(a), Some(c)) = (before, after) else {
            continue;
        };
        let (abx, aby) = (b.1 - a.1, b.2 - a.2);
        let (acx, acy) = (c.1 - a.1, c.2 - a.2);
        let (ab, bc, ac) = (dist(a, b), dist(b, c), dist(a, c));
        let cross = abx * acy - aby * acx;
        if cross.abs() > COLLINEAR_TOLERANCE * ab * ac {
            bent = true;
        }
        let curvature = 2.0 * cross.abs() / (ab * bc * ac);
        if best.is_none_or(|(_, k)| curvature > k) {
            best = Some((b.0, curvature));
        }
    }
    match best {
        Some((index, _)) if bent => Ok(LcurveSelection {
            index,
            gamma: sweep.gammas[index],
            degenerate: false,
        }),
        _ => {
            let index = n / 2;
            Ok(LcurveSelection {
                index,
                gamma: sweep.gammas[index],
                degenerate: true,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DenoiseConfig {
    pub gamma_mode: GammaMode,
    pub n_gammas: usize,
    pub residual: ResidualReference,
    /// Neighbor spacing passed to [`lcurve_select_with`].
    pub corner_spacing: f64,
}

impl Default for DenoiseConfig {
    fn default() -> Self {
        Self {
            gamma_mode: GammaMode::Auto,
            n_gammas: DEFAULT_GAMMA_COUNT,
            residual: ResidualReference::Observation,
            corner_spacing: DEFAULT_CORNER_SPACING,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DenoiseOutcome {
    pub denoised: WavefieldGrid,
    pub report: ThresholdSweepResult,
}

impl DenoiseOutcome {
    /// Relative error at the selected threshold, when ground truth was given.
    pub fn error_percent(&self) -> Option<f64> {
        self.report.selected_error()
    }
}

/// Sweeps a threshold grid, selects the L-curve corner and returns the
/// reconstruction there.
pub fn denoise<R: Representation>(
    y_eps: &WavefieldGrid,
    rep: &R,
    config: &DenoiseConfig,
    y_ref: Option<&WavefieldGrid>,
) -> Result<DenoiseOutcome> {
    let coefficients = rep.analyze(y_eps)?;
    let gammas = gamma_grid(
        config.gamma_mode,
        &coefficients,
        rep.tag(),
        y_eps.geometry().len(),
        config.n_gammas,
    )?;
    let mut report = sweep_coefficients(y_eps, rep, &coefficients, &gammas, y_ref, config.residual)?;
    let selection = lcurve_select_with(&report, config.corner_spacing)?;
    report.selection = Some(selection);
    let residual_ref = residual_reference(y_eps, y_ref, config.residual)?;
    let point = sweep_point(rep, y_eps, &coefficients, selection.gamma, residual_ref, y_ref, true)?;
    Ok(DenoiseOutcome {
        denoised: point.field.expect("field requested"),
        report,
    })
}

/// One row of a corpus summary: error statistics at one SNR for one representation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SnrSummary {
    pub snr_db: f64,
    pub representation_tag: String,
    pub errors: MeanCi,
}

/// Seed of the noise realization for corpus entry `field` at SNR index `snr`.
pub fn corpus_noise_seed(base: u64, field: usize, snr: usize) -> u64 {
    base.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add((field as u64) << 16)
        .wrapping_add(snr as u64)
}

/// Denoises every clean field at every SNR with every representation and
/// summarizes the selected-threshold errors. Each (field, SNR) pair gets one
/// noise realization shared by all representations.
pub fn snr_sweep<R: Representation>(
    clean: &[WavefieldGrid],
    reps: &[R],
    snrs: &[f64],
    config: &DenoiseConfig,
    noise_seed: u64,
) -> Result<Vec<SnrSummary>> {
    let mut rows = Vec::with_capacity(snrs.len() * reps.len());
    for (si, &snr_db) in snrs.iter().enumerate() {
        let per_field = clean
            .par_iter()
            .enumerate()
            .map(|(fi, y)| {
                let noisy = add_noise(y, &NoiseSpec::new(snr_db, corpus_noise_seed(noise_seed, fi, si))?)?;
                reps.iter()
                    .map(|rep| {
                        denoise(&noisy, rep, config, Some(y))?
                            .error_percent()
                            .ok_or_else(|| Error::InvalidArgument("missing error".into()))
                    })
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        for (ri, rep) in reps.iter().enumerate() {
            let errors: Vec<f64> = per_field.iter().map(|e| e[ri]).collect();
            rows.push(SnrSummary {
                snr_db,
                representation_tag: rep.tag().to_string(),
                errors: MeanCi::from_samples(&errors),
            });
        }
    }
    Ok(rows)
}
