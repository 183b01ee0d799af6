//! n-term nonlinear approximation: global magnitude ranking, truncation,
//! l1 norms of the kept coefficients and relative reconstruction errors.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::WavefieldGrid;
use crate::representation::{Coefficients, Representation};
use crate::stats::MeanCi;

/// Flat indices ordered by decreasing magnitude; equal magnitudes keep
/// their flat (band, then bin) order.
pub fn magnitude_ranking(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    // Stable sort on magnitude alone preserves index order among ties.
    order.sort_by(|&a, &b| values[b].abs().total_cmp(&values[a].abs()));
    order
}

/// Keeps the `n` largest-magnitude coefficients across all bands.
pub fn nterm_truncate<C: Coefficients>(coefficients: &C, n: usize) -> Result<C> {
    let total = coefficients.len();
    if n > total {
        return Err(Error::InvalidArgument(format!("n = {n} exceeds coefficient count {total}")));
    }
    let order = magnitude_ranking(coefficients.values());
    Ok(keep_ranked(coefficients, &order[..n]))
}

fn keep_ranked<C: Coefficients>(coefficients: &C, kept: &[usize]) -> C {
    let mut out = coefficients.zeroed();
    let (src, dst) = (coefficients.values(), out.values_mut());
    for &i in kept {
        dst[i] = src[i];
    }
    out
}

/// `||y - y_hat||^2 / ||y||^2 * 100`.
pub fn rel_error(y: &WavefieldGrid, y_hat: &WavefieldGrid) -> Result<f64> {
    if y.nx() != y_hat.nx() || y.nt() != y_hat.nt() {
        return Err(Error::ShapeMismatch {
            expected: (y.nx(), y.nt()),
            actual: (y_hat.nx(), y_hat.nt()),
        });
    }
    let reference = y.energy();
    if reference == 0.0 {
        return Err(Error::InvalidArgument("relative error against a zero field".into()));
    }
    let diff: f64 = y
        .as_slice()
        .iter()
        .zip(y_hat.as_slice())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(100.0 * diff / reference)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproximationCurve {
    pub n_values: Vec<usize>,
    pub l1_norms: Vec<f64>,
    pub rel_errors: Vec<f64>,
    pub representation_tag: String,
}

impl ApproximationCurve {
    pub fn len(&self) -> usize {
        self.n_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n_values.is_empty()
    }
}

/// Truncates, synthesizes and scores `y` for each entry of `n_values`.
///
/// The coefficients are ranked once; each `n` reuses the prefix.
pub fn nterm_curve<R: Representation>(y: &WavefieldGrid, rep: &R, n_values: &[usize]) -> Result<ApproximationCurve> {
    if n_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("n values must be strictly increasing".into()));
    }
    let coefficients = rep.analyze(y)?;
    let total = coefficients.len();
    if let Some(&n) = n_values.last() {
        if n > total {
            return Err(Error::InvalidArgument(format!("n = {n} exceeds coefficient count {total}")));
        }
    }
    let order = magnitude_ranking(coefficients.values());
    let values = coefficients.values();

    let mut l1_norms = Vec::with_capacity(n_values.len());
    let mut rel_errors = Vec::with_capacity(n_values.len());
    let (mut l1, mut counted) = (0.0, 0);
    for &n in n_values {
        l1 += order[counted..n].iter().map(|&i| values[i].abs()).sum::<f64>();
        counted = n;
        let approx = rep.synthesize(&keep_ranked(&coefficients, &order[..n]))?;
        l1_norms.push(l1);
        rel_errors.push(rel_error(y, &approx)?);
    }
    Ok(ApproximationCurve {
        n_values: n_values.to_vec(),
        l1_norms,
        rel_errors,
        representation_tag: rep.tag().to_string(),
    })
}

/// Per-`n` mean and 95% interval of a corpus of curves sharing `n_values`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveSummary {
    pub n_values: Vec<usize>,
    pub l1: Vec<MeanCi>,
    pub rel_error: Vec<MeanCi>,
    pub representation_tag: String,
}

pub fn summarize_curves(curves: &[ApproximationCurve]) -> Result<CurveSummary> {
    let first = curves
        .first()
        .ok_or_else(|| Error::InvalidArgument("no curves to summarize".into()))?;
    if curves.iter().any(|c| c.n_values != first.n_values) {
        return Err(Error::InvalidArgument("curves use different n values".into()));
    }
    let column = |pick: fn(&ApproximationCurve) -> &Vec<f64>, i: usize| {
        MeanCi::from_samples(&curves.iter().map(|c| pick(c)[i]).collect::<Vec<_>>())
    };
    Ok(CurveSummary {
        n_values: first.n_values.clone(),
        l1: (0..first.len()).map(|i| column(|c| &c.l1_norms, i)).collect(),
        rel_error: (0..first.len()).map(|i| column(|c| &c.rel_errors, i)).collect(),
        representation_tag: first.representation_tag.clone(),
    })
}
