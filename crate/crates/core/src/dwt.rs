//! Separable two-dimensional orthogonal wavelet transform with periodic
//! boundaries, used as the comparison baseline.
//!
//! Filters are data: the lowpass taps are read from a text file and the
//! highpass filter follows from the quadrature-mirror rule
//! `g[n] = (-1)^n h[L-1-n]`.

use std::path::Path;

use ndarray::{s, Array2, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridGeometry, WavefieldGrid};
use crate::representation::{Coefficients, Representation};

/// Tolerance on `sum h^2 = 1` and `sum h = sqrt 2`.
pub const FILTER_TOLERANCE: f64 = 1e-10;

const DB45_TAPS: &str = include_str!("../data/db45.txt");

#[derive(Debug, Clone, PartialEq)]
pub struct FilterPair {
    lowpass: Vec<f64>,
    highpass: Vec<f64>,
}

impl FilterPair {
    pub fn from_lowpass(lowpass: Vec<f64>) -> Result<Self> {
        let len = lowpass.len();
        if len == 0 || !len.is_multiple_of(2) {
            return Err(Error::InvalidFilter(format!("filter length must be even and nonzero, got {len}")));
        }
        if lowpass.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidFilter("non-finite tap".into()));
        }
        let energy: f64 = lowpass.iter().map(|v| v * v).sum();
        if (energy - 1.0).abs() > FILTER_TOLERANCE {
            return Err(Error::InvalidFilter(format!("sum of squared taps is {energy}, expected 1")));
        }
        let sum: f64 = lowpass.iter().sum();
        if (sum - std::f64::consts::SQRT_2).abs() > FILTER_TOLERANCE {
            return Err(Error::InvalidFilter(format!("sum of taps is {sum}, expected sqrt(2)")));
        }
        let highpass = (0..len)
            .map(|n| if n % 2 == 0 { 1.0 } else { -1.0 } * lowpass[len - 1 - n])
            .collect();
        Ok(Self { lowpass, highpass })
    }

    /// Parses whitespace-separated decimal lowpass taps.
    pub fn parse(text: &str) -> Result<Self> {
        let taps = text
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .map_err(|e| Error::InvalidFilter(format!("bad coefficient {tok:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_lowpass(taps)
    }

    pub fn haar() -> Self {
        Self::from_lowpass(vec![std::f64::consts::FRAC_1_SQRT_2; 2]).expect("Haar taps are orthonormal")
    }

    /// Daubechies filter with 45 vanishing moments (90 taps), from the bundled coefficient file.
    pub fn db45() -> Self {
        Self::parse(DB45_TAPS).expect("bundled db45 taps are orthonormal")
    }

    pub fn lowpass(&self) -> &[f64] {
        &self.lowpass
    }

    pub fn highpass(&self) -> &[f64] {
        &self.highpass
    }

    pub fn len(&self) -> usize {
        self.lowpass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lowpass.is_empty()
    }
}

/// Reads a filter coefficient file.
pub fn load_filters(path: impl AsRef<Path>) -> Result<FilterPair> {
    let text = std::fs::read_to_string(path.as_ref())?;
    FilterPair::parse(&text)
}

/// Subband orientation. The first letter refers to the spatial axis, the
/// second to the time axis (`L` lowpass, `H` highpass).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SubbandKind {
    LL,
    LH,
    HL,
    HH,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Subband {
    pub kind: SubbandKind,
    /// Decomposition level; 1 is the finest.
    pub level: usize,
    pub rows: usize,
    pub cols: usize,
    offset: usize,
}

/// Critically sampled coefficients: the coarsest LL band, then LH, HL, HH
/// per level from coarsest to finest.
#[derive(Debug, Clone, PartialEq)]
pub struct DwtCoefficients {
    geometry: GridGeometry,
    levels: usize,
    layout: Vec<Subband>,
    data: Vec<f64>,
}

impl DwtCoefficients {
    fn zeros(geometry: GridGeometry, levels: usize) -> Self {
        let (nx, nt) = geometry.shape();
        let mut layout = Vec::with_capacity(1 + 3 * levels);
        let mut offset = 0;
        let mut push = |kind, level, rows, cols| {
            layout.push(Subband {
                kind,
                level,
                rows,
                cols,
                offset,
            });
            offset += rows * cols;
        };
        push(SubbandKind::LL, levels, nx >> levels, nt >> levels);
        for level in (1..=levels).rev() {
            let (rows, cols) = (nx >> level, nt >> level);
            push(SubbandKind::LH, level, rows, cols);
            push(SubbandKind::HL, level, rows, cols);
            push(SubbandKind::HH, level, rows, cols);
        }
        Self {
            geometry,
            levels,
            layout,
            data: vec![0.0; nx * nt],
        }
    }

    pub fn geometry(&self) -> &GridGeometry {
        &self.geometry
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn subbands(&self) -> &[Subband] {
        &self.layout
    }

    pub fn subband(&self, kind: SubbandKind, level: usize) -> Option<ArrayView2<'_, f64>> {
        self.layout
            .iter()
            .find(|b| b.kind == kind && b.level == level)
            .map(|b| self.view(b))
    }

    fn view(&self, band: &Subband) -> ArrayView2<'_, f64> {
        let len = band.rows * band.cols;
        ArrayView2::from_shape((band.rows, band.cols), &self.data[band.offset..band.offset + len])
            .expect("subband layout is consistent")
    }

    fn write(&mut self, band: Subband, source: ArrayView2<'_, f64>) {
        let dst = &mut self.data[band.offset..band.offset + band.rows * band.cols];
        for (d, v) in dst.iter_mut().zip(source.iter()) {
            *d = *v;
        }
    }
}

impl Coefficients for DwtCoefficients {
    fn values(&self) -> &[f64] {
        &self.data
    }

    fn values_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }
}

/// One periodic analysis step: `out[..n/2]` lowpass, `out[n/2..]` highpass.
fn analyze_line(input: &[f64], out: &mut [f64], filters: &FilterPair) {
    let n = input.len();
    let half = n / 2;
    for i in 0..half {
        let (mut lo, mut hi) = (0.0, 0.0);
        for (k, (h, g)) in filters.lowpass.iter().zip(&filters.highpass).enumerate() {
            let x = input[(2 * i + k) % n];
            lo += h * x;
            hi += g * x;
        }
        out[i] = lo;
        out[half + i] = hi;
    }
}

/// Transpose of [`analyze_line`].
fn synthesize_line(input: &[f64], out: &mut [f64], filters: &FilterPair) {
    let n = input.len();
    let half = n / 2;
    out.fill(0.0);
    for i in 0..half {
        let (lo, hi) = (input[i], input[half + i]);
        for (k, (h, g)) in filters.lowpass.iter().zip(&filters.highpass).enumerate() {
            out[(2 * i + k) % n] += h * lo + g * hi;
        }
    }
}

/// Applies `step` to every row (axis 1) of the top-left `rows x cols` block, then every column.
fn separable_pass(
    work: &mut Array2<f64>,
    rows: usize,
    cols: usize,
    filters: &FilterPair,
    step: fn(&[f64], &mut [f64], &FilterPair),
    columns_first: bool,
) {
    let mut input = vec![0.0; rows.max(cols)];
    let mut output = vec![0.0; rows.max(cols)];
    let mut do_rows = |work: &mut Array2<f64>| {
        for r in 0..rows {
            for c in 0..cols {
                input[c] = work[[r, c]];
            }
            step(&input[..cols], &mut output[..cols], filters);
            for c in 0..cols {
                work[[r, c]] = output[c];
            }
        }
    };
    let mut input2 = vec![0.0; rows.max(cols)];
    let mut output2 = vec![0.0; rows.max(cols)];
    let mut do_cols = |work: &mut Array2<f64>| {
        for c in 0..cols {
            for r in 0..rows {
                input2[r] = work[[r, c]];
            }
            step(&input2[..rows], &mut output2[..rows], filters);
            for r in 0..rows {
                work[[r, c]] = output2[r];
            }
        }
    };
    if columns_first {
        do_cols(work);
        do_rows(work);
    } else {
        do_rows(work);
        do_cols(work);
    }
}

fn check_levels(geometry: &GridGeometry, levels: usize) -> Result<()> {
    let block = 1usize.checked_shl(levels as u32).unwrap_or(0);
    if levels == 0 || block == 0 || !geometry.nx.is_multiple_of(block) || !geometry.nt.is_multiple_of(block) {
        return Err(Error::LevelDivisibility {
            nx: geometry.nx,
            nt: geometry.nt,
            levels,
        });
    }
    Ok(())
}

/// Multi-level periodic separable DWT.
pub fn dwt2(field: &WavefieldGrid, filters: &FilterPair, levels: usize) -> Result<DwtCoefficients> {
    let geometry = *field.geometry();
    check_levels(&geometry, levels)?;
    let mut work = field.data().clone();
    let mut out = DwtCoefficients::zeros(geometry, levels);
    for level in 1..=levels {
        let (rows, cols) = (geometry.nx >> (level - 1), geometry.nt >> (level - 1));
        separable_pass(&mut work, rows, cols, filters, analyze_line, false);
    }
    for band in out.layout.clone() {
        let (r0, c0) = match band.kind {
            SubbandKind::LL => (0, 0),
            SubbandKind::LH => (0, band.cols),
            SubbandKind::HL => (band.rows, 0),
            SubbandKind::HH => (band.rows, band.cols),
        };
        out.write(band, work.slice(s![r0..r0 + band.rows, c0..c0 + band.cols]));
    }
    Ok(out)
}

/// Inverse of [`dwt2`].
pub fn idwt2(coefficients: &DwtCoefficients, filters: &FilterPair) -> Result<WavefieldGrid> {
    let geometry = coefficients.geometry;
    check_levels(&geometry, coefficients.levels)?;
    let mut work = Array2::<f64>::zeros(geometry.shape());
    for band in &coefficients.layout {
        let (r0, c0) = match band.kind {
            SubbandKind::LL => (0, 0),
            SubbandKind::LH => (0, band.cols),
            SubbandKind::HL => (band.rows, 0),
            SubbandKind::HH => (band.rows, band.cols),
        };
        work.slice_mut(s![r0..r0 + band.rows, c0..c0 + band.cols])
            .assign(&coefficients.view(band));
    }
    for level in (1..=coefficients.levels).rev() {
        let (rows, cols) = (geometry.nx >> (level - 1), geometry.nt >> (level - 1));
        separable_pass(&mut work, rows, cols, filters, synthesize_line, true);
    }
    WavefieldGrid::from_array(geometry, work)
}

/// Wavelet baseline behind the shared [`Representation`] interface.
#[derive(Debug, Clone)]
pub struct DwtTransform {
    filters: FilterPair,
    levels: usize,
}

impl DwtTransform {
    pub fn new(filters: FilterPair, levels: usize) -> Self {
        Self { filters, levels }
    }

    pub fn filters(&self) -> &FilterPair {
        &self.filters
    }

    pub fn levels(&self) -> usize {
        self.levels
    }
}

impl Representation for DwtTransform {
    type Coefficients = DwtCoefficients;

    fn tag(&self) -> &str {
        "dwt"
    }

    fn analyze(&self, field: &WavefieldGrid) -> Result<DwtCoefficients> {
        dwt2(field, &self.filters, self.levels)
    }

    fn synthesize(&self, coefficients: &DwtCoefficients) -> Result<WavefieldGrid> {
        if coefficients.levels != self.levels {
            return Err(Error::CoefficientMismatch(format!(
                "coefficients have {} levels, transform uses {}",
                coefficients.levels, self.levels
            )));
        }
        idwt2(coefficients, &self.filters)
    }
}
