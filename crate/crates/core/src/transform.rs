//! Undecimated boostlet analysis and synthesis by FFT multiplication.
//!
//! Every atom window is real and even, so each band
//! `ifft2(fft2(y) * A)` of a real field is real. Two bands are therefore
//! carried through one complex FFT (one in the real part, one in the
//! imaginary part), which halves the transform count on both sides.

use ndarray::{Array2, ArrayView2};
use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::Fft2;
use crate::frame::{build_frame, AtomParams, BoostletFrame, FrameSpec};
use crate::grid::{GridGeometry, WavefieldGrid};
use crate::representation::{Coefficients, Representation};

/// Boostlet coefficients: one full-size real array per atom, stored contiguously.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet {
    spec: FrameSpec,
    atoms: Vec<AtomParams>,
    data: Vec<f64>,
}

impl CoefficientSet {
    pub fn zeros(spec: &FrameSpec) -> Self {
        let atoms = spec.atom_params();
        let data = vec![0.0; atoms.len() * spec.geometry.len()];
        Self {
            spec: spec.clone(),
            atoms,
            data,
        }
    }

    /// Assembles a set from per-atom arrays in the frame's storage order.
    pub fn from_bands(spec: &FrameSpec, bands: Vec<Array2<f64>>) -> Result<Self> {
        let atoms = spec.atom_params();
        if bands.len() != atoms.len() {
            return Err(Error::CoefficientMismatch(format!(
                "expected {} bands, got {}",
                atoms.len(),
                bands.len()
            )));
        }
        let shape = spec.geometry.shape();
        let mut data = Vec::with_capacity(atoms.len() * spec.geometry.len());
        for band in bands {
            if band.dim() != shape {
                return Err(Error::ShapeMismatch {
                    expected: shape,
                    actual: band.dim(),
                });
            }
            data.extend(band.iter().copied());
        }
        Ok(Self {
            spec: spec.clone(),
            atoms,
            data,
        })
    }

    pub fn spec(&self) -> &FrameSpec {
        &self.spec
    }

    pub fn atoms(&self) -> &[AtomParams] {
        &self.atoms
    }

    pub fn band_count(&self) -> usize {
        self.atoms.len()
    }

    fn band_len(&self) -> usize {
        self.spec.geometry.len()
    }

    pub fn band(&self, index: usize) -> ArrayView2<'_, f64> {
        let len = self.band_len();
        ArrayView2::from_shape(self.spec.geometry.shape(), &self.data[index * len..(index + 1) * len])
            .expect("band slices match the grid shape")
    }

    pub fn band_slice(&self, index: usize) -> &[f64] {
        let len = self.band_len();
        &self.data[index * len..(index + 1) * len]
    }

    fn band_slice_mut(&mut self, index: usize) -> &mut [f64] {
        let len = self.band_len();
        &mut self.data[index * len..(index + 1) * len]
    }

    pub fn bands(&self) -> impl Iterator<Item = (AtomParams, ArrayView2<'_, f64>)> + '_ {
        self.atoms.iter().enumerate().map(|(i, p)| (*p, self.band(i)))
    }

    pub fn scale(&mut self, factor: f64) {
        self.data.iter_mut().for_each(|v| *v *= factor);
    }
}

impl Coefficients for CoefficientSet {
    fn values(&self) -> &[f64] {
        &self.data
    }

    fn values_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }
}

/// Sum of squared coefficients over all bands.
pub fn coefficient_energy(coefficients: &CoefficientSet) -> f64 {
    coefficients.energy()
}

/// A frame with its FFT plans, ready for repeated transforms.
#[derive(Debug, Clone)]
pub struct BoostletTransform {
    frame: BoostletFrame,
    plan: Fft2,
}

impl BoostletTransform {
    pub fn new(spec: &FrameSpec) -> Result<Self> {
        Ok(Self::from_frame(build_frame(spec)?))
    }

    pub fn from_frame(frame: BoostletFrame) -> Self {
        let (nx, nt) = frame.spec().geometry.shape();
        Self {
            frame,
            plan: Fft2::new(nx, nt),
        }
    }

    pub fn frame(&self) -> &BoostletFrame {
        &self.frame
    }

    pub fn spec(&self) -> &FrameSpec {
        self.frame.spec()
    }

    pub fn analyze(&self, field: &WavefieldGrid) -> Result<CoefficientSet> {
        analyze_with(&self.frame, &self.plan, field)
    }

    pub fn synthesize(&self, coefficients: &CoefficientSet) -> Result<WavefieldGrid> {
        synthesize_with(&self.frame, &self.plan, coefficients)
    }
}

fn check_geometry(frame: &BoostletFrame, geometry: &GridGeometry) -> Result<()> {
        let expected = &frame.spec().geometry;
        if !expected.matches(geometry) {
            return Err(Error::CoefficientMismatch(format!(
                "grid {}x{} (dx={}, dt={}) does not match frame grid {}x{} (dx={}, dt={})",
                geometry.nx, geometry.nt, geometry.dx, geometry.dt, expected.nx, expected.nt, expected.dx, expected.dt
            )));
        }
        Ok(())
    }

fn analyze_with(frame: &BoostletFrame, plan: &Fft2, field: &WavefieldGrid) -> Result<CoefficientSet> {
        check_geometry(frame, field.geometry())?;
        let spectrum = plan.forward_real(field.data());
        let atoms = frame.atoms();
        let mut out = CoefficientSet::zeros(frame.spec());
        let indices: Vec<usize> = (0..atoms.len()).collect();
        for pair in indices.chunks(2) {
            match *pair {
                [a, b] => {
                    let mut buf = Array2::from_shape_fn(spectrum.dim(), |ix| {
                        spectrum[ix] * Complex64::new(atoms[a].window[ix], atoms[b].window[ix])
                    });
                    plan.inverse(&mut buf);
                    for (dst, v) in out.band_slice_mut(a).iter_mut().zip(buf.iter()) {
                        *dst = v.re;
                    }
                    for (dst, v) in out.band_slice_mut(b).iter_mut().zip(buf.iter()) {
                        *dst = v.im;
                    }
                }
                [a] => {
                    let filtered = &spectrum * &atoms[a].window.mapv(|w| Complex64::new(w, 0.0));
                    let band = plan.inverse_real_against(filtered, field.norm())?;
                    out.band_slice_mut(a).copy_from_slice(band.as_slice().expect("standard layout"));
                }
                _ => unreachable!(),
            }
        }
        Ok(out)
    }

fn synthesize_with(frame: &BoostletFrame, plan: &Fft2, coefficients: &CoefficientSet) -> Result<WavefieldGrid> {
        if coefficients.spec() != frame.spec() {
            return Err(Error::CoefficientMismatch(
                "coefficients were produced by a different frame specification".into(),
            ));
        }
        let geometry = frame.spec().geometry;
        let (nx, nt) = geometry.shape();
        let atoms = frame.atoms();
        let active: Vec<usize> = (0..atoms.len())
            .filter(|&i| coefficients.band_slice(i).iter().any(|v| *v != 0.0))
            .collect();

        let mut acc = Array2::<Complex64>::zeros((nx, nt));
        for pair in active.chunks(2) {
            match *pair {
                [a, b] => {
                    let band_a = coefficients.band(a);
                    let band_b = coefficients.band(b);
                    let mut buf = Array2::from_shape_fn((nx, nt), |ix| Complex64::new(band_a[ix], band_b[ix]));
                    plan.forward(&mut buf);
                    let (wa, wb) = (&atoms[a].window, &atoms[b].window);
                    for p in 0..nx {
                        for q in 0..nt {
                            let z = buf[[p, q]];
                            let zm = buf[[(nx - p) % nx, (nt - q) % nt]].conj();
                            // Separate the two real-field spectra packed into z.
                            let spec_a = (z + zm) * 0.5;
                            let spec_b = (z - zm) * Complex64::new(0.0, -0.5);
                            acc[[p, q]] += spec_a * wa[[p, q]] + spec_b * wb[[p, q]];
                        }
                    }
                }
                [a] => {
                    let spectrum = plan.forward_real(&coefficients.band(a).to_owned());
                    let w = &atoms[a].window;
                    ndarray::Zip::from(&mut acc)
                        .and(&spectrum)
                        .and(w)
                        .for_each(|s, v, w| *s += v * *w);
                }
                _ => unreachable!(),
            }
        }
        let field = plan.inverse_real_against(acc, coefficients.energy().sqrt())?;
        WavefieldGrid::from_array(geometry, field)
}

impl Representation for BoostletTransform {
    type Coefficients = CoefficientSet;

    fn tag(&self) -> &str {
        "boostlet"
    }

    fn analyze(&self, field: &WavefieldGrid) -> Result<CoefficientSet> {
        BoostletTransform::analyze(self, field)
    }

    fn synthesize(&self, coefficients: &CoefficientSet) -> Result<WavefieldGrid> {
        BoostletTransform::synthesize(self, coefficients)
    }
}

/// Boostlet coefficients of `field` against `frame`.
pub fn analyze(field: &WavefieldGrid, frame: &BoostletFrame) -> Result<CoefficientSet> {
    let (nx, nt) = frame.spec().geometry.shape();
    analyze_with(frame, &Fft2::new(nx, nt), field)
}

/// Field recovered from boostlet coefficients.
pub fn synthesize(coefficients: &CoefficientSet, frame: &BoostletFrame) -> Result<WavefieldGrid> {
    let (nx, nt) = frame.spec().geometry.shape();
    synthesize_with(frame, &Fft2::new(nx, nt), coefficients)
}
