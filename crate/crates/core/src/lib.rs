//! Discrete boostlet transform for space-time wavefields.

pub mod cli;
pub mod denoise;
pub mod dwt;
pub mod error;
pub mod fft;
pub mod frame;
pub mod grid;
pub mod io;
pub mod representation;
pub mod sparsity;
pub mod stats;
pub mod synth;
pub mod transform;
pub mod window;

pub use denoise::{
    add_noise, denoise, gamma_grid, hard_threshold, lcurve_select, lcurve_select_with, snr_sweep, threshold_sweep, DenoiseConfig,
    DenoiseOutcome, GammaMode, LcurveSelection, NoiseSpec, ResidualReference, SnrSummary, ThresholdSweepResult,
};
pub use dwt::{dwt2, idwt2, load_filters, DwtCoefficients, DwtTransform, FilterPair, SubbandKind};
pub use error::{Error, Result};
pub use fft::{fft2, ifft2, Fft2};
pub use frame::{build_frame, frame_tightness, AtomParams, BoostletFrame, Cone, ConeGeometry, FrameSpec};
pub use grid::{freq_coords, FrequencyPoint, GridGeometry, Spectrum, WavefieldGrid};
pub use representation::{AnyCoefficients, AnyRepresentation, Coefficients, Representation};
pub use sparsity::{nterm_curve, nterm_truncate, rel_error, summarize_curves, ApproximationCurve, CurveSummary};
pub use stats::MeanCi;
pub use synth::{gen_wavefield, SyntheticSpec};
pub use transform::{analyze, coefficient_energy, synthesize, BoostletTransform, CoefficientSet};
