//! Fourier-domain boostlet frame.
//!
//! The wavenumber-frequency plane is split into the far-field double cone
//! `|w| > |k|` and the near-field double cone `|k| > |w|`. Inside each cone a
//! bin is addressed by its hyperbolic radius `r = sqrt(|w^2 - k^2|)`, which
//! dilations scale and boosts leave alone, and its rapidity `phi`, which a
//! boost by `theta` shifts by `-theta`. Atoms are products of an octave
//! window in `log2 r` and a bump in `phi`; the scaling atom takes whatever
//! energy the cone atoms leave, so the squared atoms sum to one at every bin.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{signed_bin, FrequencyPoint, GridGeometry};
use crate::window;

/// Largest tolerated deviation of the summed squared atoms from one.
pub const TIGHTNESS_TOLERANCE: f64 = 1e-9;

/// How wavenumber and frequency are put on a common scale before the cones are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ConeGeometry {
    /// Divide by the grid Nyquist extents; the cone edge is the grid diagonal.
    #[default]
    GridNormalized,
    /// The cone edge is the physical sound line `w = speed * k` (speed in m/s).
    Physical { speed: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameSpec {
    /// Number of radial (dilation) bands.
    pub n_scales: usize,
    /// Number of boost windows per band; odd.
    pub n_boosts: usize,
    /// Spacing between boost window centers in rapidity units.
    pub boost_spacing: f64,
    pub geometry: GridGeometry,
    #[serde(default)]
    pub cone: ConeGeometry,
}

impl FrameSpec {
    pub const DEFAULT_BOOST_SPACING: f64 = 0.5;

    pub fn new(geometry: GridGeometry, n_scales: usize, n_boosts: usize) -> Result<Self> {
        let spec = Self {
            n_scales,
            n_boosts,
            boost_spacing: Self::DEFAULT_BOOST_SPACING,
            geometry,
            cone: ConeGeometry::GridNormalized,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Two scales and seven boosts per scale.
    pub fn standard(geometry: GridGeometry) -> Result<Self> {
        Self::new(geometry, 2, 7)
    }

    pub fn with_boost_spacing(mut self, spacing: f64) -> Result<Self> {
        self.boost_spacing = spacing;
        self.validate()?;
        Ok(self)
    }

    pub fn with_cone(mut self, cone: ConeGeometry) -> Result<Self> {
        self.cone = cone;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        if self.n_scales < 1 {
            return Err(Error::InvalidFrameSpec("at least one scale is required".into()));
        }
        if self.n_boosts < 1 || self.n_boosts.is_multiple_of(2) {
            return Err(Error::InvalidFrameSpec(format!(
                "boost count must be odd and positive, got {}",
                self.n_boosts
            )));
        }
        if !(self.boost_spacing.is_finite() && self.boost_spacing > 0.0) {
            return Err(Error::InvalidFrameSpec(format!(
                "boost spacing must be positive, got {}",
                self.boost_spacing
            )));
        }
        if let ConeGeometry::Physical { speed } = self.cone {
            if !(speed.is_finite() && speed > 0.0) {
                return Err(Error::InvalidFrameSpec(format!("cone speed must be positive, got {speed}")));
            }
        }
        Ok(())
    }

    /// `2 * n_scales * n_boosts + 1`.
    pub fn atom_count(&self) -> usize {
        2 * self.n_scales * self.n_boosts + 1
    }

    pub fn scale_windows(&self, rho: f64) -> Vec<f64> {
        window::scale_windows(rho, self.n_scales)
    }

    pub fn boost_windows(&self, phi: f64) -> Vec<f64> {
        window::boost_windows(phi, self.n_boosts, self.boost_spacing)
    }

    /// Normalizing extents `(kmax, omax)` used by [`hyperbolic_coords`].
    pub fn extents(&self) -> (f64, f64) {
        let kmax = self.geometry.k_nyquist();
        match self.cone {
            ConeGeometry::GridNormalized => (kmax, self.geometry.omega_nyquist()),
            ConeGeometry::Physical { speed } => (kmax, speed * kmax),
        }
    }

    /// Atom parameters in storage order: far atoms, near atoms, then the scaling atom.
    pub fn atom_params(&self) -> Vec<AtomParams> {
        let mut params = Vec::with_capacity(self.atom_count());
        for cone in [Cone::Far, Cone::Near] {
            for scale in 0..self.n_scales {
                for boost in 0..self.n_boosts {
                    params.push(match cone {
                        Cone::Far => AtomParams::Far { scale, boost },
                        _ => AtomParams::Near { scale, boost },
                    });
                }
            }
        }
        params.push(AtomParams::Scaling);
        params
    }

    fn atom_index(&self, cone: Cone, scale: usize, boost: usize) -> usize {
        let offset = match cone {
            Cone::Far => 0,
            Cone::Near => self.n_scales * self.n_boosts,
            Cone::Boundary => unreachable!("no atoms live on the cone boundary"),
        };
        offset + scale * self.n_boosts + boost
    }
}

/// Which double cone a frequency point falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cone {
    /// `|w| > |k|`: propagating waves.
    Far,
    /// `|k| > |w|`: evanescent waves.
    Near,
    /// `|k| = |w|`, including the origin.
    Boundary,
}

/// Identifies one atom of the frame. Scale 0 is the coarsest band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "cone", rename_all = "snake_case")]
pub enum AtomParams {
    Far { scale: usize, boost: usize },
    Near { scale: usize, boost: usize },
    Scaling,
}

impl AtomParams {
    pub fn label(&self) -> String {
        match self {
            AtomParams::Far { scale, boost } => format!("far_s{scale}_b{boost}"),
            AtomParams::Near { scale, boost } => format!("near_s{scale}_b{boost}"),
            AtomParams::Scaling => "scaling".to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicCoord {
    pub cone: Cone,
    /// Hyperbolic radius on normalized coordinates.
    pub r: f64,
    /// Rapidity: `artanh(k/w)` in the far cone, `artanh(w/k)` in the near cone, 0 on the boundary.
    pub phi: f64,
}

/// Hyperbolic coordinates of a physical frequency point after dividing by `(kmax, omax)`.
pub fn hyperbolic_coords(point: FrequencyPoint, kmax: f64, omax: f64) -> HyperbolicCoord {
    normalized_coords(point.k / kmax, point.omega / omax)
}

/// Hyperbolic coordinates of an already normalized point `(k, w)`.
pub fn normalized_coords(k: f64, w: f64) -> HyperbolicCoord {
    let cone = match w.abs().partial_cmp(&k.abs()) {
        Some(std::cmp::Ordering::Greater) => Cone::Far,
        Some(std::cmp::Ordering::Less) => Cone::Near,
        _ => Cone::Boundary,
    };
    coords_in_cone(cone, k, w)
}

fn coords_in_cone(cone: Cone, k: f64, w: f64) -> HyperbolicCoord {
    // (w - k)(w + k) keeps precision close to the cone edge.
    let r = ((w - k) * (w + k)).abs().sqrt();
    let phi = match cone {
        Cone::Far => odd_atanh(k / w),
        Cone::Near => odd_atanh(w / k),
        Cone::Boundary => 0.0,
    };
    HyperbolicCoord { cone, r, phi }
}

// libm's atanh is not bitwise odd; atoms must be exactly even.
fn odd_atanh(x: f64) -> f64 {
    x.abs().atanh().copysign(x)
}

/// Lorentz boost `B_theta` applied to a point `(k, w)`. The matrix is
/// symmetric, so this is also its transpose.
pub fn boost_point(theta: f64, k: f64, w: f64) -> (f64, f64) {
    let (s, c) = (theta.sinh(), theta.cosh());
    (c * k - s * w, -s * k + c * w)
}

#[derive(Debug, Clone)]
pub struct Atom {
    pub params: AtomParams,
    /// Real, nonnegative, even window in FFT bin order.
    pub window: Array2<f64>,
}

/// A finite Parseval frame of Fourier-domain atoms.
#[derive(Debug, Clone)]
pub struct BoostletFrame {
    spec: FrameSpec,
    atoms: Vec<Atom>,
    tightness_error: f64,
}

impl BoostletFrame {
    pub fn spec(&self) -> &FrameSpec {
        &self.spec
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Max over bins of `|sum of squared atoms - 1|`, measured at construction.
    pub fn tightness_error(&self) -> f64 {
        self.tightness_error
    }

    pub fn atom(&self, params: AtomParams) -> Option<&Atom> {
        self.atoms.iter().find(|a| a.params == params)
    }
}

/// Cone membership and normalized coordinates of FFT bin `(p, q)`.
fn bin_coords(spec: &FrameSpec, p: usize, q: usize) -> HyperbolicCoord {
    let GridGeometry { nx, nt, dx, dt } = spec.geometry;
    let (ps, qs) = (signed_bin(p, nx), signed_bin(q, nt));
    match spec.cone {
        ConeGeometry::GridNormalized => {
            // |k~| = 2|p|/nx against |w~| = 2|q|/nt, decided in integers.
            let lhs = qs.unsigned_abs() * nx as u64;
            let rhs = ps.unsigned_abs() * nt as u64;
            let cone = match lhs.cmp(&rhs) {
                std::cmp::Ordering::Greater => Cone::Far,
                std::cmp::Ordering::Less => Cone::Near,
                std::cmp::Ordering::Equal => Cone::Boundary,
            };
            coords_in_cone(cone, 2.0 * ps as f64 / nx as f64, 2.0 * qs as f64 / nt as f64)
        }
        ConeGeometry::Physical { .. } => {
            let (kmax, omax) = spec.extents();
            let point = FrequencyPoint {
                k: ps as f64 / (nx as f64 * dx),
                omega: qs as f64 / (nt as f64 * dt),
            };
            hyperbolic_coords(point, kmax, omax)
        }
    }
}

/// Builds every atom of the frame and verifies the partition of unity.
pub fn build_frame(spec: &FrameSpec) -> Result<BoostletFrame> {
    spec.validate()?;
    let (nx, nt) = spec.geometry.shape();
    let params = spec.atom_params();
    let mut windows = vec![Array2::<f64>::zeros((nx, nt)); params.len()];
    let scaling = params.len() - 1;

    for p in 0..nx {
        for q in 0..nt {
            let coord = bin_coords(spec, p, q);
            if coord.cone == Cone::Boundary || coord.r == 0.0 {
                continue;
            }
            let radial = spec.scale_windows(coord.r.log2());
            let mut boosts = spec.boost_windows(coord.phi);
            if (p == nx / 2 || q == nt / 2) && coord.phi != 0.0 {
                // A Nyquist bin stands for both signs of that axis, i.e. for
                // +phi and -phi. Splitting its energy evenly keeps the atom even.
                let mirrored = spec.boost_windows(-coord.phi);
                for (b, m) in boosts.iter_mut().zip(mirrored) {
                    *b = (0.5 * (*b * *b + m * m)).sqrt();
                }
            }
            for (scale, w) in radial[..spec.n_scales].iter().enumerate() {
                if *w == 0.0 {
                    continue;
                }
                for (boost, v) in boosts.iter().enumerate() {
                    windows[spec.atom_index(coord.cone, scale, boost)][[p, q]] = w * v;
                }
            }
        }
    }

    let mut worst_residual = 0.0f64;
    for p in 0..nx {
        for q in 0..nt {
            let covered: f64 = windows[..scaling].iter().map(|w| w[[p, q]] * w[[p, q]]).sum();
            let residual = 1.0 - covered;
            worst_residual = worst_residual.min(residual);
            windows[scaling][[p, q]] = residual.max(0.0).sqrt();
        }
    }
    if worst_residual < -TIGHTNESS_TOLERANCE {
        return Err(Error::FramePartition(format!(
            "cone atoms over-cover a bin by {:e}",
            -worst_residual
        )));
    }

    let atoms = params
        .into_iter()
        .zip(windows)
        .map(|(params, window)| Atom { params, window })
        .collect();
    let mut frame = BoostletFrame {
        spec: spec.clone(),
        atoms,
        tightness_error: 0.0,
    };
    frame.tightness_error = frame_tightness(&frame);
    if frame.tightness_error > TIGHTNESS_TOLERANCE {
        return Err(Error::FramePartition(format!(
            "tightness error {:e} exceeds {TIGHTNESS_TOLERANCE:e}",
            frame.tightness_error
        )));
    }
    Ok(frame)
}

/// Max over bins of `|sum of squared atoms - 1|`.
pub fn frame_tightness(frame: &BoostletFrame) -> f64 {
    coverage(frame.atoms.iter().map(|a| &a.window), frame.spec.geometry.shape())
        .iter()
        .map(|c| (c - 1.0).abs())
        .fold(0.0, f64::max)
}

fn coverage<'a>(windows: impl Iterator<Item = &'a Array2<f64>>, shape: (usize, usize)) -> Array2<f64> {
    let mut sum = Array2::<f64>::zeros(shape);
    for w in windows {
        sum.zip_mut_with(w, |s, v| *s += v * v);
    }
    sum
}
