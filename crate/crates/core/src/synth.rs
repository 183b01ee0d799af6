//! Seeded synthetic wavefields: superpositions of nondispersive plane
//! wavefronts with a Gaussian-modulated sinusoid profile, optionally mixed
//! with spatially decaying slow (evanescent-like) components.

use std::f64::consts::PI;

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridGeometry, WavefieldGrid};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticSpec {
    /// Number of wavefronts; zero is accepted and yields a zero field.
    pub n_pulses: usize,
    /// Range of phase-speed magnitudes in m/s; directions are random.
    pub speed_range: [f64; 2],
    /// Reference sound speed in m/s.
    pub c_ref: f64,
    /// Center frequency of the pulse profile in Hz.
    pub center_frequency: f64,
    /// Spectral full width at half maximum divided by the center frequency.
    pub pulse_bandwidth: f64,
    /// Pulse `p` (zero-based) has amplitude `amplitude_decay^p`.
    pub amplitude_decay: f64,
    /// Probability that a pulse is a slow, spatially decaying component.
    pub evanescent_fraction: f64,
    /// Phase-speed magnitudes of slow components, all below `c_ref`.
    pub evanescent_speed_range: [f64; 2],
    /// Spatial e-folding length of slow components in meters.
    pub evanescent_decay_length: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            n_pulses: 3,
            speed_range: [343.0, 1.0e4],
            c_ref: 343.0,
            center_frequency: 2000.0,
            pulse_bandwidth: 0.5,
            amplitude_decay: 0.7,
            evanescent_fraction: 0.0,
            evanescent_speed_range: [100.0, 300.0],
            evanescent_decay_length: 0.5,
            seed: 0,
        }
    }
}

impl SyntheticSpec {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        let positive = |v: f64| v.is_finite() && v > 0.0;
        let [lo, hi] = self.speed_range;
        if !(positive(lo) && positive(hi) && lo <= hi) {
            return bad(format!("speed_range must satisfy 0 < lo <= hi, got [{lo}, {hi}]"));
        }
        if !positive(self.c_ref) {
            return bad(format!("c_ref must be positive, got {}", self.c_ref));
        }
        if !positive(self.center_frequency) {
            return bad(format!("center_frequency must be positive, got {}", self.center_frequency));
        }
        if !(self.pulse_bandwidth > 0.0 && self.pulse_bandwidth <= 1.0) {
            return bad(format!("pulse_bandwidth must lie in (0, 1], got {}", self.pulse_bandwidth));
        }
        if !positive(self.amplitude_decay) {
            return bad(format!("amplitude_decay must be positive, got {}", self.amplitude_decay));
        }
        if !(0.0..=1.0).contains(&self.evanescent_fraction) {
            return bad(format!("evanescent_fraction must lie in [0, 1], got {}", self.evanescent_fraction));
        }
        if self.evanescent_fraction > 0.0 {
            let [elo, ehi] = self.evanescent_speed_range;
            if !(positive(elo) && positive(ehi) && elo <= ehi && ehi < self.c_ref) {
                return bad(format!(
                    "evanescent_speed_range must satisfy 0 < lo <= hi < c_ref, got [{elo}, {ehi}]"
                ));
            }
            if !positive(self.evanescent_decay_length) {
                return bad("evanescent_decay_length must be positive".into());
            }
        }
        Ok(())
    }

    /// Temporal standard deviation of the Gaussian envelope.
    pub fn envelope_sigma(&self) -> f64 {
        (2.0 * 2f64.ln()).sqrt() / (PI * self.pulse_bandwidth * self.center_frequency)
    }
}

/// Gaussian-modulated sinusoid with envelope deviation `sigma`.
pub fn pulse_profile(tau: f64, center_frequency: f64, sigma: f64) -> f64 {
    (-0.5 * (tau / sigma).powi(2)).exp() * (2.0 * PI * center_frequency * tau).cos()
}

#[derive(Debug, Clone, Copy)]
struct Component {
    amplitude: f64,
    /// Signed slowness in s/m.
    slowness: f64,
    /// Arrival time at the reference position.
    arrival: f64,
    /// Reference position, relative to the array center.
    origin: f64,
    /// Inverse spatial decay length; zero for propagating fronts.
    decay: f64,
}

fn draw_components(geometry: &GridGeometry, spec: &SyntheticSpec) -> Vec<Component> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let duration = geometry.nt as f64 * geometry.dt;
    let aperture = (geometry.nx - 1) as f64 * geometry.dx;
    (0..spec.n_pulses)
        .map(|p| {
            let amplitude = spec.amplitude_decay.powi(p as i32);
            let evanescent = spec.evanescent_fraction > 0.0 && rng.random::<f64>() < spec.evanescent_fraction;
            let range = if evanescent {
                spec.evanescent_speed_range
            } else {
                spec.speed_range
            };
            let magnitude = rng.random_range(1.0 / range[1]..=1.0 / range[0]);
            let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
            let arrival = rng.random_range(0.2..0.8) * duration;
            let (origin, decay) = if evanescent {
                (rng.random_range(-0.5..0.5) * aperture, 1.0 / spec.evanescent_decay_length)
            } else {
                (0.0, 0.0)
            };
            Component {
                amplitude,
                slowness: sign * magnitude,
                arrival,
                origin,
                decay,
            }
        })
        .collect()
}

/// Generates a wavefield on `geometry`; identical specs give identical fields.
pub fn gen_wavefield(geometry: &GridGeometry, spec: &SyntheticSpec) -> Result<WavefieldGrid> {
    geometry.validate()?;
    spec.validate()?;
    let sigma = spec.envelope_sigma();
    let components = draw_components(geometry, spec);
    let center = 0.5 * (geometry.nx - 1) as f64 * geometry.dx;
    let data = Array2::from_shape_fn(geometry.shape(), |(i, j)| {
        let x = i as f64 * geometry.dx - center;
        let t = j as f64 * geometry.dt;
        components
            .iter()
            .map(|c| {
                let offset = x - c.origin;
                let envelope = (-c.decay * offset.abs()).exp();
                c.amplitude * envelope * pulse_profile(t - c.slowness * offset - c.arrival, spec.center_frequency, sigma)
            })
            .sum()
    });
    WavefieldGrid::from_array(*geometry, data)
}
