//! Space-time sample grids and wavenumber-frequency bookkeeping.
//!
//! Space is axis 0 and time is axis 1, so `data[[ix, it]]` is the pressure at
//! position `ix * dx` and time `it * dt`. Spectra use the standard FFT bin
//! order on both axes (bin 0 is DC, the Nyquist bin is the negative alias).

use ndarray::Array2;
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest admissible extent along either axis.
pub const MIN_EXTENT: usize = 8;

/// Sample counts and physical spacings of a grid, without the samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridGeometry {
    pub nx: usize,
    pub nt: usize,
    /// Spatial spacing in meters.
    pub dx: f64,
    /// Temporal spacing in seconds.
    pub dt: f64,
}

impl GridGeometry {
    pub fn new(nx: usize, nt: usize, dx: f64, dt: f64) -> Result<Self> {
        let geometry = Self { nx, nt, dx, dt };
        geometry.validate()?;
        Ok(geometry)
    }

    /// 100 x 100 window sampled every 3 cm at 11.25 kHz.
    pub fn room_window() -> Self {
        Self {
            nx: 100,
            nt: 100,
            dx: 0.03,
            dt: 1.0 / 11_250.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, n) in [("nx", self.nx), ("nt", self.nt)] {
            if n < MIN_EXTENT {
                return Err(Error::InvalidGrid(format!("{name} = {n} is below {MIN_EXTENT}")));
            }
            if n % 2 != 0 {
                return Err(Error::InvalidGrid(format!("{name} = {n} must be even")));
            }
        }
        for (name, d) in [("dx", self.dx), ("dt", self.dt)] {
            if !(d.is_finite() && d > 0.0) {
                return Err(Error::InvalidGrid(format!("{name} = {d} must be positive and finite")));
            }
        }
        Ok(())
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nx, self.nt)
    }

    pub fn len(&self) -> usize {
        self.nx * self.nt
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Spatial Nyquist wavenumber in cycles per meter.
    pub fn k_nyquist(&self) -> f64 {
        0.5 / self.dx
    }

    /// Temporal Nyquist frequency in Hz.
    pub fn omega_nyquist(&self) -> f64 {
        0.5 / self.dt
    }

    /// Two geometries describe the same grid if the counts agree and the
    /// spacings agree to rounding.
    pub fn matches(&self, other: &GridGeometry) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs());
        self.nx == other.nx && self.nt == other.nt && close(self.dx, other.dx) && close(self.dt, other.dt)
    }
}

/// A validated real space-time wavefield.
#[derive(Debug, Clone, PartialEq)]
pub struct WavefieldGrid {
    geometry: GridGeometry,
    data: Array2<f64>,
}

impl WavefieldGrid {
    /// Builds a grid from a row-major (space-major) sample vector.
    pub fn make(nx: usize, nt: usize, dx: f64, dt: f64, data: Vec<f64>) -> Result<Self> {
        let geometry = GridGeometry::new(nx, nt, dx, dt)?;
        if data.len() != nx * nt {
            return Err(Error::InvalidGrid(format!(
                "expected {} samples for a {nx}x{nt} grid, got {}",
                nx * nt,
                data.len()
            )));
        }
        let data = Array2::from_shape_vec((nx, nt), data).expect("length checked above");
        Self::from_array(geometry, data)
    }

    pub fn from_array(geometry: GridGeometry, data: Array2<f64>) -> Result<Self> {
        geometry.validate()?;
        if data.dim() != geometry.shape() {
            return Err(Error::ShapeMismatch {
                expected: geometry.shape(),
                actual: data.dim(),
            });
        }
        if let Some(bad) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "non-finite sample at ({}, {})",
                bad / geometry.nt,
                bad % geometry.nt
            )));
        }
        // Owned arrays from callers may be in Fortran order; FFT code wants rows contiguous.
        let data = if data.is_standard_layout() {
            data
        } else {
            data.as_standard_layout().into_owned()
        };
        Ok(Self { geometry, data })
    }

    pub fn zeros(geometry: GridGeometry) -> Result<Self> {
        geometry.validate()?;
        Ok(Self {
            geometry,
            data: Array2::zeros(geometry.shape()),
        })
    }

    pub fn geometry(&self) -> &GridGeometry {
        &self.geometry
    }

    pub fn nx(&self) -> usize {
        self.geometry.nx
    }

    pub fn nt(&self) -> usize {
        self.geometry.nt
    }

    pub fn dx(&self) -> f64 {
        self.geometry.dx
    }

    pub fn dt(&self) -> f64 {
        self.geometry.dt
    }

    pub fn data(&self) -> &Array2<f64> {
        &self.data
    }

    pub fn into_data(self) -> Array2<f64> {
        self.data
    }

    /// Row-major samples.
    pub fn as_slice(&self) -> &[f64] {
        self.data.as_slice().expect("grids are kept in standard layout")
    }

    /// Sum of squared samples.
    pub fn energy(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn norm(&self) -> f64 {
        self.energy().sqrt()
    }

    /// Mean squared sample value.
    pub fn power(&self) -> f64 {
        self.energy() / self.geometry.len() as f64
    }

    /// Same geometry, new samples (validated).
    pub fn with_data(&self, data: Array2<f64>) -> Result<Self> {
        Self::from_array(self.geometry, data)
    }
}

/// Complex wavenumber-frequency array in FFT bin order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Array2<Complex64>,
}

impl Spectrum {
    pub fn new(values: Array2<Complex64>) -> Self {
        let values = if values.is_standard_layout() {
            values
        } else {
            values.as_standard_layout().into_owned()
        };
        Self { values }
    }

    pub fn nx(&self) -> usize {
        self.values.nrows()
    }

    pub fn nt(&self) -> usize {
        self.values.ncols()
    }

    pub fn values(&self) -> &Array2<Complex64> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.values
    }

    pub fn into_values(self) -> Array2<Complex64> {
        self.values
    }

    /// Largest `|values(-xi) - conj(values(xi))|`, relative to the largest magnitude.
    pub fn hermitian_defect(&self) -> f64 {
        let (nx, nt) = self.values.dim();
        let scale = self.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for p in 0..nx {
            for q in 0..nt {
                let mirror = self.values[[(nx - p) % nx, (nt - q) % nt]];
                worst = worst.max((mirror - self.values[[p, q]].conj()).norm());
            }
        }
        worst / scale
    }
}

/// A wavenumber-frequency coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyPoint {
    /// Wavenumber in cycles per meter.
    pub k: f64,
    /// Frequency in Hz.
    pub omega: f64,
}

/// Signed alias of FFT bin `index` on an axis of length `n`, in `[-n/2, n/2)`.
pub fn signed_bin(index: usize, n: usize) -> i64 {
    let index = index as i64;
    let n = n as i64;
    if index < n / 2 {
        index
    } else {
        index - n
    }
}

/// Physical wavenumber-frequency coordinate of every FFT bin.
pub fn freq_coords(geometry: &GridGeometry) -> Array2<FrequencyPoint> {
    let GridGeometry { nx, nt, dx, dt } = *geometry;
    Array2::from_shape_fn((nx, nt), |(p, q)| FrequencyPoint {
        k: signed_bin(p, nx) as f64 / (nx as f64 * dx),
        omega: signed_bin(q, nt) as f64 / (nt as f64 * dt),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const DT: f64 = 1.0 / 11_250.0;

    #[test]
    fn zero_grid() {
        let grid = WavefieldGrid::make(8, 8, 0.03, DT, vec![0.0; 64]).unwrap();
        assert_eq!(grid.energy(), 0.0);
        assert_eq!(grid.nx(), 8);
    }

    #[test]
    fn room_window_is_valid() {
        let g = GridGeometry::room_window();
        let grid = WavefieldGrid::make(g.nx, g.nt, g.dx, g.dt, vec![1.0; 10_000]).unwrap();
        assert_eq!(grid.geometry().shape(), (100, 100));
        assert!((1.0 / grid.dt() - 11_250.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(WavefieldGrid::make(7, 8, 0.03, DT, vec![0.0; 56]).is_err());
        assert!(WavefieldGrid::make(6, 8, 0.03, DT, vec![0.0; 48]).is_err());
        assert!(WavefieldGrid::make(8, 8, 0.0, DT, vec![0.0; 64]).is_err());
        assert!(WavefieldGrid::make(8, 8, 0.03, -DT, vec![0.0; 64]).is_err());
        assert!(WavefieldGrid::make(8, 8, 0.03, DT, vec![0.0; 63]).is_err());
        let mut data = vec![0.0; 64];
        data[9] = f64::NAN;
        let err = WavefieldGrid::make(8, 8, 0.03, DT, data).unwrap_err();
        assert!(err.to_string().contains("(1, 1)"), "{err}");
    }

    #[test]
    fn fortran_order_input_is_normalized() {
        use ndarray::ShapeBuilder;
        let geometry = GridGeometry::new(8, 10, 1.0, 1.0).unwrap();
        let mut data = Array2::zeros((8, 10).f());
        data.indexed_iter_mut().for_each(|((i, j), v)| *v = (i * 10 + j) as f64);
        assert!(!data.is_standard_layout());
        let grid = WavefieldGrid::from_array(geometry, data).unwrap();
        assert!(grid.data().is_standard_layout());
        assert_eq!(grid.as_slice()[11], 11.0);
    }

    #[test]
    fn frequency_coordinates() {
        let g = GridGeometry::new(100, 100, 0.03, DT).unwrap();
        let coords = freq_coords(&g);
        assert_eq!(coords[[0, 0]], FrequencyPoint { k: 0.0, omega: 0.0 });
        assert!((coords[[1, 0]].k - 1.0 / 3.0).abs() < 1e-12);
        assert!((coords[[50, 0]].k + 50.0 / 3.0).abs() < 1e-12);
        assert!((coords[[0, 50]].omega + 5_625.0).abs() < 1e-9);
    }

    #[test]
    fn frequency_coordinates_are_odd_under_negation() {
        let g = GridGeometry::new(12, 10, 0.5, 0.25).unwrap();
        let coords = freq_coords(&g);
        for p in 0..12 {
            for q in 0..10 {
                if p == 6 || q == 5 {
                    continue;
                }
                let a = coords[[p, q]];
                let b = coords[[(12 - p) % 12, (10 - q) % 10]];
                assert_eq!(a.k, -b.k);
                assert_eq!(a.omega, -b.omega);
            }
        }
    }
}
