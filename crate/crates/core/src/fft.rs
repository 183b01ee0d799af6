//! Two-dimensional FFT with the `exp(-2 pi i xi . s)` forward kernel.
//!
//! The forward transform is unnormalized and the inverse carries the full
//! `1 / (nx * nt)` factor, so `sum |Y|^2 = nx * nt * sum |y|^2`.

use std::sync::Arc;

use ndarray::Array2;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::{Spectrum, WavefieldGrid};

/// Relative imaginary residue tolerated when returning to a real field.
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

/// Precomputed row and column plans for one grid shape.
#[derive(Clone)]
pub struct Fft2 {
    nx: usize,
    nt: usize,
    rows_forward: Arc<dyn Fft<f64>>,
    rows_inverse: Arc<dyn Fft<f64>>,
    cols_forward: Arc<dyn Fft<f64>>,
    cols_inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Fft2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fft2").field("nx", &self.nx).field("nt", &self.nt).finish()
    }
}

impl Fft2 {
    pub fn new(nx: usize, nt: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            nx,
            nt,
            rows_forward: planner.plan_fft_forward(nt),
            rows_inverse: planner.plan_fft_inverse(nt),
            cols_forward: planner.plan_fft_forward(nx),
            cols_inverse: planner.plan_fft_inverse(nx),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nx, self.nt)
    }

    /// In-place unnormalized forward transform.
    pub fn forward(&self, buf: &mut Array2<Complex64>) {
        self.process(buf, &self.rows_forward, &self.cols_forward);
    }

    /// In-place inverse transform including the `1 / (nx * nt)` factor.
    pub fn inverse(&self, buf: &mut Array2<Complex64>) {
        self.process(buf, &self.rows_inverse, &self.cols_inverse);
        let scale = 1.0 / (self.nx * self.nt) as f64;
        buf.mapv_inplace(|v| v * scale);
    }

    pub fn forward_real(&self, data: &Array2<f64>) -> Array2<Complex64> {
        let mut buf = data.mapv(|v| Complex64::new(v, 0.0));
        self.forward(&mut buf);
        buf
    }

    /// Inverse transform of a spectrum expected to be Hermitian.
    ///
    /// Fails if the imaginary part exceeds [`HERMITIAN_TOLERANCE`] relative
    /// to the norm of the result.
    pub fn inverse_real(&self, spectrum: Array2<Complex64>) -> Result<Array2<f64>> {
        self.inverse_real_against(spectrum, 0.0)
    }

    /// Like [`Fft2::inverse_real`], but the residue is measured against
    /// `max(norm of result, reference_norm)`. Filtering can leave a result
    /// far smaller than the signal it came from, and rounding noise should be
    /// judged against the latter.
    pub fn inverse_real_against(&self, mut spectrum: Array2<Complex64>, reference_norm: f64) -> Result<Array2<f64>> {
        self.inverse(&mut spectrum);
        let (mut re2, mut im2) = (0.0, 0.0);
        for v in spectrum.iter() {
            re2 += v.re * v.re;
            im2 += v.im * v.im;
        }
        let scale = (re2 + im2).max(reference_norm * reference_norm);
        if scale > 0.0 {
            let residue = (im2 / scale).sqrt();
            if residue > HERMITIAN_TOLERANCE {
                return Err(Error::NonHermitian {
                    residue,
                    tolerance: HERMITIAN_TOLERANCE,
                });
            }
        }
        Ok(spectrum.mapv(|v| v.re))
    }

    fn process(&self, buf: &mut Array2<Complex64>, rows: &Arc<dyn Fft<f64>>, cols: &Arc<dyn Fft<f64>>) {
        assert_eq!(buf.dim(), (self.nx, self.nt), "buffer shape does not match plan");
        let (nx, nt) = (self.nx, self.nt);
        let data = buf.as_slice_mut().expect("FFT buffers must be in standard layout");
        let scratch_len = rows
            .get_inplace_scratch_len()
            .max(cols.get_inplace_scratch_len());
        let mut scratch = vec![Complex64::default(); scratch_len];

        for row in data.chunks_exact_mut(nt) {
            rows.process_with_scratch(row, &mut scratch);
        }

        let mut transposed = vec![Complex64::default(); nx * nt];
        for (p, row) in data.chunks_exact(nt).enumerate() {
            for (q, v) in row.iter().enumerate() {
                transposed[q * nx + p] = *v;
            }
        }
        for col in transposed.chunks_exact_mut(nx) {
            cols.process_with_scratch(col, &mut scratch);
        }
        for (q, col) in transposed.chunks_exact(nx).enumerate() {
            for (p, v) in col.iter().enumerate() {
                data[p * nt + q] = *v;
            }
        }
    }
}

/// Forward transform of a wavefield.
pub fn fft2(field: &WavefieldGrid) -> Spectrum {
    let plan = Fft2::new(field.nx(), field.nt());
    Spectrum::new(plan.forward_real(field.data()))
}

/// Inverse transform back to a real array shaped like the originating grid.
pub fn ifft2(spectrum: &Spectrum) -> Result<Array2<f64>> {
    let plan = Fft2::new(spectrum.nx(), spectrum.nt());
    plan.inverse_real(spectrum.values().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridGeometry;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_grid(rng: &mut ChaCha8Rng, nx: usize, nt: usize) -> WavefieldGrid {
        let data = (0..nx * nt).map(|_| rng.random_range(-1.0..1.0)).collect();
        WavefieldGrid::make(nx, nt, 0.03, 1e-4, data).unwrap()
    }

    /// Direct O(N^2) DFT with the same sign convention.
    fn naive_dft(field: &WavefieldGrid) -> Array2<Complex64> {
        let (nx, nt) = (field.nx(), field.nt());
        Array2::from_shape_fn((nx, nt), |(p, q)| {
            let mut acc = Complex64::default();
            for ((x, t), v) in field.data().indexed_iter() {
                let phase = -2.0
                    * std::f64::consts::PI
                    * ((p * x) as f64 / nx as f64 + (q * t) as f64 / nt as f64);
                acc += Complex64::from_polar(*v, phase);
            }
            acc
        })
    }

    #[test]
    fn impulse_gives_flat_spectrum() {
        let mut data = vec![0.0; 64];
        data[0] = 1.0;
        let field = WavefieldGrid::make(8, 8, 1.0, 1.0, data).unwrap();
        let spectrum = fft2(&field);
        for v in spectrum.values() {
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn zeros_map_to_zeros() {
        let field = WavefieldGrid::zeros(GridGeometry::new(8, 10, 1.0, 1.0).unwrap()).unwrap();
        assert!(fft2(&field).values().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn matches_direct_summation_and_sign_convention() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let field = random_grid(&mut rng, 8, 12);
        let fast = fft2(&field);
        let slow = naive_dft(&field);
        for (a, b) in fast.values().iter().zip(slow.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn parseval_on_random_fields() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let field = random_grid(&mut rng, 16, 10);
            let spectrum = fft2(&field);
            let lhs: f64 = spectrum.values().iter().map(|v| v.norm_sqr()).sum::<f64>() / 160.0;
            let rhs = field.energy();
            assert!((lhs - rhs).abs() <= 1e-10 * rhs);
            assert!(spectrum.hermitian_defect() < 1e-12);
        }
    }

    #[test]
    fn round_trip_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let field = random_grid(&mut rng, 20, 14);
        let back = ifft2(&fft2(&field)).unwrap();
        let err: f64 = (&back - field.data()).iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(err <= 1e-12 * field.norm());
    }

    #[test]
    fn spectrum_round_trip_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let field = random_grid(&mut rng, 10, 10);
        let spectrum = fft2(&field);
        let again = fft2(&field.with_data(ifft2(&spectrum).unwrap()).unwrap());
        for (a, b) in again.values().iter().zip(spectrum.values()) {
            assert!((a - b).norm() <= 1e-12 * 10.0);
        }
    }

    #[test]
    fn flat_spectrum_inverts_to_impulse() {
        let spectrum = Spectrum::new(Array2::from_elem((8, 8), Complex64::new(1.0, 0.0)));
        let field = ifft2(&spectrum).unwrap();
        assert!((field[[0, 0]] - 1.0).abs() < 1e-15);
        assert!(field.iter().skip(1).all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn non_hermitian_spectrum_is_rejected() {
        let mut values = Array2::zeros((8, 8));
        values[[1, 2]] = Complex64::new(1.0, 0.0);
        let err = ifft2(&Spectrum::new(values)).unwrap_err();
        assert!(matches!(err, Error::NonHermitian { .. }));
    }
}
