//! Corpus summaries: sample mean with a two-sided 95% Student-t interval.

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanCi {
    pub count: usize,
    pub mean: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
}

impl MeanCi {
    /// Summarizes `samples`. With fewer than two samples the interval is
    /// undefined and reported as NaN.
    pub fn from_samples(samples: &[f64]) -> Self {
        let count = samples.len();
        if count == 0 {
            return Self {
                count,
                mean: f64::NAN,
                ci95_low: f64::NAN,
                ci95_high: f64::NAN,
            };
        }
        let mean = samples.iter().sum::<f64>() / count as f64;
        if count < 2 {
            return Self {
                count,
                mean,
                ci95_low: f64::NAN,
                ci95_high: f64::NAN,
            };
        }
        let var = samples.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1) as f64;
        let dof = (count - 1) as f64;
        let t = StudentsT::new(0.0, 1.0, dof)
            .expect("positive degrees of freedom")
            .inverse_cdf(0.975);
        let half = t * (var / count as f64).sqrt();
        Self {
            count,
            mean,
            ci95_low: mean - half,
            ci95_high: mean + half,
        }
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.ci95_high - self.ci95_low)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_interval() {
        // t_{0.975, 4} = 2.776445105...
        let s = MeanCi::from_samples(&[1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(s.mean, 3.0);
        let expected = 2.7764451051977987 * (2.5f64 / 5.0).sqrt();
        assert!((s.half_width() - expected).abs() < 1e-9);
    }

    #[test]
    fn constant_samples_have_zero_width() {
        let s = MeanCi::from_samples(&[0.25; 10]);
        assert_eq!(s.ci95_low, 0.25);
        assert_eq!(s.ci95_high, 0.25);
    }

    #[test]
    fn degenerate_counts() {
        assert!(MeanCi::from_samples(&[]).mean.is_nan());
        let one = MeanCi::from_samples(&[7.0]);
        assert_eq!(one.mean, 7.0);
        assert!(one.ci95_low.is_nan());
    }
}
