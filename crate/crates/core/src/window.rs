//! Meyer-type windows whose squares sum to one.
//!
//! Radial windows live on octaves of `log2 r`; boost windows are bumps in the
//! hyperbolic angle with half-infinite outermost windows.

use std::f64::consts::FRAC_PI_2;

/// Meyer auxiliary polynomial `t^4 (35 - 84 t + 70 t^2 - 20 t^3)`, clamped to `[0, 1]`.
///
/// Satisfies `nu(t) + nu(1 - t) = 1`.
pub fn meyer_nu(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    if t > 0.5 {
        return 1.0 - meyer_nu(1.0 - t);
    }
    let t2 = t * t;
    t2 * t2 * (35.0 + t * (-84.0 + t * (70.0 - 20.0 * t)))
}

fn rising(t: f64) -> f64 {
    (FRAC_PI_2 * meyer_nu(t)).sin()
}

// Written as a sine so both ends are exactly 0 and 1.
fn falling(t: f64) -> f64 {
    (FRAC_PI_2 * (1.0 - meyer_nu(t))).sin()
}

/// Radial band values at `rho = log2 r`.
///
/// Returns `n_scales + 1` values: bands ordered coarsest to finest, then the
/// residual low-pass value. Counting from the finest band `f = 0`, band `f`
/// rises on `[-(f+2), -(f+1)]` and falls on `[-(f+1), -f]`; the finest band
/// stays at one from `rho = -1` upwards and the low-pass value is one below
/// `rho = -(n_scales + 1)`.
pub fn scale_windows(rho: f64, n_scales: usize) -> Vec<f64> {
    let mut out = vec![0.0; n_scales + 1];
    if rho.is_nan() {
        return out;
    }
    // Low-pass profile with its transition on [-(level+2), -(level+1)].
    let lowpass = |level: usize| falling(rho + level as f64 + 2.0);
    let highpass = |level: usize| rising(rho + level as f64 + 2.0);
    for fine in 0..n_scales {
        let above = if fine == 0 { 1.0 } else { lowpass(fine - 1) };
        out[n_scales - 1 - fine] = above * highpass(fine);
    }
    out[n_scales] = if n_scales == 0 { 1.0 } else { lowpass(n_scales - 1) };
    out
}

/// Center of boost window `index` for `n_boosts` windows spaced `spacing` apart.
pub fn boost_center(index: usize, n_boosts: usize, spacing: f64) -> f64 {
    (index as f64 - (n_boosts as f64 - 1.0) / 2.0) * spacing
}

/// Boost window values at hyperbolic angle `phi`.
///
/// Interior windows are bumps of half-width `spacing`; the two outermost
/// windows are one beyond their centers so the tails of the cone are covered.
pub fn boost_windows(phi: f64, n_boosts: usize, spacing: f64) -> Vec<f64> {
    let mut out = vec![0.0; n_boosts];
    if n_boosts == 0 || phi.is_nan() {
        return out;
    }
    if n_boosts == 1 {
        out[0] = 1.0;
        return out;
    }
    let last = n_boosts - 1;
    for (m, value) in out.iter_mut().enumerate() {
        let offset = (phi - boost_center(m, n_boosts, spacing)) / spacing;
        let outward = (m == last && offset >= 0.0) || (m == 0 && offset <= 0.0);
        *value = if outward {
            1.0
        } else if offset.abs() <= 1.0 {
            falling(offset.abs())
        } else {
            0.0
        };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nu_endpoints_and_midpoint() {
        assert_eq!(meyer_nu(0.0), 0.0);
        assert_eq!(meyer_nu(1.0), 1.0);
        assert!((meyer_nu(0.5) - 0.5).abs() < 1e-15);
        assert_eq!(meyer_nu(-3.0), 0.0);
        assert_eq!(meyer_nu(7.0), 1.0);
    }

    #[test]
    fn nu_is_antisymmetric_about_half() {
        for i in 0..=1000 {
            let t = i as f64 / 1000.0;
            assert!((meyer_nu(t) + meyer_nu(1.0 - t) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn nu_is_monotone() {
        let mut prev = 0.0;
        for i in 1..=1000 {
            let v = meyer_nu(i as f64 / 1000.0);
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn finest_band_is_flat_at_nyquist_shell() {
        let w = scale_windows(0.0, 2);
        assert_eq!(w, vec![0.0, 1.0, 0.0]);
        let w = scale_windows(-0.7, 3);
        assert_eq!(w, vec![0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn deep_lowpass() {
        let w = scale_windows(f64::NEG_INFINITY, 2);
        assert_eq!(w, vec![0.0, 0.0, 1.0]);
        let w = scale_windows(-40.0, 4);
        assert_eq!(w[4], 1.0);
    }

    #[test]
    fn radial_partition_of_unity() {
        for n_scales in 1..=4 {
            for i in 0..=11_000 {
                let rho = -10.0 + i as f64 * 1e-3;
                let sum: f64 = scale_windows(rho, n_scales).iter().map(|w| w * w).sum();
                assert!((sum - 1.0).abs() < 1e-12, "n_scales={n_scales} rho={rho} sum={sum}");
            }
        }
    }

    #[test]
    fn radial_band_supports() {
        // N_a = 2: coarse band lives on [-3, -1], fine band from -2 upwards.
        for i in 0..=4000 {
            let rho = -5.0 + i as f64 * 1e-3;
            let w = scale_windows(rho, 2);
            if !(-3.0..=-1.0).contains(&rho) {
                assert_eq!(w[0], 0.0, "rho={rho}");
            }
            if rho <= -2.0 {
                assert_eq!(w[1], 0.0, "rho={rho}");
            }
            if rho >= -2.0 {
                assert_eq!(w[2], 0.0, "rho={rho}");
            }
        }
    }

    #[test]
    fn boost_window_centers() {
        let w = boost_windows(0.0, 7, 0.5);
        assert_eq!(w, vec![0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        let w = boost_windows(1.0, 7, 0.5);
        assert_eq!(w[5], 1.0);
        assert_eq!(w.iter().filter(|v| **v != 0.0).count(), 1);
    }

    #[test]
    fn boost_tails_use_outer_windows() {
        let w = boost_windows(0.5e6, 7, 0.5);
        assert_eq!(w, vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        let w = boost_windows(-0.5e6, 7, 0.5);
        assert_eq!(w, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn boost_partition_of_unity() {
        for (n, spacing) in [(1, 0.5), (3, 0.25), (5, 0.5), (7, 0.5), (9, 1.3)] {
            for i in 0..=20_000 {
                let phi = (-10.0 + i as f64 * 1e-3) * spacing;
                let sum: f64 = boost_windows(phi, n, spacing).iter().map(|w| w * w).sum();
                assert!((sum - 1.0).abs() < 1e-12, "n={n} phi={phi} sum={sum}");
            }
        }
    }

    #[test]
    fn boost_windows_mirror() {
        for i in 0..500 {
            let phi = i as f64 * 0.01;
            let a = boost_windows(phi, 7, 0.5);
            let b = boost_windows(-phi, 7, 0.5);
            for m in 0..7 {
                assert!((a[m] - b[6 - m]).abs() < 1e-15);
            }
        }
    }
}
