//! Analyzes a synthetic wavefield into boostlet bands, shows where the energy
//! lands, and checks reconstruction and energy preservation.

use boostlets::{coefficient_energy, gen_wavefield, BoostletTransform, FrameSpec, GridGeometry, Result, SyntheticSpec};

fn main() -> Result<()> {
    let geometry = GridGeometry::room_window();
    let spec = SyntheticSpec {
        evanescent_fraction: 0.3,
        n_pulses: 5,
        seed: 4,
        ..Default::default()
    };
    let field = gen_wavefield(&geometry, &spec)?;
    let transform = BoostletTransform::new(&FrameSpec::standard(geometry)?)?;

    let coefficients = transform.analyze(&field)?;
    let total = field.energy();
    println!("{} bands of {} x {}", coefficients.band_count(), field.nx(), field.nt());
    for (params, band) in coefficients.bands() {
        let share = band.iter().map(|v| v * v).sum::<f64>() / total;
        if share > 0.01 {
            println!("  {:<14} {:>6.2}%", params.label(), 100.0 * share);
        }
    }

    let rebuilt = transform.synthesize(&coefficients)?;
    let diff: f64 = field.as_slice().iter().zip(rebuilt.as_slice()).map(|(a, b)| (a - b).powi(2)).sum();
    println!("relative reconstruction error {:.2e}", (diff / total).sqrt());
    println!("energy mismatch               {:.2e}", (coefficient_energy(&coefficients) - total).abs() / total);
    Ok(())
}
