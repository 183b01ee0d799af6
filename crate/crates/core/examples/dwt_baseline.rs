//! Periodic orthonormal 2-D wavelet baseline: subband energies and exactness
//! for Haar and db45.

use boostlets::{dwt2, gen_wavefield, idwt2, FilterPair, GridGeometry, Result, SyntheticSpec};

fn main() -> Result<()> {
    let geometry = GridGeometry::room_window();
    let field = gen_wavefield(&geometry, &SyntheticSpec::default().with_seed(1))?;
    let energy = field.energy();

    for (name, filters) in [("haar", FilterPair::haar()), ("db45", FilterPair::db45())] {
        let coefficients = dwt2(&field, &filters, 2)?;
        println!("{name} ({} taps)", filters.len());
        for band in coefficients.subbands() {
            let e: f64 = coefficients.subband(band.kind, band.level).unwrap().iter().map(|v| v * v).sum();
            println!("  {:?} level {}  {:>3} x {:<3} {:>7.3}%", band.kind, band.level, band.rows, band.cols, 100.0 * e / energy);
        }
        let rebuilt = idwt2(&coefficients, &filters)?;
        let err = field.as_slice().iter().zip(rebuilt.as_slice()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        println!("  max round-trip error {err:.2e}");
    }
    Ok(())
}
