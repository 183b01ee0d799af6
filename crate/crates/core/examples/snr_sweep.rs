//! Mean denoising error versus input SNR over a small synthetic corpus.
//!
//! Usage: snr_sweep [FIELDS]   (default 10)

use boostlets::{
    gen_wavefield, snr_sweep, AnyRepresentation, BoostletTransform, DenoiseConfig, DwtTransform, FilterPair,
    FrameSpec, GridGeometry, Result, SyntheticSpec,
};

fn main() -> Result<()> {
    let count: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(10);
    let geometry = GridGeometry::room_window();
    let corpus = (0..count)
        .map(|seed| gen_wavefield(&geometry, &SyntheticSpec::default().with_seed(seed)))
        .collect::<Result<Vec<_>>>()?;
    let reps = [
        AnyRepresentation::Boostlet(BoostletTransform::new(&FrameSpec::standard(geometry)?)?),
        AnyRepresentation::Dwt(DwtTransform::new(FilterPair::db45(), 2)),
    ];

    let rows = snr_sweep(&corpus, &reps, &[5.0, 10.0, 20.0, 35.0], &DenoiseConfig::default(), 0)?;
    println!("{:>6}  {:<9} {:>8}  {:>17}", "SNR", "rep", "mean %", "95% interval");
    for row in rows {
        let e = row.errors;
        println!(
            "{:>4} dB  {:<9} {:>8.2}  [{:>6.2}, {:>6.2}]",
            row.snr_db, row.representation_tag, e.mean, e.ci95_low, e.ci95_high
        );
    }
    Ok(())
}
