//! Denoises one synthetic wavefield at 10 dB with both representations and
//! compares the L-curve choice with the best threshold on the grid.

use boostlets::{
    add_noise, denoise, gen_wavefield, AnyRepresentation, BoostletTransform, DenoiseConfig, DwtTransform,
    FilterPair, FrameSpec, GridGeometry, NoiseSpec, Representation, Result, SyntheticSpec,
};

fn main() -> Result<()> {
    let geometry = GridGeometry::room_window();
    let clean = gen_wavefield(&geometry, &SyntheticSpec::default().with_seed(3))?;
    let noisy = add_noise(&clean, &NoiseSpec::new(10.0, 11)?)?;
    let reps = [
        AnyRepresentation::Boostlet(BoostletTransform::new(&FrameSpec::standard(geometry)?)?),
        AnyRepresentation::Dwt(DwtTransform::new(FilterPair::db45(), 2)),
    ];

    for rep in &reps {
        let outcome = denoise(&noisy, rep, &DenoiseConfig::default(), Some(&clean))?;
        let report = &outcome.report;
        let selection = report.selection.expect("selected");
        println!("{}", rep.tag());
        // A coarse view of the curve: every tenth threshold plus the corner.
        for (i, gamma) in report.gammas.iter().enumerate() {
            if i % 10 == 0 || i == selection.index {
                let mark = if i == selection.index { "  <- corner" } else { "" };
                println!(
                    "  gamma {gamma:>10.4e}  eta {:>7.3}  rho {:>7.3}  error {:>7.2}%{mark}",
                    report.eta[i],
                    report.rho[i],
                    report.errors_percent.as_ref().unwrap()[i]
                );
            }
        }
        println!(
            "  selected error {:.2}%, best on grid {:.2}%{}",
            outcome.error_percent().unwrap(),
            report.best_error().unwrap(),
            if selection.degenerate { " (no corner found)" } else { "" }
        );
    }
    Ok(())
}
