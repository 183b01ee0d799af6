//! Builds boostlet frames on a few grids and reports how far the summed
//! squared windows stray from one, plus the atom layout of the default frame.

use boostlets::{build_frame, FrameSpec, GridGeometry, Result};

fn main() -> Result<()> {
    for (nx, nt) in [(64, 64), (100, 100), (128, 64)] {
        for (scales, boosts) in [(2, 7), (3, 5)] {
            let geometry = GridGeometry::new(nx, nt, 0.03, 1.0 / 11250.0)?;
            let frame = build_frame(&FrameSpec::new(geometry, scales, boosts)?)?;
            println!(
                "{nx:>4} x {nt:<4} scales={scales} boosts={boosts}  atoms={:>3}  tightness={:.2e}",
                frame.len(),
                frame.tightness_error()
            );
        }
    }

    let frame = build_frame(&FrameSpec::standard(GridGeometry::room_window())?)?;
    println!("\ndefault frame on the room window:");
    for atom in frame.atoms() {
        let peak = atom.window.iter().copied().fold(0.0, f64::max);
        let support = atom.window.iter().filter(|&&v| v > 0.0).count();
        println!("  {:<14} peak {peak:.3}  support {support:>5} bins", atom.params.label());
    }
    Ok(())
}
