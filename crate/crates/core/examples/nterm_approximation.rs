//! n-term approximation on a synthetic corpus: mean relative error and l1
//! norm of the kept coefficients for boostlets and db45 wavelets.
//!
//! Usage: nterm_approximation [FIELDS]   (default 10)

use boostlets::{
    gen_wavefield, nterm_curve, summarize_curves, BoostletTransform, DwtTransform, FilterPair, FrameSpec,
    GridGeometry, Result, SyntheticSpec,
};

fn main() -> Result<()> {
    let count: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(10);
    let geometry = GridGeometry::room_window();
    let boostlet = BoostletTransform::new(&FrameSpec::standard(geometry)?)?;
    let dwt = DwtTransform::new(FilterPair::db45(), 2);
    let n_values = [10, 50, 100, 500, 1000];

    let (mut b, mut d) = (Vec::new(), Vec::new());
    for seed in 0..count {
        let y = gen_wavefield(&geometry, &SyntheticSpec::default().with_seed(seed))?;
        b.push(nterm_curve(&y, &boostlet, &n_values)?);
        d.push(nterm_curve(&y, &dwt, &n_values)?);
    }
    let (sb, sd) = (summarize_curves(&b)?, summarize_curves(&d)?);

    println!("{count} fields, means with 95% half-widths");
    println!("{:>5}  {:>17}  {:>17}  {:>17}  {:>17}", "n", "e_n boostlet %", "e_n dwt %", "l1 boostlet", "l1 dwt");
    for (i, n) in n_values.iter().enumerate() {
        let cell = |m: &boostlets::MeanCi| format!("{:.2} ± {:.2}", m.mean, m.half_width());
        println!(
            "{n:>5}  {:>17}  {:>17}  {:>17}  {:>17}",
            cell(&sb.rel_error[i]),
            cell(&sd.rel_error[i]),
            cell(&sb.l1[i]),
            cell(&sd.l1[i])
        );
    }
    Ok(())
}
