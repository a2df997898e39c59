//! For convex g, smoothing the data and truncating g lead to the same u*.

use std::f64::consts::PI;

use reduced_measure::nonlinearity::make_exponential;
use reduced_measure::reduced::{dyadic_schedule, reduce_by_mollification, reduce_by_truncation, ReduceOptions};
use reduced_measure::{build_grid, DiscreteMeasure, GridSpec, Result};

pub fn run_example() -> Result<()> {
    let grid = build_grid(&GridSpec::radial(2, 1.0, 1.0 / 1024.0))?;
    let mu = DiscreteMeasure::dirac(grid, 0, 8.0 * PI)?;
    let g = make_exponential();
    let trunc = reduce_by_truncation(&g, &mu, &ReduceOptions::default().with_schedule(dyadic_schedule(40)))?;
    let levels: Vec<f64> = (2..=9).map(|j| 2f64.powi(j)).collect();
    let moll = reduce_by_mollification(&g, &mu, &levels, &ReduceOptions::default())?;
    for l in &moll.levels {
        println!("kernel 1/{:<4} u_max {:8.3}  atom {:.4}*4pi", l.n, l.u_max,
            l.atoms.first().map_or(0.0, |a| a.1) / (4.0 * PI));
    }
    println!(
        "relative L1 gap to the truncation limit: {:.2e}",
        moll.u_star.l1_distance(&trunc.u_star) / trunc.u_star.l1_norm()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
