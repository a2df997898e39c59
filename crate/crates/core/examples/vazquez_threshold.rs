//! Reduced measure of cδ₀ for e^t - 1 in the unit disk: the atom saturates at 4π.

use std::f64::consts::PI;

use reduced_measure::nonlinearity::make_exponential;
use reduced_measure::reduced::{dyadic_schedule, reduce_by_truncation, ReduceOptions};
use reduced_measure::{build_grid, DiscreteMeasure, GridSpec, Result};

pub fn run_example() -> Result<()> {
    let opts = ReduceOptions::default().with_schedule(dyadic_schedule(40));
    let g = make_exponential();
    println!("   c/pi   h=2^-7   h=2^-9   h=2^-11   (atom of mu*)/pi");
    for c in [1.0, 2.0, 4.0, 6.0, 8.0, 16.0] {
        let mut row = format!("{c:7.1}");
        for k in [7, 9, 11] {
            let grid = build_grid(&GridSpec::radial(2, 1.0, 2f64.powi(-k)))?;
            let mu = DiscreteMeasure::dirac(grid, 0, c * PI)?;
            let r = reduce_by_truncation(&g, &mu, &opts)?;
            row.push_str(&format!("{:9.4}", r.mu_star.atom(0) / PI));
        }
        println!("{row}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
