//! δ₀ in the unit ball of R³ against (t⁺)^p: the truncation levels of a subcritical and a
//! supercritical exponent.

use reduced_measure::nonlinearity::make_power;
use reduced_measure::reduced::{reduce_by_truncation, ReduceOptions};
use reduced_measure::{build_grid, DiscreteMeasure, GridSpec, Result};

pub fn run_example() -> Result<()> {
    let grid = build_grid(&GridSpec::radial(3, 1.0, 1.0 / 1024.0))?;
    let mu = DiscreteMeasure::dirac(grid, 0, 1.0)?;
    for p in [2.0, 2.5, 3.0, 4.0] {
        let r = reduce_by_truncation(&make_power(p)?, &mu, &ReduceOptions::default())?;
        println!("p = {p}: atom of mu* {:.4}, defect {:.4}, {} levels", r.mu_star.atom(0), r.defect(&mu), r.levels.len());
        if p == 3.0 {
            for l in r.levels.iter().step_by(4) {
                println!("    n = {:>9}: u_max {:10.2}  L1 {:.5}  g-mass {:.4}", l.n, l.u_max, l.u_l1, l.gmass);
            }
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
