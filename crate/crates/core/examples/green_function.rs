//! Discrete Laplacian on every grid kind, checked against the 1D Green function.

use reduced_measure::solver::solve_linear;
use reduced_measure::{build_grid, DiscreteMeasure, GridSpec, Result};

pub fn run_example() -> Result<()> {
    let grid = build_grid(&GridSpec::interval(0.0, 1.0, 1.0 / 64.0))?;
    let (node, _) = grid.locate(&[0.25])?;
    let y = grid.coords(node)[0];
    let mu = DiscreteMeasure::dirac(grid.clone(), node, 1.0)?;
    let u = solve_linear(&mu)?.u;
    let worst = (0..grid.len())
        .map(|i| {
            let x = grid.coords(i)[0];
            let green = x.min(y) * (1.0 - x.max(y));
            (u.values()[i] - green).abs()
        })
        .fold(0.0, f64::max);
    println!("1D point source at {y}: max |u - G| = {worst:.2e}");

    for spec in [
        GridSpec::radial(2, 1.0, 1.0 / 128.0),
        GridSpec::radial(3, 1.0, 1.0 / 128.0),
        GridSpec::unit_square(1.0 / 32.0),
        GridSpec::unit_cube(1.0 / 16.0),
    ] {
        let grid = build_grid(&spec)?;
        let one = DiscreteMeasure::from_density(reduced_measure::GridFunction::constant(grid.clone(), 1.0));
        let u = solve_linear(&one)?.u;
        println!(
            "dim {} ({} nodes, |Omega| = {:.4}): torsion max {:.5}",
            grid.dimension(),
            grid.len(),
            grid.domain_measure(),
            u.max()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
