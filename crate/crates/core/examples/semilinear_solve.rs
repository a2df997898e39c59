//! Newton solve of -Δu + g(u) = μ with the a priori and comparison diagnostics.

use std::f64::consts::PI;

use reduced_measure::nonlinearity::make_exponential;
use reduced_measure::solver::{check_apriori_estimates, compare_solutions, solve_semilinear, SolveOptions};
use reduced_measure::{build_grid, DiscreteMeasure, GridFunction, GridSpec, Result};

pub fn run_example() -> Result<()> {
    let grid = build_grid(&GridSpec::unit_square(1.0 / 64.0))?;
    let g = make_exponential().truncate(1e4)?;
    let mut mu = DiscreteMeasure::from_density(GridFunction::constant(grid.clone(), 2.0));
    mu.add_atom_at(&[0.5, 0.5], 6.0 * PI)?;

    let opts = SolveOptions::default();
    let r1 = solve_semilinear(&g, &mu, &opts)?;
    println!("converged {} in {} iterations, residual {:.2e}", r1.converged, r1.iterations, r1.residual_l1);
    for (it, res, step) in r1.method_trace.iter().take(8) {
        println!("  {it:3} {res:10.3e} {step:?}");
    }
    let d = check_apriori_estimates(&r1, &g, &mu, 0.05);
    println!("int|g(u)| = {:.4}, int|Lap u| = {:.4}, |mu| = {:.4}", d.gmass, d.lapmass, d.tv);

    let more = &mu + &DiscreteMeasure::from_density(GridFunction::constant(grid, 1.0));
    let r2 = solve_semilinear(&g, &more, &opts)?;
    let c = compare_solutions(&r1, &r2, &g, &mu, &more, 1e-8, 0.05)?;
    println!("max(u1 - u2) = {:.2e}, int|g(u1)-g(u2)| = {:.4} <= {:.4}", c.max_order_violation, c.g_distance, c.tv_distance);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
