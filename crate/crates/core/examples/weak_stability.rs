//! Weakly converging data: oscillations average out, concentrating clouds are tracked for p = 3.

use reduced_measure::nonlinearity::make_power;
use reduced_measure::reduced::{weak_l1_stability_experiment, Scenario};
use reduced_measure::solver::SolveOptions;
use reduced_measure::{build_grid, GridSpec, Result};

pub fn run_example() -> Result<()> {
    let line = build_grid(&GridSpec::interval(0.0, 1.0, 1.0 / 4096.0))?;
    let osc = Scenario::Oscillating { amplitude: 1.0, frequencies: vec![2, 8, 32, 128] };
    let r = weak_l1_stability_experiment(&line, &make_power(2.0)?, &osc, &SolveOptions::default())?;
    for row in &r.rows {
        println!("n = {:4}: |f| {:.4}  |u_n - u| {:.3e}", row.index, row.data_tv, row.error);
    }

    let cube = build_grid(&GridSpec::unit_cube(1.0 / 16.0))?;
    let conc = Scenario::Concentrating { stages: 2, kernel_cells: 1.5 };
    let r = weak_l1_stability_experiment(&cube, &make_power(3.0)?, &conc, &SolveOptions::default())?;
    for row in &r.rows {
        println!("stage {}: |f| {:.4}  |u_k| {:.4}  (f = 1 gives {:.4})", row.index, row.data_tv, row.u_l1, r.limit_l1);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
