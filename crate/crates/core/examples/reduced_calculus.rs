//! Identities of the reduced-measure calculus on random measures, with closed-form μ*.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use reduced_measure::reduced::{calculus_suite, oracle_reduced, OracleModel};
use reduced_measure::{build_grid, DiscreteMeasure, GridSpec, Result};

pub fn run_example() -> Result<()> {
    let grid = build_grid(&GridSpec::unit_square(1.0 / 8.0))?;
    let mu = DiscreteMeasure::new(grid.clone(), vec![0.0; grid.len()], &[(3, 10.0 * PI), (10, 2.0 * PI), (20, -20.0)])?;
    for model in [OracleModel::Exp2d, OracleModel::SupercriticalPower, OracleModel::SubcriticalPower] {
        let star = oracle_reduced(&mu, model);
        println!("{model:?}: {:?}", star.atoms());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let worst = calculus_suite(&grid, OracleModel::Exp2d, 200, &mut rng)?;
    println!("worst violation over 200 pairs: {:.1e}", worst.max_violation());
    println!("{worst:#?}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
