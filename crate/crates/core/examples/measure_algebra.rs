//! Signed discrete measures: lattice operations, diffuse/atomic split, mollification.

use std::f64::consts::PI;

use reduced_measure::{build_grid, DiscreteMeasure, GridFunction, GridSpec, Result};

pub fn run_example() -> Result<()> {
    let grid = build_grid(&GridSpec::unit_square(1.0 / 32.0))?;
    let mut mu = DiscreteMeasure::from_density(GridFunction::from_fn(grid.clone(), |x| (2.0 * PI * x[0]).sin()));
    mu.add_atom_at(&[0.25, 0.5], 8.0 * PI)?;
    mu.add_atom_at(&[0.75, 0.5], -3.0)?;

    let (diffuse, atoms) = mu.decompose();
    println!("mass {:.4}, tv {:.4} = {:.4} diffuse + {:.4} atomic", mu.mass(), mu.tv_norm(), diffuse.tv_norm(), atoms.tv_norm());
    println!("parts singular to each other: {}", diffuse.mutually_singular(&atoms));
    println!("tv(mu+) + tv(mu-) = {:.4}", mu.pos_part().tv_norm() + mu.neg_part().tv_norm());

    let nu = DiscreteMeasure::from_density(GridFunction::constant(grid.clone(), 0.5));
    let sup = mu.lattice_sup(&nu)?;
    let inf = mu.lattice_inf(&nu)?;
    let gap = (&(&sup + &inf) - &(&mu + &nu)).tv_norm();
    println!("sup + inf - (mu + nu) = {gap:.1e}");

    for n in [4.5, 8.0, 16.0] {
        let m = atoms.mollify(n)?;
        println!("kernel radius 1/{n}: atoms left {}, mass {:.6}", m.atoms().len(), m.mass());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
