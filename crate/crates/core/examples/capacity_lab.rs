//! H¹-capacity of a point and of a disk, and a test function whose Laplacian mass is about
//! twice the capacity.

use std::f64::consts::PI;

use reduced_measure::capacity::{cap_h1, construct_psi, lower_bound_check, CompactSet, PsiOptions};
use reduced_measure::{build_grid, GridSpec, Result};

pub fn run_example() -> Result<()> {
    println!("  set         h        cap      exact   sum|K psi|/cap");
    for k in [9, 10, 11] {
        let h = 2f64.powi(-k);
        let line = build_grid(&GridSpec::interval(0.0, 1.0, h))?;
        let (mid, _) = line.locate(&[0.5])?;
        let disk = build_grid(&GridSpec::radial(2, 1.0, h))?;
        let sets = [
            (CompactSet::new(line, [mid], "point")?, 4.0),
            (CompactSet::from_predicate(disk, "disk", |x| x[0] <= 0.25 + 1e-12)?, 2.0 * PI / 4f64.ln()),
        ];
        for (set, exact) in sets {
            let cap = cap_h1(&set)?.value;
            let psi = construct_psi(&set, &PsiOptions::default())?;
            let lb = lower_bound_check(&set, &psi.psi, 1e-9)?;
            println!(
                "{:>6} {:>10} {:9.5} {:9.5} {:8.4}  lower bound {}",
                set.tag, h, cap, exact, psi.delta1_mass / cap, lb.holds
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
