//! Weak-L¹ stability of the solution map, and its failure for concentrating data.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction};
use crate::measure::DiscreteMeasure;
use crate::nonlinearity::Nonlinearity;
use crate::solver::{solve_semilinear, SolveOptions};
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Scenario {
    /// `f_n = 1 + a·sin(2πn x₁)`, converging weakly in `L¹` to `1`.
    Oscillating { amplitude: f64, frequencies: Vec<usize> },
    /// Stage `k` spreads mass `|Ω|` evenly over a `2^{k−1}`-per-axis lattice of bumps of radius
    /// `kernel_cells·h`, converging weakly* to `1`.
    Concentrating { stages: usize, kernel_cells: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityRow {
    /// Frequency `n` or stage `k`.
    pub index: usize,
    pub data_tv: f64,
    pub u_l1: f64,
    /// `‖u_n − u‖_{L¹}` against the solution for `f ≡ 1`.
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub rows: Vec<StabilityRow>,
    pub limit_l1: f64,
}

impl StabilityReport {
    pub fn first(&self) -> &StabilityRow {
        &self.rows[0]
    }

    pub fn last(&self) -> &StabilityRow {
        self.rows.last().expect("at least one row")
    }
}

/// Interior bounding box of a Cartesian grid.
fn bounds(grid: &Grid) -> Vec<(f64, f64)> {
    let h = grid.spacing();
    (0..grid.coord_dim())
        .map(|k| {
            let (lo, hi) = (0..grid.len())
                .map(|i| grid.coords(i)[k])
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
            (lo - h, hi + h)
        })
        .collect()
}

fn concentrating_data(grid: &Arc<Grid>, stage: usize, kernel_cells: f64) -> Result<DiscreteMeasure> {
    let m = 1usize << (stage - 1);
    let dim = grid.coord_dim();
    let b = bounds(grid);
    let count = m.pow(dim as u32);
    let weight = grid.domain_measure() / count as f64;
    let mut atoms = DiscreteMeasure::zero(grid.clone());
    for flat in 0..count {
        let mut rest = flat;
        let point: Vec<f64> = (0..dim)
            .map(|k| {
                let j = rest % m;
                rest /= m;
                b[k].0 + (j as f64 + 0.5) * (b[k].1 - b[k].0) / m as f64
            })
            .collect();
        atoms.add_atom_at(&point, weight)?;
    }
    atoms.mollify_radius(kernel_cells * grid.spacing())
}

pub fn weak_l1_stability_experiment(
    grid: &Arc<Grid>,
    g: &Nonlinearity,
    scenario: &Scenario,
    opts: &SolveOptions,
) -> Result<StabilityReport> {
    let solve = |mu: &DiscreteMeasure| -> Result<GridFunction> {
        let r = solve_semilinear(g, mu, opts)?;
        if !r.converged {
            return Err(Error::LevelFailed {
                level: 0,
                n: f64::INFINITY,
                residual: r.residual_l1,
            });
        }
        Ok(r.u)
    };
    let one = DiscreteMeasure::from_density(GridFunction::constant(grid.clone(), 1.0));
    let limit = solve(&one)?;
    let mut rows = Vec::new();
    match scenario {
        Scenario::Oscillating { amplitude, frequencies } => {
            for &n in frequencies {
                let f = GridFunction::from_fn(grid.clone(), |x| {
                    1.0 + amplitude * (2.0 * PI * n as f64 * x[0]).sin()
                });
                let mu = DiscreteMeasure::from_density(f);
                let u = solve(&mu)?;
                rows.push(StabilityRow {
                    index: n,
                    data_tv: mu.tv_norm(),
                    u_l1: u.l1_norm(),
                    error: u.l1_distance(&limit),
                });
            }
        }
        Scenario::Concentrating { stages, kernel_cells } => {
            if grid.is_radial() {
                return Err(Error::Config("concentrating clouds need a Cartesian grid".into()));
            }
            for k in 1..=*stages {
                let mu = concentrating_data(grid, k, *kernel_cells)?;
                let u = solve(&mu)?;
                rows.push(StabilityRow {
                    index: k,
                    data_tv: mu.tv_norm(),
                    u_l1: u.l1_norm(),
                    error: u.l1_distance(&limit),
                });
            }
        }
    }
    Ok(StabilityReport {
        rows,
        limit_l1: limit.l1_norm(),
    })
}
