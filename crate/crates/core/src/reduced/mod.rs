//! Reduced measures: the truncation and mollification limits `u*`, and the measure
//! `μ* = −Δu* + g(u*)` read off from them.

mod oracle;
mod signed;
mod stability;

pub use oracle::{calculus_check, calculus_suite, oracle_reduced, random_measure, CalculusReport, OracleModel};
pub use signed::{reduce_signed, SignedResult};
pub use stability::{weak_l1_stability_experiment, Scenario, StabilityReport};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{l1, Grid, GridFunction};
use crate::measure::DiscreteMeasure;
use crate::nonlinearity::{Nonlinearity, TruncationFamily};
use crate::solver::{solve_semilinear_from, SolveOptions, SolveReport};

/// `2^k` for `k = 0..=kmax`.
pub fn dyadic_schedule(kmax: u32) -> Vec<f64> {
    (0..=kmax).map(|k| 2f64.powi(k as i32)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ReduceOptions {
    pub solve: SolveOptions,
    pub schedule: Vec<f64>,
    /// Early-stop threshold on `‖u_n − u_{n−1}‖_{L¹}`; `None` means `1e−7·|Ω|`.
    pub seq_tol: Option<f64>,
    pub family: TruncationFamily,
    /// Relative threshold for `goodness_test`.
    pub good_tol: f64,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        Self {
            solve: SolveOptions::default(),
            schedule: dyadic_schedule(20),
            seq_tol: None,
            family: TruncationFamily::Cap,
            good_tol: 0.05,
        }
    }
}

impl ReduceOptions {
    pub fn seq_tol_for(&self, grid: &Grid) -> f64 {
        self.seq_tol.unwrap_or(1e-7 * grid.domain_measure())
    }

    pub fn with_schedule(mut self, schedule: Vec<f64>) -> Self {
        self.schedule = schedule;
        self
    }

    pub fn with_family(mut self, family: TruncationFamily) -> Self {
        self.family = family;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Truncation,
    Mollification,
    SignedSplit,
}

/// Per-level record of an approximation sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub n: f64,
    pub iterations: usize,
    pub residual_l1: f64,
    pub u_max: f64,
    pub u_l1: f64,
    /// `‖u_n − u_{n−1}‖_{L¹}`.
    pub l1_step: Option<f64>,
    /// `max(u_n − u_{n−1})`; nonpositive for a monotone scheme.
    pub max_increase: Option<f64>,
    pub gmass: f64,
    /// `‖μ − μ*_n‖` with `μ*_n` split from this level's solution.
    pub defect: f64,
    pub atoms: Vec<(usize, f64)>,
}

#[derive(Clone, Debug)]
pub struct ReducedResult {
    pub u_star: GridFunction,
    pub mu_star: DiscreteMeasure,
    pub levels: Vec<LevelRecord>,
    pub scheme: Scheme,
    pub converged: bool,
    /// Nonlinearity of the last level, the one `μ*` was split with.
    pub g_final: Nonlinearity,
}

impl ReducedResult {
    /// `‖μ − μ*‖`.
    pub fn defect(&self, mu: &DiscreteMeasure) -> f64 {
        (mu - &self.mu_star).tv_norm()
    }

    /// Largest `u_{n+1} − u_n` over all levels and nodes.
    pub fn max_increase(&self) -> f64 {
        self.levels
            .iter()
            .filter_map(|l| l.max_increase)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

fn level_record(
    n: f64,
    report: &SolveReport,
    prev: Option<&GridFunction>,
    g: &Nonlinearity,
    mu: &DiscreteMeasure,
) -> Result<(LevelRecord, DiscreteMeasure)> {
    let u = &report.u;
    let grid = u.grid();
    let mu_star = split_residual(g, u, mu)?;
    let (l1_step, max_increase) = match prev {
        Some(p) => (
            Some(u.l1_distance(p)),
            Some(
                u.values()
                    .iter()
                    .zip(p.values())
                    .map(|(a, b)| a - b)
                    .fold(f64::NEG_INFINITY, f64::max),
            ),
        ),
        None => (None, None),
    };
    let rec = LevelRecord {
        n,
        iterations: report.iterations,
        residual_l1: report.residual_l1,
        u_max: u.max(),
        u_l1: u.l1_norm(),
        l1_step,
        max_increase,
        gmass: l1(&g.apply(u.values()), grid.volumes()),
        defect: (mu - &mu_star).tv_norm(),
        atoms: mu_star.atoms().iter().map(|(&k, &w)| (k, w)).collect(),
    };
    Ok((rec, mu_star))
}

/// Monotone limit of `−Δu_n + g_n(u_n) = μ` along `opts.schedule`, each level warm-started
/// from the previous one. Stops early once consecutive levels are `seq_tol` close.
pub fn reduce_by_truncation(
    g: &Nonlinearity,
    mu: &DiscreteMeasure,
    opts: &ReduceOptions,
) -> Result<ReducedResult> {
    if opts.schedule.is_empty() {
        return Err(Error::Config("empty truncation schedule".into()));
    }
    if opts.schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("truncation schedule must increase".into()));
    }
    let seq_tol = opts.seq_tol_for(mu.grid());
    let g = g.untruncated();
    let mut levels = Vec::new();
    let mut prev: Option<GridFunction> = None;
    let mut last = None;
    let mut converged = false;
    for (level, &n) in opts.schedule.iter().enumerate() {
        let gn = g.truncate_with(n, opts.family)?;
        let report = solve_semilinear_from(&gn, mu, &opts.solve, prev.as_ref())?;
        if !report.converged {
            return Err(Error::LevelFailed {
                level,
                n,
                residual: report.residual_l1,
            });
        }
        let (rec, mu_star) = level_record(n, &report, prev.as_ref(), &gn, mu)?;
        let step = rec.l1_step;
        levels.push(rec);
        last = Some((report.u.clone(), mu_star, gn));
        prev = Some(report.u);
        if let Some(s) = step {
            if s < seq_tol {
                converged = true;
                break;
            }
        }
        if mu.is_zero() {
            converged = true;
            break;
        }
    }
    let (u_star, mu_star, g_final) = last.expect("schedule is nonempty");
    Ok(ReducedResult {
        u_star,
        mu_star,
        levels,
        scheme: Scheme::Truncation,
        converged,
        g_final,
    })
}

/// Radius of the extraction ball around atom `a`: the geometric mean of the spacing and half
/// the distance from `a` to `∂Ω` or to the nearest other atom.
pub fn extraction_radius(grid: &Grid, atom: usize, others: &[usize]) -> f64 {
    let mut ell = grid.boundary_distance(atom);
    for &b in others {
        if b != atom {
            ell = ell.min(grid.distance(atom, b));
        }
    }
    (grid.spacing() * 0.5 * ell).sqrt()
}

/// Splits `−Δ_h u + g(u)` into density and atoms at the atom nodes of `mu`.
///
/// Away from atoms the density is the nodal residual. Around each atom `a` a ball `B_a` of
/// radius [`extraction_radius`] is cut out: inside it the density is that of `mu`, and the atom
/// weight is the flux of `u` out of `B_a` minus the density mass of `mu` in `B_a`. The
/// absorption `∫_{B_a} g(u)` therefore counts as defect. In one dimension points carry
/// capacity and the atom weight is the plain nodal residual.
pub fn split_residual(
    g: &Nonlinearity,
    u: &GridFunction,
    mu: &DiscreteMeasure,
) -> Result<DiscreteMeasure> {
    let grid = u.grid();
    if !grid.same_as(mu.grid()) {
        return Err(Error::GridMismatch);
    }
    let vol = grid.volumes();
    let ku = grid.laplacian().apply_stiffness(u.values());
    let mut density: Vec<f64> = (0..grid.len())
        .map(|i| ku[i] / vol[i] + g.eval(u.values()[i]))
        .collect();
    let nodes: Vec<usize> = mu
        .atoms()
        .iter()
        .filter(|(_, &w)| w != 0.0)
        .map(|(&k, _)| k)
        .collect();
    let f = mu.density();
    let mut atoms = Vec::with_capacity(nodes.len());
    for &a in &nodes {
        if grid.dimension() == 1 {
            let w = (density[a] - f[a]) * vol[a];
            density[a] = f[a];
            atoms.push((a, w));
            continue;
        }
        let rho = extraction_radius(grid, a, &nodes);
        let mut w = 0.0;
        for (i, _) in grid.nodes_within(a, rho) {
            w += ku[i] - f[i] * vol[i];
            density[i] = f[i];
        }
        atoms.push((a, w));
    }
    DiscreteMeasure::new(grid.clone(), density, &atoms)
}

/// Limit of `−Δu_n + g(u_n) = ρ_n * μ` along `levels` (kernel radius `1/n`), for convex `g`.
pub fn reduce_by_mollification(
    g: &Nonlinearity,
    mu: &DiscreteMeasure,
    levels: &[f64],
    opts: &ReduceOptions,
) -> Result<ReducedResult> {
    if !g.flags().convex {
        return Err(Error::InvalidNonlinearity(
            "the mollification path needs a convex g".into(),
        ));
    }
    if levels.is_empty() {
        return Err(Error::Config("empty mollification schedule".into()));
    }
    let g = g.untruncated();
    let seq_tol = opts.seq_tol_for(mu.grid());
    let mut records = Vec::new();
    let mut prev: Option<GridFunction> = None;
    let mut converged = false;
    let mut last = None;
    for (level, &n) in levels.iter().enumerate() {
        let mu_n = mu.mollify(n)?;
        let report = solve_semilinear_from(&g, &mu_n, &opts.solve, None)?;
        if !report.converged {
            return Err(Error::LevelFailed {
                level,
                n,
                residual: report.residual_l1,
            });
        }
        let (rec, mu_star) = level_record(n, &report, prev.as_ref(), &g, mu)?;
        converged = rec.l1_step.is_some_and(|s| s < seq_tol);
        records.push(rec);
        last = Some((report.u.clone(), mu_star));
        prev = Some(report.u);
    }
    let (u_star, mu_star) = last.expect("levels nonempty");
    Ok(ReducedResult {
        u_star,
        mu_star,
        levels: records,
        scheme: Scheme::Mollification,
        converged,
        g_final: g,
    })
}

#[derive(Clone, Debug)]
pub struct Goodness {
    pub is_good: bool,
    pub defect: f64,
    pub result: ReducedResult,
}

/// `μ` is declared good when `‖μ − μ*‖ ≤ good_tol·max(1, ‖μ‖)`.
pub fn goodness_test(g: &Nonlinearity, mu: &DiscreteMeasure, opts: &ReduceOptions) -> Result<Goodness> {
    let result = reduce_by_truncation(g, mu, opts)?;
    let defect = result.defect(mu);
    Ok(Goodness {
        is_good: defect <= opts.good_tol * mu.tv_norm().max(1.0),
        defect,
        result,
    })
}
