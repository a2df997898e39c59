//! Discrete semilinear Dirichlet problem `−Δ_h u + g(u) = μ` and its a priori contracts.
//!
//! Everything is carried in mass form `F(u) = K u + V g(u) − V b`, where `K` is the stiffness,
//! `V` the cell volumes and `b` the assembled load. `Σ|F|` is then exactly the cell-volume
//! weighted ℓ¹ residual of `−Δ_h u + g(u) − μ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{l1, Grid, GridFunction};
use crate::measure::DiscreteMeasure;
use crate::nonlinearity::Nonlinearity;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolveOptions {
    /// Absolute tolerance on the ℓ¹ residual.
    pub tol: f64,
    pub max_iter: usize,
    /// Step halvings allowed per Newton line search.
    pub max_halvings: usize,
    /// Consecutive failed line searches before switching to Picard for good.
    pub stall_limit: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iter: 500,
            max_halvings: 30,
            stall_limit: 5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Step {
    Linear,
    Newton,
    Picard,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub u: GridFunction,
    pub converged: bool,
    pub iterations: usize,
    pub residual_l1: f64,
    /// Tolerance actually enforced: the requested one, raised to the round-off floor of the
    /// residual evaluation when that is larger.
    pub tolerance: f64,
    pub method_trace: Vec<(usize, f64, Step)>,
}

/// Load vector `b`: density plus atom weight over cell volume.
pub fn assemble_rhs(grid: &Grid, mu: &DiscreteMeasure) -> GridFunction {
    let vol = grid.volumes();
    let mut b = mu.density().to_vec();
    for (&node, &w) in mu.atoms() {
        b[node] += w / vol[node];
    }
    GridFunction::new(mu.grid().clone(), b)
}

/// Load in mass units, `V b`.
fn mass_load(grid: &Grid, mu: &DiscreteMeasure) -> Vec<f64> {
    let vol = grid.volumes();
    let mut m: Vec<f64> = mu.density().iter().zip(vol).map(|(f, v)| f * v).collect();
    for (&node, &w) in mu.atoms() {
        m[node] += w;
    }
    m
}

struct Residual {
    f: Vec<f64>,
    norm: f64,
    floor: f64,
}

fn residual(grid: &Grid, g: &Nonlinearity, u: &[f64], load: &[f64]) -> Residual {
    let k = grid.laplacian().stiffness();
    let vol = grid.volumes();
    let mut f = Vec::with_capacity(u.len());
    let mut scale = 0.0;
    for i in 0..u.len() {
        let mut ku = 0.0;
        let mut abs = 0.0;
        for (j, v) in k.row(i) {
            ku += v * u[j];
            abs += (v * u[j]).abs();
        }
        let gu = vol[i] * g.eval(u[i]);
        f.push(ku + gu - load[i]);
        scale += abs + gu.abs() + load[i].abs();
    }
    let norm = f.iter().map(|x| x.abs()).sum();
    Residual {
        f,
        norm,
        floor: 16.0 * f64::EPSILON * scale,
    }
}

/// Mass-form residual `K u + V g(u) − V b` of a candidate solution.
pub fn residual_mass(g: &Nonlinearity, u: &GridFunction, mu: &DiscreteMeasure) -> Vec<f64> {
    let grid = u.grid();
    residual(grid, g, u.values(), &mass_load(grid, mu)).f
}

/// `K u = V b` by direct factorization.
pub fn solve_linear(mu: &DiscreteMeasure) -> Result<SolveReport> {
    let grid = mu.grid();
    let load = mass_load(grid, mu);
    let u = grid
        .laplacian()
        .solve_shifted(&vec![0.0; grid.len()], &load)?;
    let zero = crate::nonlinearity::make_zero();
    let r = residual(grid, &zero, &u, &load);
    let rel = r.norm / load.iter().map(|x| x.abs()).sum::<f64>().max(f64::MIN_POSITIVE);
    if rel > 1e-10 && r.norm > r.floor {
        return Err(Error::SolverBreakdown(format!(
            "linear solve relative residual {rel:e}"
        )));
    }
    Ok(SolveReport {
        u: GridFunction::new(grid.clone(), u),
        converged: true,
        iterations: 1,
        residual_l1: r.norm,
        tolerance: r.floor.max(1e-10 * load.iter().map(|x| x.abs()).sum::<f64>()),
        method_trace: vec![(0, r.norm, Step::Linear)],
    })
}

/// Damped Newton from the linear solution, with Picard fallback.
pub fn solve_semilinear(
    g: &Nonlinearity,
    mu: &DiscreteMeasure,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    solve_semilinear_from(g, mu, opts, None)
}

/// As [`solve_semilinear`], starting from `init` when given.
pub fn solve_semilinear_from(
    g: &Nonlinearity,
    mu: &DiscreteMeasure,
    opts: &SolveOptions,
    init: Option<&GridFunction>,
) -> Result<SolveReport> {
    let grid = mu.grid().clone();
    let n = grid.len();
    let vol = grid.volumes();
    let lap = grid.laplacian();
    let load = mass_load(&grid, mu);
    let mut u = match init {
        Some(u0) => {
            if !u0.grid().same_as(&grid) {
                return Err(Error::GridMismatch);
            }
            u0.values().to_vec()
        }
        None => lap.solve_shifted(&vec![0.0; n], &load)?,
    };
    let mut r = residual(&grid, g, &u, &load);
    let mut trace = vec![(0, r.norm, Step::Linear)];
    let mut stalls = 0;
    let mut iterations = 0;
    let tol_of = |r: &Residual| opts.tol.max(r.floor);
    while iterations < opts.max_iter && r.norm > tol_of(&r) {
        iterations += 1;
        let mut step = Step::Newton;
        let mut accepted = None;
        if stalls < opts.stall_limit {
            let shift: Vec<f64> = u.iter().zip(vol).map(|(&t, v)| v * g.deriv(t)).collect();
            let rhs: Vec<f64> = r.f.iter().map(|x| -x).collect();
            if let Ok(du) = lap.solve_shifted(&shift, &rhs) {
                let mut t = 1.0;
                for _ in 0..=opts.max_halvings {
                    let trial: Vec<f64> = u.iter().zip(&du).map(|(a, d)| a + t * d).collect();
                    let rt = residual(&grid, g, &trial, &load);
                    if rt.norm < r.norm {
                        accepted = Some((trial, rt));
                        break;
                    }
                    t *= 0.5;
                }
            }
            if accepted.is_some() {
                stalls = 0;
            } else {
                stalls += 1;
            }
        }
        if accepted.is_none() {
            step = Step::Picard;
            let trial = picard_step(&grid, g, &u, &load)?;
            let rt = residual(&grid, g, &trial, &load);
            if rt.norm < r.norm || stalls >= opts.stall_limit {
                accepted = Some((trial, rt));
            } else {
                // Neither step improves: we sit at the round-off floor of this problem.
                trace.push((iterations, r.norm, step));
                break;
            }
        }
        let (nu, nr) = accepted.expect("a step was taken");
        u = nu;
        r = nr;
        trace.push((iterations, r.norm, step));
    }
    let tolerance = tol_of(&r);
    Ok(SolveReport {
        u: GridFunction::new(grid, u),
        converged: r.norm <= tolerance,
        iterations,
        residual_l1: r.norm,
        tolerance,
        method_trace: trace,
    })
}

/// `(K + λV) u⁺ = V(b + λu − g(u))` with `λ` the largest slope of `g` over the range of `u`.
fn picard_step(grid: &Grid, g: &Nonlinearity, u: &[f64], load: &[f64]) -> Result<Vec<f64>> {
    let vol = grid.volumes();
    let lo = u.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = u.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut lambda = u.iter().map(|&t| g.deriv(t)).fold(0.0, f64::max);
    for k in 0..=32 {
        let t = lo + (hi - lo) * k as f64 / 32.0;
        lambda = lambda.max(g.deriv(t));
    }
    let shift: Vec<f64> = vol.iter().map(|v| lambda * v).collect();
    let rhs: Vec<f64> = (0..u.len())
        .map(|i| load[i] + vol[i] * (lambda * u[i] - g.eval(u[i])))
        .collect();
    grid.laplacian().solve_shifted(&shift, &rhs)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AprioriDiagnostics {
    pub gmass: f64,
    pub lapmass: f64,
    pub tv: f64,
    pub bounds_ok: bool,
}

/// `∫|g(u)| ≤ ‖μ‖` and `∫|Δu| ≤ 2‖μ‖`, each with relative slack `eps_h`.
pub fn check_apriori_estimates(
    report: &SolveReport,
    g: &Nonlinearity,
    mu: &DiscreteMeasure,
    eps_h: f64,
) -> AprioriDiagnostics {
    let u = &report.u;
    let grid = u.grid();
    let gmass = l1(&g.apply(u.values()), grid.volumes());
    let lapmass: f64 = grid
        .laplacian()
        .apply_stiffness(u.values())
        .iter()
        .map(|x| x.abs())
        .sum();
    let tv = mu.tv_norm();
    AprioriDiagnostics {
        gmass,
        lapmass,
        tv,
        bounds_ok: gmass <= tv * (1.0 + eps_h) && lapmass <= 2.0 * tv * (1.0 + eps_h),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonDiagnostics {
    /// `max(u₁ − u₂)` over nodes.
    pub max_order_violation: f64,
    pub order_ok: bool,
    pub g_distance: f64,
    pub tv_distance: f64,
    pub contraction_ok: bool,
}

/// Order and `L¹` contraction between two solves; `order_ok` is vacuous unless `μ₁ ≤ μ₂`.
pub fn compare_solutions(
    r1: &SolveReport,
    r2: &SolveReport,
    g: &Nonlinearity,
    mu1: &DiscreteMeasure,
    mu2: &DiscreteMeasure,
    order_tol: f64,
    eps_h: f64,
) -> Result<ComparisonDiagnostics> {
    let grid = r1.u.grid();
    if !grid.same_as(r2.u.grid()) {
        return Err(Error::GridMismatch);
    }
    let max_order_violation = r1
        .u
        .values()
        .iter()
        .zip(r2.u.values())
        .map(|(a, b)| a - b)
        .fold(f64::NEG_INFINITY, f64::max);
    let ordered = mu1.le(mu2, 0.0);
    let diff: Vec<f64> = r1
        .u
        .values()
        .iter()
        .zip(r2.u.values())
        .map(|(&a, &b)| g.eval(a) - g.eval(b))
        .collect();
    let g_distance = l1(&diff, grid.volumes());
    let tv_distance = mu1.try_sub(mu2)?.tv_norm();
    Ok(ComparisonDiagnostics {
        max_order_violation,
        order_ok: !ordered || max_order_violation <= order_tol,
        g_distance,
        tv_distance,
        contraction_ok: g_distance <= tv_distance * (1.0 + eps_h),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, GridSpec};
    use crate::nonlinearity::{make_exponential, make_power};
    use std::f64::consts::PI;
    use std::sync::Arc;

    #[test]
    fn rhs_assembly() {
        let g = build_grid(&GridSpec::interval(0.0, 1.0, 0.25)).unwrap();
        let m = DiscreteMeasure::dirac(g.clone(), 1, 1.0).unwrap();
        assert_eq!(assemble_rhs(&g, &m).values(), &[0.0, 4.0, 0.0]);
        let m = DiscreteMeasure::new(g.clone(), vec![1.0, 2.0, 3.0], &[]).unwrap();
        assert_eq!(assemble_rhs(&g, &m).values(), &[1.0, 2.0, 3.0]);

        let h = 1.0 / 64.0;
        let g = build_grid(&GridSpec::radial(2, 1.0, h)).unwrap();
        let m = DiscreteMeasure::dirac(g.clone(), 0, 4.0 * PI).unwrap();
        let b0 = assemble_rhs(&g, &m).values()[0];
        assert!((b0 - 4.0 * PI / (PI * (1.5 * h) * (1.5 * h))).abs() < 1e-9 * b0);
    }

    #[test]
    fn green_function_on_interval() {
        let g = build_grid(&GridSpec::interval(0.0, 1.0, 1.0 / 64.0)).unwrap();
        let (mid, _) = g.locate(&[0.5]).unwrap();
        let (quarter, _) = g.locate(&[0.25]).unwrap();
        let m = DiscreteMeasure::dirac(g.clone(), mid, 1.0).unwrap();
        let r = solve_linear(&m).unwrap();
        assert!(r.converged);
        assert!((r.u.values()[mid] - 0.25).abs() < 1e-12);
        assert!((r.u.values()[quarter] - 0.125).abs() < 1e-12);
        let z = solve_linear(&DiscreteMeasure::zero(g)).unwrap();
        assert!(z.u.values().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn newtonian_potential_in_three_dimensions() {
        let g = build_grid(&GridSpec::radial(3, 1.0, 1.0 / 256.0)).unwrap();
        let m = DiscreteMeasure::dirac(g.clone(), 0, 4.0 * PI).unwrap();
        let r = solve_linear(&m).unwrap();
        let (half, _) = g.locate(&[0.5]).unwrap();
        assert!((r.u.values()[half] - 1.0).abs() < 1e-2);
    }

    #[test]
    fn zero_data_needs_no_iterations() {
        let g = build_grid(&GridSpec::unit_square(1.0 / 16.0)).unwrap();
        let r = solve_semilinear(&make_exponential(), &DiscreteMeasure::zero(g), &Default::default())
            .unwrap();
        assert!(r.converged);
        assert!(r.iterations <= 1);
        assert!(r.u.values().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn comparison_with_linear_solution() {
        let g = build_grid(&GridSpec::interval(0.0, 1.0, 1.0 / 128.0)).unwrap();
        let m = DiscreteMeasure::from_density(GridFunction::constant(g.clone(), 1.0));
        let p2 = make_power(2.0).unwrap();
        let r = solve_semilinear(&p2, &m, &Default::default()).unwrap();
        let lin = solve_linear(&m).unwrap();
        assert!(r.converged);
        for (a, b) in r.u.values().iter().zip(lin.u.values()) {
            assert!(*a >= 0.0 && a <= b);
        }
    }

    #[test]
    fn truncated_exponential_with_large_atom() {
        let g = build_grid(&GridSpec::radial(2, 1.0, 1.0 / 512.0)).unwrap();
        let m = DiscreteMeasure::dirac(g.clone(), 0, 8.0 * PI).unwrap();
        let e8 = make_exponential().truncate(8.0).unwrap();
        let r = solve_semilinear(&e8, &m, &Default::default()).unwrap();
        assert!(r.converged);
        assert!(r.residual_l1 <= 1e-8);
        let u = r.u.values();
        assert!(u.windows(2).all(|w| w[0] >= w[1]));
        let d = check_apriori_estimates(&r, &e8, &m, 0.05);
        assert!(d.bounds_ok, "{d:?}");
    }

    #[test]
    fn untruncated_exponential_converges_from_linear_start() {
        let g = build_grid(&GridSpec::radial(2, 1.0, 1.0 / 256.0)).unwrap();
        let m = DiscreteMeasure::dirac(g.clone(), 0, 16.0 * PI).unwrap();
        let r = solve_semilinear(&make_exponential(), &m, &Default::default()).unwrap();
        assert!(r.converged, "{:?}", r.method_trace.last());
    }

    #[test]
    fn uniqueness_from_different_starts() {
        let grid = build_grid(&GridSpec::unit_square(1.0 / 32.0)).unwrap();
        let (a, _) = grid.locate(&[0.5, 0.5]).unwrap();
        let m = DiscreteMeasure::new(grid.clone(), vec![3.0; grid.len()], &[(a, 10.0)]).unwrap();
        let g = make_exponential().truncate(64.0).unwrap();
        let r1 = solve_semilinear(&g, &m, &Default::default()).unwrap();
        let start = GridFunction::zeros(grid.clone());
        let r2 = solve_semilinear_from(&g, &m, &Default::default(), Some(&start)).unwrap();
        assert!(r1.converged && r2.converged);
        for (x, y) in r1.u.values().iter().zip(r2.u.values()) {
            assert!((x - y).abs() < 1e-8);
        }
    }

    #[test]
    fn ordered_pair_compares() {
        let grid: Arc<Grid> = build_grid(&GridSpec::radial(2, 1.0, 1.0 / 128.0)).unwrap();
        let g = make_exponential().truncate(32.0).unwrap();
        let m1 = DiscreteMeasure::dirac(grid.clone(), 0, 1.0).unwrap();
        let m2 = DiscreteMeasure::dirac(grid.clone(), 0, 2.0).unwrap();
        let opts = SolveOptions::default();
        let r1 = solve_semilinear(&g, &m1, &opts).unwrap();
        let r2 = solve_semilinear(&g, &m2, &opts).unwrap();
        let c = compare_solutions(&r1, &r2, &g, &m1, &m2, 1e-8, 0.05).unwrap();
        assert!(c.order_ok && c.contraction_ok, "{c:?}");
        let same = compare_solutions(&r1, &r1, &g, &m1, &m1, 1e-8, 0.05).unwrap();
        assert_eq!(same.g_distance, 0.0);
    }

    #[test]
    fn nonpositive_data_gives_linear_solution() {
        let grid = build_grid(&GridSpec::unit_square(1.0 / 16.0)).unwrap();
        let m = DiscreteMeasure::new(grid.clone(), vec![-2.0; grid.len()], &[(40, -1.0)]).unwrap();
        let g = make_power(2.0).unwrap();
        let r = solve_semilinear(&g, &m, &Default::default()).unwrap();
        let lin = solve_linear(&m).unwrap();
        for (a, b) in r.u.values().iter().zip(lin.u.values()) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
