//! Config-driven runner behind the `redlab` binary: solve, reduce, capacity, verify and sweep.
//!
//! Exit codes: 0 success, 1 a verification or expectation failed, 2 invalid config,
//! 3 solver failure.

pub mod config;
pub mod criteria;
pub mod output;

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::capacity::{cap_h1, construct_psi, lower_bound_check};
use crate::error::{Error, Result};
use crate::grid::{build_grid, l1, Grid};
use crate::measure::DiscreteMeasure;
use crate::nonlinearity::GKind;
use crate::reduced::{
    dyadic_schedule, reduce_by_mollification, reduce_by_truncation, reduce_signed, LevelRecord, ReducedResult, Scheme,
};
use crate::solver::{check_apriori_estimates, residual_mass, solve_semilinear_from};

pub use config::{
    CapacitySpec, Expect, Experiment, ExperimentConfig, GSpec, SetSpec, SweepParameter, SweepSpec,
    Tolerances, ENV_PREFIX,
};
pub use criteria::{all_criteria, Check, CriterionReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::SolverBreakdown(_) | Error::LevelFailed { .. } | Error::Infeasible(_) => EXIT_SOLVER,
        _ => EXIT_CONFIG,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub code: i32,
    pub message: String,
    pub files: Vec<PathBuf>,
}

impl Outcome {
    fn new(code: i32, message: impl Into<String>, files: Vec<PathBuf>) -> Self {
        Self {
            code,
            message: message.into(),
            files,
        }
    }
}

fn atoms_json(grid: &Grid, mu: &DiscreteMeasure) -> serde_json::Value {
    mu.atoms()
        .iter()
        .map(|(&k, &w)| json!({"node": k, "at": grid.coords(k), "weight": w}))
        .collect()
}

/// Solves once with the configured (possibly truncated) `g`.
pub fn run_solve(exp: &Experiment, out: &Path) -> Result<Outcome> {
    output::ensure_dir(out)?;
    let tol = &exp.config.tolerances;
    let report = solve_semilinear_from(&exp.g, &exp.mu, &tol.solve_options(), None)?;
    let u = report.u.values();
    let gu = exp.g.apply(u);
    let res = residual_mass(&exp.g, &report.u, &exp.mu);
    let mut files = vec![output::write_nodal(
        &out.join("solution.csv"),
        &exp.grid,
        &[("u", u), ("g_u", &gu), ("residual", &res)],
    )?];
    let apriori = check_apriori_estimates(&report, &exp.g, &exp.mu, tol.eps_h);
    let diag = json!({
        "converged": report.converged,
        "iterations": report.iterations,
        "residual_l1": report.residual_l1,
        "tolerance": report.tolerance,
        "u_max": report.u.max(),
        "u_min": report.u.min(),
        "u_l1": report.u.l1_norm(),
        "apriori": apriori,
        "trace": report.method_trace,
    });
    files.push(output::write_json(&out.join("diagnostics.json"), &diag)?);
    Ok(if report.converged {
        Outcome::new(EXIT_OK, format!("converged in {} iterations", report.iterations), files)
    } else {
        Outcome::new(EXIT_SOLVER, format!("no convergence, residual {:e}", report.residual_l1), files)
    })
}

pub struct ReduceRun {
    pub result: ReducedResult,
    /// Relative `L¹` gap between the direct and split schemes for signed runs.
    pub rel_gap: Option<f64>,
}

pub fn reduce(exp: &Experiment) -> Result<ReduceRun> {
    let opts = exp.config.reduce_options();
    match exp.config.scheme.unwrap_or(Scheme::Truncation) {
        Scheme::Truncation => Ok(ReduceRun {
            result: reduce_by_truncation(&exp.g, &exp.mu, &opts)?,
            rel_gap: None,
        }),
        Scheme::Mollification => {
            let levels = exp.config.mollification_levels.as_deref().ok_or_else(|| {
                Error::Config("the mollification scheme needs mollification_levels".into())
            })?;
            Ok(ReduceRun {
                result: reduce_by_mollification(&exp.g, &exp.mu, levels, &opts)?,
                rel_gap: None,
            })
        }
        Scheme::SignedSplit => {
            let s = reduce_signed(&exp.g, &exp.mu, &opts)?;
            Ok(ReduceRun {
                rel_gap: Some(s.rel_gap),
                result: s.combined,
            })
        }
    }
}

fn check_expect(exp: &Experiment, run: &ReduceRun, expect: &Expect) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    if let Some((at, value, rel)) = &expect.atom {
        let (node, _) = exp.grid.locate(at)?;
        let w = run.result.mu_star.atom(node);
        let (a, b) = (value * (1.0 - rel), value * (1.0 + rel));
        checks.push(Check::within("atom weight", w, a.min(b), a.max(b)));
    }
    if let Some(m) = expect.defect_max {
        checks.push(Check::le("defect", run.result.defect(&exp.mu), m));
    }
    if let Some(m) = expect.rel_gap_max {
        checks.push(Check::le("signed rel gap", run.rel_gap.unwrap_or(f64::NAN), m));
    }
    Ok(checks)
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelRow {
    pub n: f64,
    pub iterations: usize,
    pub residual_l1: f64,
    pub u_max: f64,
    pub u_l1: f64,
    pub l1_step: Option<f64>,
    pub max_increase: Option<f64>,
    pub gmass: f64,
    pub defect: f64,
    pub atoms: usize,
}

impl From<&LevelRecord> for LevelRow {
    fn from(l: &LevelRecord) -> Self {
        Self {
            n: l.n,
            iterations: l.iterations,
            residual_l1: l.residual_l1,
            u_max: l.u_max,
            u_l1: l.u_l1,
            l1_step: l.l1_step,
            max_increase: l.max_increase,
            gmass: l.gmass,
            defect: l.defect,
            atoms: l.atoms.len(),
        }
    }
}

pub fn run_reduce(exp: &Experiment, out: &Path) -> Result<Outcome> {
    output::ensure_dir(out)?;
    let run = reduce(exp)?;
    let r = &run.result;
    let mut files = Vec::new();
    if !r.levels.is_empty() {
        let rows: Vec<LevelRow> = r.levels.iter().map(LevelRow::from).collect();
        files.push(output::write_records(&out.join("levels.csv"), &rows)?);
    }
    files.push(output::write_nodal(&out.join("u_star.csv"), &exp.grid, &[("u_star", r.u_star.values())])?);

    let checks = match &exp.config.expect {
        Some(e) => check_expect(exp, &run, e)?,
        None => Vec::new(),
    };
    let defect = r.defect(&exp.mu);
    let summary = json!({
        "scheme": r.scheme,
        "converged": r.converged,
        "levels": r.levels.len(),
        "tv_mu": exp.mu.tv_norm(),
        "tv_mu_star": r.mu_star.tv_norm(),
        "defect": defect,
        "is_good": defect <= exp.config.tolerances.good_tol * exp.mu.tv_norm().max(1.0),
        "u_star_l1": r.u_star.l1_norm(),
        "atoms": atoms_json(&exp.grid, &exp.mu),
        "reduced_atoms": atoms_json(&exp.grid, &r.mu_star),
        "signed_rel_gap": run.rel_gap,
        "expect": checks,
    });
    files.push(output::write_json(&out.join("reduced.json"), &summary)?);
    let failed: Vec<_> = checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
    Ok(if !failed.is_empty() {
        Outcome::new(EXIT_FAILED, format!("expectation failed: {}", failed.join(", ")), files)
    } else {
        Outcome::new(EXIT_OK, format!("defect {defect:.6e} over {} levels", r.levels.len()), files)
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CapacityRow {
    pub h: f64,
    pub nodes: usize,
    pub cap_h1: f64,
    pub delta1_mass: f64,
    pub ratio: f64,
    pub lower_bound_holds: bool,
}

pub fn run_capacity(exp: &Experiment, out: &Path) -> Result<Outcome> {
    output::ensure_dir(out)?;
    let spec = exp
        .config
        .capacity
        .as_ref()
        .ok_or_else(|| Error::Config("capacity runs need a \"capacity\" section".into()))?;
    let spacings = if spec.spacings.is_empty() {
        vec![exp.grid.spacing()]
    } else {
        spec.spacings.clone()
    };
    let mut rows = Vec::new();
    for h in spacings {
        let grid = build_grid(&exp.config.grid.with_spacing(h))?;
        let set = spec.set.build(&grid)?;
        let cap = cap_h1(&set)?.value;
        let psi = construct_psi(&set, &spec.psi)?;
        let lb = lower_bound_check(&set, &psi.psi, 1e-9)?;
        rows.push(CapacityRow {
            h,
            nodes: set.nodes().len(),
            cap_h1: cap,
            delta1_mass: psi.delta1_mass,
            ratio: psi.delta1_mass / cap,
            lower_bound_holds: lb.holds,
        });
    }
    let files = vec![output::write_records(&out.join("capacity.csv"), &rows)?];
    let last = rows.last().expect("at least one spacing");
    Ok(Outcome::new(
        EXIT_OK,
        format!("cap_h1 {:.6} ratio {:.4} at h = {}", last.cap_h1, last.ratio, last.h),
        files,
    ))
}

pub const SUITES: [&str; 7] = ["apriori", "calculus", "capacity", "reduced", "signed", "stability", "all"];

pub fn suite_criteria(suite: &str, seed: u64) -> Result<Vec<CriterionReport>> {
    use criteria::*;
    Ok(match suite {
        "apriori" | "appendixB" => vec![criterion_3(seed)?, criterion_4(seed)?, criterion_12(seed)?],
        "calculus" => vec![criterion_6(seed)?],
        "capacity" => vec![criterion_10()?],
        "reduced" => vec![criterion_1()?, criterion_2()?, criterion_5()?, criterion_7()?, criterion_8()?],
        "signed" => vec![criterion_9()?],
        "stability" => vec![criterion_11()?],
        "all" => all_criteria(seed)?,
        other => {
            return Err(Error::Config(format!(
                "unknown suite {other:?}; expected one of {}",
                SUITES.join(", ")
            )))
        }
    })
}

pub fn run_verify(suite: &str, seed: u64, out: &Path) -> Result<Outcome> {
    output::ensure_dir(out)?;
    let reports = suite_criteria(suite, seed)?;
    let passed = reports.iter().all(|r| r.passed());
    let file = output::write_json(
        &out.join(format!("verify_{suite}.json")),
        &json!({"suite": suite, "seed": seed, "passed": passed, "criteria": reports}),
    )?;
    let lines: Vec<String> = reports.iter().map(|r| r.summary_line()).collect();
    Ok(Outcome::new(
        if passed { EXIT_OK } else { EXIT_FAILED },
        lines.join("\n"),
        vec![file],
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub parameter: SweepParameter,
    pub value: f64,
    pub h: f64,
    pub status: String,
    pub converged: bool,
    pub levels: usize,
    pub defect: f64,
    pub gmass: f64,
    /// `node:weight` pairs of `μ*`, separated by `;`.
    pub atoms: String,
}

fn sweep_cell(base: &ExperimentConfig, parameter: SweepParameter, value: f64) -> Result<(f64, ReduceRun, DiscreteMeasure)> {
    let mut cfg = base.clone();
    match parameter {
        SweepParameter::H => cfg.grid = cfg.grid.with_spacing(value),
        SweepParameter::C => cfg.measure.atoms.iter_mut().for_each(|a| a.weight = value),
        SweepParameter::P => cfg.g.kind = GKind::Power { p: value },
        SweepParameter::Ceiling => {
            cfg.truncation_schedule = Some(dyadic_schedule(40).into_iter().filter(|&n| n <= value).collect())
        }
    }
    let exp = cfg.build()?;
    let run = reduce(&exp)?;
    Ok((exp.grid.spacing(), run, exp.mu))
}

/// One reduce run per value, in a pool of `threads` workers. Rows are sorted by value; wall
/// times go to `sweep_runtime.json` so that `sweep.csv` is reproducible byte for byte.
pub fn run_sweep(base: &ExperimentConfig, threads: usize, out: &Path) -> Result<Outcome> {
    output::ensure_dir(out)?;
    let spec = base
        .sweep
        .as_ref()
        .ok_or_else(|| Error::Config("sweep runs need a \"sweep\" section".into()))?;
    if spec.values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Config("sweep values must be finite".into()));
    }
    base.build()?;
    let mut values = spec.values.clone();
    values.sort_by(f64::total_cmp);
    values.dedup();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let cells: Vec<(SweepRow, f64)> = pool.install(|| {
        values
            .par_iter()
            .map(|&value| {
                let start = Instant::now();
                let row = match sweep_cell(base, spec.parameter, value) {
                    Ok((h, run, mu)) => {
                        let r = &run.result;
                        let gu = r.g_final.apply(r.u_star.values());
                        SweepRow {
                            parameter: spec.parameter,
                            value,
                            h,
                            status: "ok".into(),
                            converged: r.converged,
                            levels: r.levels.len(),
                            defect: r.defect(&mu),
                            gmass: l1(&gu, r.u_star.grid().volumes()),
                            atoms: r
                                .mu_star
                                .atoms()
                                .iter()
                                .map(|(k, w)| format!("{k}:{}", output::num(*w)))
                                .collect::<Vec<_>>()
                                .join(";"),
                        }
                    }
                    Err(e) => SweepRow {
                        parameter: spec.parameter,
                        value,
                        h: f64::NAN,
                        status: format!("error: {e}"),
                        converged: false,
                        levels: 0,
                        defect: f64::NAN,
                        gmass: f64::NAN,
                        atoms: String::new(),
                    },
                };
                (row, start.elapsed().as_secs_f64())
            })
            .collect()
    });
    let failures = cells.iter().filter(|(r, _)| r.status != "ok").count();
    let rows: Vec<SweepRow> = cells.iter().map(|(r, _)| r.clone()).collect();
    let runtime: Vec<_> = cells
        .iter()
        .map(|(r, s)| json!({"value": r.value, "seconds": s}))
        .collect();
    let files = vec![
        output::write_records(&out.join("sweep.csv"), &rows)?,
        output::write_json(&out.join("sweep_runtime.json"), &json!({"threads": threads, "cells": runtime}))?,
    ];
    Ok(Outcome::new(
        if failures == 0 { EXIT_OK } else { EXIT_FAILED },
        format!("{} cells, {failures} failed", rows.len()),
        files,
    ))
}
