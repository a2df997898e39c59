//! Closed-form reduced measures and the identities of the reduced-measure calculus.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::measure::DiscreteMeasure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleModel {
    /// Every measure is good.
    SubcriticalPower,
    /// Positive atoms are removed entirely.
    SupercriticalPower,
    /// `g = e^t − 1` in two dimensions: atoms are capped at `4π`.
    Exp2d,
}

impl std::str::FromStr for OracleModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "subcritical" | "subcritical-power" | "subcritical_power" => Ok(Self::SubcriticalPower),
            "supercritical" | "supercritical-power" | "supercritical_power" => {
                Ok(Self::SupercriticalPower)
            }
            "exp2d" => Ok(Self::Exp2d),
            other => Err(Error::Config(format!("unknown oracle model {other:?}"))),
        }
    }
}

pub fn oracle_reduced(mu: &DiscreteMeasure, model: OracleModel) -> DiscreteMeasure {
    let cap = |w: f64| match model {
        OracleModel::SubcriticalPower => w,
        OracleModel::SupercriticalPower => w.min(0.0),
        OracleModel::Exp2d => w.min(4.0 * PI),
    };
    let atoms: Vec<(usize, f64)> = mu.atoms().iter().map(|(&k, &w)| (k, cap(w))).collect();
    DiscreteMeasure::new(mu.grid().clone(), mu.density().to_vec(), &atoms)
        .expect("same support as the input")
}

/// Worst violation of each identity; all zero up to rounding when the calculus holds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CalculusReport {
    pub additivity: f64,
    pub inf: f64,
    pub sup: f64,
    pub non_expansive: f64,
    pub positive_part_contraction: f64,
    pub positive_part: f64,
    pub negative_part: f64,
    pub restriction: f64,
    pub diffuse_shift: f64,
}

impl CalculusReport {
    pub fn max_violation(&self) -> f64 {
        [
            self.additivity,
            self.inf,
            self.sup,
            self.non_expansive,
            self.positive_part_contraction,
            self.positive_part,
            self.negative_part,
            self.restriction,
            self.diffuse_shift,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    fn merge(&mut self, o: &Self) {
        self.additivity = self.additivity.max(o.additivity);
        self.inf = self.inf.max(o.inf);
        self.sup = self.sup.max(o.sup);
        self.non_expansive = self.non_expansive.max(o.non_expansive);
        self.positive_part_contraction = self.positive_part_contraction.max(o.positive_part_contraction);
        self.positive_part = self.positive_part.max(o.positive_part);
        self.negative_part = self.negative_part.max(o.negative_part);
        self.restriction = self.restriction.max(o.restriction);
        self.diffuse_shift = self.diffuse_shift.max(o.diffuse_shift);
    }
}

/// Pairs of component values (density per node, weight per atom node) of two measures.
fn components(a: &DiscreteMeasure, b: &DiscreteMeasure) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = a.density().iter().copied().zip(b.density().iter().copied()).collect();
    let mut keys: Vec<usize> = a.atoms().keys().chain(b.atoms().keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    out.extend(keys.into_iter().map(|k| (a.atom(k), b.atom(k))));
    out
}

fn eq_violation(a: &DiscreteMeasure, b: &DiscreteMeasure) -> f64 {
    components(a, b).into_iter().map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn le_violation(a: &DiscreteMeasure, b: &DiscreteMeasure) -> f64 {
    components(a, b).into_iter().map(|(x, y)| (x - y).max(0.0)).fold(0.0, f64::max)
}

fn abs(m: &DiscreteMeasure) -> DiscreteMeasure {
    &m.pos_part() + &m.neg_part()
}

/// Evaluates both sides of the calculus identities with the oracle `model`, for the pair
/// `(μ, ν)` and the node set `E`.
pub fn calculus_check(
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    model: OracleModel,
    in_e: impl Fn(usize) -> bool + Copy,
) -> Result<CalculusReport> {
    let star = |m: &DiscreteMeasure| oracle_reduced(m, model);
    let ms = star(mu);
    let ns = star(nu);
    let mut r = CalculusReport::default();

    // Mutually singular pieces.
    let e = mu.restrict(in_e);
    let ec = mu.restrict(|i| !in_e(i));
    r.additivity = eq_violation(&ms, &(&star(&e) + &star(&ec)));
    if mu.mutually_singular(nu) {
        r.additivity = r.additivity.max(eq_violation(&star(&(mu + nu)), &(&ms + &ns)));
    }

    r.inf = eq_violation(&star(&mu.lattice_inf(nu)?), &ms.lattice_inf(&ns)?);
    r.sup = eq_violation(&star(&mu.lattice_sup(nu)?), &ms.lattice_sup(&ns)?);
    r.non_expansive = le_violation(&abs(&(&ms - &ns)), &abs(&(mu - nu)));
    r.positive_part_contraction = le_violation(&(&ms - &ns).pos_part(), &(mu - nu).pos_part());
    r.positive_part = eq_violation(&ms.pos_part(), &star(&mu.pos_part()));
    r.negative_part = eq_violation(&ms.neg_part(), &mu.neg_part());
    r.restriction = eq_violation(&star(&e), &ms.restrict(in_e));

    let (nu_d, _) = nu.decompose();
    r.diffuse_shift = eq_violation(&star(&(mu + &nu_d)), &(&ms + &nu_d));
    Ok(r)
}

/// Random signed measure: a sparse density with values in `[−1, 1]` and up to `max_atoms`
/// atoms drawn from a pool of `pool` nodes, weights in `[−16π, 16π]`.
pub fn random_measure(
    grid: &Arc<Grid>,
    rng: &mut impl Rng,
    max_atoms: usize,
    pool: usize,
) -> DiscreteMeasure {
    let n = grid.len();
    let density: Vec<f64> = (0..n)
        .map(|_| {
            if rng.gen_bool(0.3) {
                rng.gen_range(-1.0..=1.0)
            } else {
                0.0
            }
        })
        .collect();
    let count = rng.gen_range(0..=max_atoms);
    let atoms: Vec<(usize, f64)> = (0..count)
        .map(|_| {
            let node = rng.gen_range(0..pool.min(n));
            (node, rng.gen_range(-16.0 * PI..=16.0 * PI))
        })
        .collect();
    DiscreteMeasure::new(grid.clone(), density, &atoms).expect("nodes in range")
}

/// Runs [`calculus_check`] over `count` seeded random pairs and returns the worst case.
pub fn calculus_suite(
    grid: &Arc<Grid>,
    model: OracleModel,
    count: usize,
    rng: &mut impl Rng,
) -> Result<CalculusReport> {
    let half = grid.len() / 2;
    let mut worst = CalculusReport::default();
    for _ in 0..count {
        let mu = random_measure(grid, rng, 6, 12);
        let nu = random_measure(grid, rng, 6, 12);
        worst.merge(&calculus_check(&mu, &nu, model, |i| i < half)?);
    }
    Ok(worst)
}
