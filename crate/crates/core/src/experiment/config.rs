//! JSON experiment configs and `REDLAB_*` tolerance overrides.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::capacity::{CompactSet, PsiOptions};
use crate::error::{Error, Result};
use crate::grid::{build_grid, Grid, GridSpec};
use crate::measure::{DiscreteMeasure, MeasureSpec};
use crate::nonlinearity::{GKind, Nonlinearity, TruncationFamily};
use crate::reduced::{dyadic_schedule, ReduceOptions, Scheme};
use crate::solver::SolveOptions;

pub const ENV_PREFIX: &str = "REDLAB_";

/// `{"kind": "power", "p": 3, "truncation": 64, "family": "cap"}`; `truncation` is optional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GSpec {
    #[serde(flatten)]
    pub kind: GKind,
    #[serde(default)]
    pub truncation: Option<f64>,
    #[serde(default)]
    pub family: Option<TruncationFamily>,
}

impl Default for GSpec {
    fn default() -> Self {
        Self {
            kind: GKind::Zero,
            truncation: None,
            family: None,
        }
    }
}

impl GSpec {
    pub fn build(&self) -> Result<Nonlinearity> {
        let g = Nonlinearity::new(self.kind)?;
        match self.truncation {
            Some(n) => g.truncate_with(n, self.family.unwrap_or(TruncationFamily::Cap)),
            None => Ok(g),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub tol: f64,
    pub max_iter: usize,
    pub seq_tol: Option<f64>,
    pub good_tol: f64,
    /// Relative slack of the a priori and contraction checks.
    pub eps_h: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iter: 500,
            seq_tol: None,
            good_tol: 0.05,
            eps_h: 0.05,
        }
    }
}

impl Tolerances {
    /// Overrides from `REDLAB_TOL`, `REDLAB_MAX_ITER`, `REDLAB_SEQ_TOL`, `REDLAB_GOOD_TOL`,
    /// `REDLAB_EPS_H`, read through `lookup`.
    pub fn apply_env(&mut self, lookup: impl Fn(&str) -> Option<String>) -> Result<()> {
        fn parse<T: std::str::FromStr>(key: &str, raw: &str) -> Result<T> {
            raw.trim()
                .parse()
                .map_err(|_| Error::Config(format!("{key}={raw:?} does not parse")))
        }
        let get = |name: &str| {
            let key = format!("{ENV_PREFIX}{name}");
            lookup(&key).map(|v| (key, v))
        };
        if let Some((k, v)) = get("TOL") {
            self.tol = parse(&k, &v)?;
        }
        if let Some((k, v)) = get("MAX_ITER") {
            self.max_iter = parse(&k, &v)?;
        }
        if let Some((k, v)) = get("SEQ_TOL") {
            self.seq_tol = Some(parse(&k, &v)?);
        }
        if let Some((k, v)) = get("GOOD_TOL") {
            self.good_tol = parse(&k, &v)?;
        }
        if let Some((k, v)) = get("EPS_H") {
            self.eps_h = parse(&k, &v)?;
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive, got {x}")))
            }
        };
        positive("tol", self.tol)?;
        positive("good_tol", self.good_tol)?;
        positive("eps_h", self.eps_h)?;
        if let Some(s) = self.seq_tol {
            positive("seq_tol", s)?;
        }
        if self.max_iter == 0 {
            return Err(Error::Config("max_iter must be at least 1".into()));
        }
        Ok(())
    }

    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            tol: self.tol,
            max_iter: self.max_iter,
            ..SolveOptions::default()
        }
    }
}

/// Node set for the capacity lab.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SetSpec {
    /// The node nearest to `at`.
    Point { at: Vec<f64> },
    /// Nodes within `radius` of `center` (of the origin on radial grids).
    Ball {
        #[serde(default)]
        center: Vec<f64>,
        radius: f64,
    },
}

impl SetSpec {
    pub fn build(&self, grid: &Arc<Grid>) -> Result<CompactSet> {
        match self {
            Self::Point { at } => {
                let (node, _) = grid.locate(at)?;
                CompactSet::new(grid.clone(), [node], "point")
            }
            Self::Ball { center, radius } => {
                let r = radius * (1.0 + 1e-12);
                if grid.is_radial() {
                    CompactSet::from_predicate(grid.clone(), "ball", |x| x[0] <= r)
                } else {
                    if center.len() != grid.coord_dim() {
                        return Err(Error::Config(format!(
                            "ball center has {} coordinates, grid has {}",
                            center.len(),
                            grid.coord_dim()
                        )));
                    }
                    CompactSet::from_predicate(grid.clone(), "ball", |x| {
                        x.iter().zip(center).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt() <= r
                    })
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapacitySpec {
    pub set: SetSpec,
    /// Spacings to run; the config grid's own spacing when empty.
    #[serde(default)]
    pub spacings: Vec<f64>,
    #[serde(default)]
    pub psi: PsiOptions,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParameter {
    /// Grid spacing.
    H,
    /// Weight given to every configured atom.
    C,
    /// Power exponent.
    P,
    /// Largest truncation level of the dyadic schedule.
    Ceiling,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

/// Band checked against the final reduced measure.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Expect {
    /// `(point, value, rel)`: the atom nearest `point` lies in `value·(1 ± rel)`.
    pub atom: Option<(Vec<f64>, f64, f64)>,
    pub defect_max: Option<f64>,
    pub rel_gap_max: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub grid: GridSpec,
    #[serde(default)]
    pub g: GSpec,
    #[serde(default)]
    pub measure: MeasureSpec,
    #[serde(default)]
    pub scheme: Option<Scheme>,
    /// Truncation levels; dyadic `1..2^40` when absent.
    #[serde(default)]
    pub truncation_schedule: Option<Vec<f64>>,
    /// Mollification levels `n` (kernel radius `1/n`).
    #[serde(default)]
    pub mollification_levels: Option<Vec<f64>>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub capacity: Option<CapacitySpec>,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub expect: Option<Expect>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn with_env_overrides(mut self) -> Result<Self> {
        self.tolerances.apply_env(|k| std::env::var(k).ok())?;
        Ok(self)
    }

    pub fn build(&self) -> Result<Experiment> {
        self.tolerances.validate()?;
        let grid = build_grid(&self.grid)?;
        let g = self.g.build()?;
        let mu = self.measure.build(&grid)?;
        Ok(Experiment {
            grid,
            g,
            mu,
            config: self.clone(),
        })
    }

    pub fn reduce_options(&self) -> ReduceOptions {
        ReduceOptions {
            solve: self.tolerances.solve_options(),
            schedule: self
                .truncation_schedule
                .clone()
                .unwrap_or_else(|| dyadic_schedule(40)),
            seq_tol: self.tolerances.seq_tol,
            family: self.g.family.unwrap_or(TruncationFamily::Cap),
            good_tol: self.tolerances.good_tol,
        }
    }
}

/// A validated config with its grid, nonlinearity and data built.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub grid: Arc<Grid>,
    pub g: Nonlinearity,
    pub mu: DiscreteMeasure,
    pub config: ExperimentConfig,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_minimal_config() {
        let c = ExperimentConfig::from_json(
            r#"{"grid": {"kind": "radial", "dim": 2, "R": 1.0, "h": 0.0625},
                "g": {"kind": "exp"},
                "measure": {"atoms": [{"at": [0.0], "weight": 25.1}]}}"#,
        )
        .unwrap();
        let e = c.build().unwrap();
        assert_eq!(e.mu.atoms().len(), 1);
        assert_eq!(c.reduce_options().schedule.len(), 41);
    }

    #[test]
    fn truncated_power() {
        let s: GSpec = serde_json::from_str(r#"{"kind": "power", "p": 3, "truncation": 8, "family": "arg-clamp"}"#).unwrap();
        let g = s.build().unwrap();
        assert_eq!(g.truncation(), Some((8.0, TruncationFamily::ArgClamp)));
        assert_eq!(g.level(), Some(512.0));
    }

    #[test]
    fn rejects_unknown_fields_and_bad_values() {
        assert!(ExperimentConfig::from_json(r#"{"grid": {"kind": "interval", "h": 0.1}, "bogus": 1}"#).is_err());
        let c = ExperimentConfig::from_json(r#"{"grid": {"kind": "interval", "h": 0.1}, "g": {"kind": "power", "p": 0.5}}"#).unwrap();
        assert!(c.build().is_err());
    }

    #[test]
    fn env_overrides() {
        let mut t = Tolerances::default();
        t.apply_env(|k| match k {
            "REDLAB_TOL" => Some("1e-6".into()),
            "REDLAB_SEQ_TOL" => Some("0.001".into()),
            _ => None,
        })
        .unwrap();
        assert_eq!(t.tol, 1e-6);
        assert_eq!(t.seq_tol, Some(1e-3));
        assert!(t.apply_env(|k| (k == "REDLAB_EPS_H").then(|| "-1".into())).is_err());
        assert!(t.apply_env(|k| (k == "REDLAB_TOL").then(|| "abc".into())).is_err());
    }
}
