//! Absorption nonlinearities `g`, their truncations and the flags the theory conditions on.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Base profile of `g`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GKind {
    /// `(t⁺)^p`.
    Power { p: f64 },
    /// `e^t − 1` for `t ≥ 0`, zero below.
    Exp,
    /// `sign(t)(e^{|t|} − 1)`.
    #[serde(rename = "exp2sided", alias = "two-sided-exp")]
    TwoSidedExp,
    /// `g ≡ 0`, the linear problem.
    Zero,
}

/// Which piece of a general `g` is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Part {
    Full,
    /// `g⁺(t) = g(t⁺)`.
    Positive,
    /// `t ↦ −g(−t⁺)`: the nonlinearity seen by `w = −u` when the data is nonpositive.
    ReflectedNegative,
}

/// How a level `n` bounds `g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TruncationFamily {
    /// `min{g, n}`, or `max{min{g, n}, −n}` when `g` takes negative values.
    Cap,
    /// `g(min{t, n})`, clamped to `[−n, n]` on both sides for two-sided `g`.
    ArgClamp,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Flags {
    pub vanishes_on_negatives: bool,
    pub convex: bool,
    pub delta2: bool,
    pub power_exponent: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Nonlinearity {
    kind: GKind,
    part: Part,
    truncation: Option<(f64, TruncationFamily)>,
}

fn ladder() -> impl Iterator<Item = f64> {
    (-40..=40).map(|k| k as f64 * 0.25)
}

pub fn make_power(p: f64) -> Result<Nonlinearity> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::InvalidNonlinearity(format!("power exponent {p} must exceed 1")));
    }
    Nonlinearity::new(GKind::Power { p })
}

pub fn make_exponential() -> Nonlinearity {
    Nonlinearity::new(GKind::Exp).expect("exp is admissible")
}

pub fn make_two_sided_exponential() -> Nonlinearity {
    Nonlinearity::new(GKind::TwoSidedExp).expect("two-sided exp is admissible")
}

pub fn make_zero() -> Nonlinearity {
    Nonlinearity::new(GKind::Zero).expect("zero is admissible")
}

impl Nonlinearity {
    pub fn new(kind: GKind) -> Result<Self> {
        if let GKind::Power { p } = kind {
            if !(p > 1.0) || !p.is_finite() {
                return Err(Error::InvalidNonlinearity(format!(
                    "power exponent {p} must exceed 1"
                )));
            }
        }
        let g = Self {
            kind,
            part: Part::Full,
            truncation: None,
        };
        g.validate()?;
        Ok(g)
    }

    /// Checks `g(0) = 0`, monotonicity, sign and cap conditions on a sampled ladder.
    fn validate(&self) -> Result<()> {
        if self.eval(0.0) != 0.0 {
            return Err(Error::InvalidNonlinearity("g(0) ≠ 0".into()));
        }
        let flags = self.flags();
        let mut prev = f64::NEG_INFINITY;
        for t in ladder() {
            let v = self.eval(t);
            if v.is_nan() || v < prev {
                return Err(Error::InvalidNonlinearity(format!("not nondecreasing at t = {t}")));
            }
            if flags.vanishes_on_negatives && t <= 0.0 && v != 0.0 {
                return Err(Error::InvalidNonlinearity(format!("g({t}) = {v} ≠ 0")));
            }
            if let Some(n) = self.level() {
                if v.abs() > n {
                    return Err(Error::InvalidNonlinearity(format!("|g({t})| exceeds cap {n}")));
                }
            }
            prev = v;
        }
        Ok(())
    }

    pub fn kind(&self) -> GKind {
        self.kind
    }

    pub fn part(&self) -> Part {
        self.part
    }

    pub fn level(&self) -> Option<f64> {
        match self.truncation {
            Some((n, TruncationFamily::Cap)) => Some(n),
            Some((n, TruncationFamily::ArgClamp)) => {
                let hi = self.raw(n);
                let lo = -self.raw(-n);
                Some(hi.max(lo))
            }
            None => None,
        }
    }

    pub fn truncation(&self) -> Option<(f64, TruncationFamily)> {
        self.truncation
    }

    pub fn is_truncated(&self) -> bool {
        self.truncation.is_some()
    }

    /// `g⁺`.
    pub fn positive_part(&self) -> Self {
        Self {
            part: Part::Positive,
            ..*self
        }
    }

    /// The nonlinearity of the reflected problem for nonpositive data.
    pub fn reflected_negative(&self) -> Self {
        Self {
            part: Part::ReflectedNegative,
            ..*self
        }
    }

    /// Untruncated copy.
    pub fn untruncated(&self) -> Self {
        Self {
            truncation: None,
            ..*self
        }
    }

    pub fn truncate(&self, n: f64) -> Result<Self> {
        self.truncate_with(n, TruncationFamily::Cap)
    }

    pub fn truncate_with(&self, n: f64, family: TruncationFamily) -> Result<Self> {
        if !(n > 0.0) {
            return Err(Error::InvalidNonlinearity(format!("truncation level {n} must be positive")));
        }
        let g = Self {
            truncation: Some((n, family)),
            ..*self
        };
        g.validate()?;
        Ok(g)
    }

    fn base(&self, t: f64) -> f64 {
        match self.kind {
            GKind::Power { p } => t.max(0.0).powf(p),
            GKind::Exp => t.max(0.0).exp_m1(),
            GKind::TwoSidedExp => t.signum() * t.abs().exp_m1(),
            GKind::Zero => 0.0,
        }
    }

    fn base_deriv(&self, t: f64) -> f64 {
        match self.kind {
            GKind::Power { p } => {
                if t > 0.0 {
                    p * t.powf(p - 1.0)
                } else {
                    0.0
                }
            }
            GKind::Exp => {
                if t > 0.0 {
                    t.exp()
                } else {
                    0.0
                }
            }
            GKind::TwoSidedExp => t.abs().exp(),
            GKind::Zero => 0.0,
        }
    }

    /// Untruncated value after the part transform.
    fn raw(&self, t: f64) -> f64 {
        match self.part {
            Part::Full => self.base(t),
            Part::Positive => self.base(t.max(0.0)),
            Part::ReflectedNegative => -self.base(-t.max(0.0)),
        }
    }

    fn raw_deriv(&self, t: f64) -> f64 {
        match self.part {
            Part::Full => self.base_deriv(t),
            Part::Positive => {
                if t > 0.0 {
                    self.base_deriv(t)
                } else {
                    0.0
                }
            }
            Part::ReflectedNegative => {
                if t > 0.0 {
                    self.base_deriv(-t)
                } else {
                    0.0
                }
            }
        }
    }

    fn two_sided(&self) -> bool {
        matches!(self.kind, GKind::TwoSidedExp) && self.part == Part::Full
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self.truncation {
            None => self.raw(t),
            Some((n, TruncationFamily::Cap)) => {
                let v = self.raw(t).min(n);
                if self.two_sided() {
                    v.max(-n)
                } else {
                    v
                }
            }
            Some((n, TruncationFamily::ArgClamp)) => self.raw(t.clamp(-n, n)),
        }
    }

    /// Analytic derivative; at a truncation kink the left derivative is returned.
    pub fn deriv(&self, t: f64) -> f64 {
        match self.truncation {
            None => self.raw_deriv(t),
            Some((n, TruncationFamily::Cap)) => {
                let v = self.raw(t);
                if v > n || (self.two_sided() && v <= -n) {
                    0.0
                } else {
                    self.raw_deriv(t)
                }
            }
            Some((n, TruncationFamily::ArgClamp)) => {
                if t > n || t <= -n {
                    0.0
                } else {
                    self.raw_deriv(t)
                }
            }
        }
    }

    /// Centered difference quotient with step `1e−6·max(1, |t|)`.
    pub fn fd_deriv(&self, t: f64) -> f64 {
        let s = 1e-6 * t.abs().max(1.0);
        (self.eval(t + s) - self.eval(t - s)) / (2.0 * s)
    }

    /// Flags of the untruncated `g` (after the part transform).
    pub fn flags(&self) -> Flags {
        match self.kind {
            GKind::Power { p } => Flags {
                vanishes_on_negatives: true,
                convex: true,
                delta2: true,
                power_exponent: Some(p),
            },
            GKind::Exp => Flags {
                vanishes_on_negatives: true,
                convex: true,
                delta2: false,
                power_exponent: None,
            },
            GKind::TwoSidedExp => Flags {
                vanishes_on_negatives: self.part != Part::Full,
                convex: self.part != Part::Full,
                delta2: false,
                power_exponent: None,
            },
            GKind::Zero => Flags {
                vanishes_on_negatives: true,
                convex: true,
                delta2: true,
                power_exponent: None,
            },
        }
    }

    /// Whether every finite measure is good for this `g` in dimension `dim`. Only answered for
    /// profiles with a closed-form criterion.
    pub fn is_subcritical(&self, dim: usize) -> Option<bool> {
        match self.kind {
            GKind::Zero => Some(true),
            GKind::Power { p } => Some(dim <= 2 || p < dim as f64 / (dim as f64 - 2.0)),
            GKind::Exp | GKind::TwoSidedExp => {
                if dim == 1 {
                    Some(true)
                } else if dim >= 3 {
                    Some(false)
                } else {
                    None
                }
            }
        }
    }

    /// `g` applied nodewise.
    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        u.iter().map(|&t| self.eval(t)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_examples() {
        let g = make_power(2.0).unwrap();
        assert_eq!(g.eval(3.0), 9.0);
        assert_eq!(g.eval(-5.0), 0.0);
        assert!(make_power(1.0).is_err());
        assert!(make_power(0.5).is_err());
        let g3 = make_power(3.0).unwrap();
        assert_eq!(g3.is_subcritical(3), Some(false));
        assert_eq!(make_power(2.0).unwrap().is_subcritical(3), Some(true));
        assert_eq!(g3.is_subcritical(2), Some(true));
        let f = g3.flags();
        assert!(f.convex && f.delta2 && f.vanishes_on_negatives);
    }

    #[test]
    fn exponential_examples() {
        let g = make_exponential();
        assert_eq!(g.eval(0.0), 0.0);
        assert!((g.eval(2f64.ln()) - 1.0).abs() < 1e-15);
        assert!(!g.flags().delta2);
        assert_eq!(g.eval(-3.0), 0.0);
    }

    #[test]
    fn two_sided_examples() {
        let g = make_two_sided_exponential();
        assert!((g.eval(-(2f64.ln())) + 1.0).abs() < 1e-15);
        assert_eq!(g.eval(0.0), 0.0);
        assert!(!g.flags().vanishes_on_negatives);
        let gp = g.positive_part();
        assert_eq!(gp.eval(1.5), 1.5f64.exp_m1());
        assert_eq!(gp.eval(-1.5), 0.0);
        assert!(gp.flags().vanishes_on_negatives);
        let gr = g.reflected_negative();
        assert_eq!(gr.eval(1.5), 1.5f64.exp_m1());
        assert_eq!(gr.eval(-1.5), 0.0);
        for k in -20..20 {
            let t = k as f64 * 0.37;
            assert_eq!(g.eval(-t), -g.eval(t));
        }
    }

    #[test]
    fn truncation_examples() {
        assert_eq!(make_exponential().truncate(1.0).unwrap().eval(10.0), 1.0);
        assert_eq!(make_power(2.0).unwrap().truncate(100.0).unwrap().eval(5.0), 25.0);
        assert_eq!(make_two_sided_exponential().truncate(1.0).unwrap().eval(-10.0), -1.0);
        assert!(make_exponential().truncate(0.0).is_err());
    }

    #[test]
    fn truncation_is_monotone_and_exact_above_value() {
        let gs = [make_exponential(), make_power(3.0).unwrap(), make_two_sided_exponential()];
        for g in gs {
            for t in ladder() {
                let mut prev = f64::NEG_INFINITY;
                for k in 0..16 {
                    let n = 2f64.powi(k);
                    let v = g.truncate(n).unwrap().eval(t);
                    if t >= 0.0 {
                        assert!(v >= prev);
                    }
                    if n >= g.eval(t).abs() {
                        assert_eq!(v, g.eval(t));
                    }
                    prev = v;
                }
            }
        }
    }

    #[test]
    fn arg_clamp_family() {
        let g = make_exponential().truncate_with(2.0, TruncationFamily::ArgClamp).unwrap();
        assert_eq!(g.eval(5.0), 2f64.exp_m1());
        assert_eq!(g.deriv(5.0), 0.0);
        assert_eq!(g.deriv(2.0), 2f64.exp());
        assert_eq!(g.level(), Some(2f64.exp_m1()));
    }

    #[test]
    fn kink_takes_left_derivative() {
        let g = make_power(2.0).unwrap().truncate(4.0).unwrap();
        assert_eq!(g.deriv(2.0), 4.0);
        assert_eq!(g.deriv(2.5), 0.0);
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let gs = [
            make_exponential(),
            make_power(2.0).unwrap(),
            make_power(2.5).unwrap(),
            make_two_sided_exponential(),
            make_two_sided_exponential().reflected_negative(),
        ];
        for g in gs {
            for t in ladder().filter(|t| t.abs() > 0.1) {
                let a = g.deriv(t);
                let b = g.fd_deriv(t);
                assert!((a - b).abs() <= 1e-4 * a.abs().max(1.0), "{g:?} at {t}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn config_literals() {
        let k: GKind = serde_json::from_str(r#"{"kind": "power", "p": 3.0}"#).unwrap();
        assert_eq!(k, GKind::Power { p: 3.0 });
        let k: GKind = serde_json::from_str(r#"{"kind": "exp"}"#).unwrap();
        assert_eq!(k, GKind::Exp);
        let k: GKind = serde_json::from_str(r#"{"kind": "exp2sided"}"#).unwrap();
        assert_eq!(k, GKind::TwoSidedExp);
    }
}
