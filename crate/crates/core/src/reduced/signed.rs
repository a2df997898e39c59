//! Signed data with a general `g`: `μ* = (μ⁺)* + (−μ⁻)*`.

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::measure::DiscreteMeasure;
use crate::nonlinearity::Nonlinearity;
use crate::solver::solve_semilinear_from;

use super::{reduce_by_truncation, ReduceOptions, ReducedResult, Scheme};

#[derive(Clone, Debug)]
pub struct SignedResult {
    /// `μ*` assembled from the two one-signed reductions, with `u*` solving the problem for it.
    pub combined: ReducedResult,
    /// `(μ⁺)*` under `g⁺`.
    pub positive: ReducedResult,
    /// `(μ⁻)*` for the reflected problem; `(−μ⁻)* = −` this measure.
    pub negative: ReducedResult,
    /// The two-sided truncation scheme applied to `μ` directly.
    pub direct: ReducedResult,
    /// `‖u*_direct − u*_combined‖_{L¹}`.
    pub l1_gap: f64,
    /// `l1_gap / ‖u*_combined‖_{L¹}`.
    pub rel_gap: f64,
}

pub fn reduce_signed(g: &Nonlinearity, mu: &DiscreteMeasure, opts: &ReduceOptions) -> Result<SignedResult> {
    let positive = reduce_by_truncation(&g.positive_part(), &mu.pos_part(), opts)?;
    let negative = reduce_by_truncation(&g.reflected_negative(), &mu.neg_part(), opts)?;
    let mu_star = positive.mu_star.try_sub(&negative.mu_star)?;

    let full = g.untruncated();
    let start: Vec<f64> = positive
        .u_star
        .values()
        .iter()
        .zip(negative.u_star.values())
        .map(|(p, n)| p - n)
        .collect();
    let start = GridFunction::new(mu.grid().clone(), start);
    let report = solve_semilinear_from(&full, &mu_star, &opts.solve, Some(&start))?;
    if !report.converged {
        return Err(Error::LevelFailed {
            level: 0,
            n: f64::INFINITY,
            residual: report.residual_l1,
        });
    }
    let combined = ReducedResult {
        u_star: report.u,
        mu_star,
        levels: Vec::new(),
        scheme: Scheme::SignedSplit,
        converged: positive.converged && negative.converged,
        g_final: full,
    };

    let direct = reduce_by_truncation(g, mu, opts)?;
    let l1_gap = direct.u_star.l1_distance(&combined.u_star);
    let norm = combined.u_star.l1_norm();
    Ok(SignedResult {
        rel_gap: if norm > 0.0 { l1_gap / norm } else { l1_gap },
        l1_gap,
        combined,
        positive,
        negative,
        direct,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, GridSpec};
    use crate::nonlinearity::{make_exponential, make_power};

    #[test]
    fn nonnegative_data_matches_plain_truncation() {
        let grid = build_grid(&GridSpec::radial(2, 1.0, 1.0 / 64.0)).unwrap();
        let mu = DiscreteMeasure::dirac(grid, 0, 6.0).unwrap();
        let g = make_exponential();
        let s = reduce_signed(&g, &mu, &Default::default()).unwrap();
        let t = reduce_by_truncation(&g, &mu, &Default::default()).unwrap();
        assert!((s.combined.mu_star.atom(0) - t.mu_star.atom(0)).abs() < 1e-12);
        assert!(s.rel_gap < 0.05, "{}", s.rel_gap);
    }

    #[test]
    fn nonpositive_data_is_good_when_g_vanishes_below_zero() {
        let grid = build_grid(&GridSpec::unit_square(1.0 / 32.0)).unwrap();
        let (a, _) = grid.locate(&[0.5, 0.5]).unwrap();
        let mu = DiscreteMeasure::new(grid.clone(), vec![-1.0; grid.len()], &[(a, -30.0)]).unwrap();
        let s = reduce_signed(&make_power(3.0).unwrap(), &mu, &Default::default()).unwrap();
        assert!((&s.combined.mu_star - &mu).tv_norm() < 1e-9);
    }
}
