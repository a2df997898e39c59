//! Discrete H¹-capacity of node sets, and a constructive test function whose Laplacian has
//! `L¹` mass close to twice that capacity.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction};
use crate::linalg::SymSparse;

/// Strictly interior node set `K`.
#[derive(Clone, Debug)]
pub struct CompactSet {
    grid: Arc<Grid>,
    nodes: BTreeSet<usize>,
    pub tag: String,
}

impl CompactSet {
    pub fn new(grid: Arc<Grid>, nodes: impl IntoIterator<Item = usize>, tag: &str) -> Result<Self> {
        let nodes: BTreeSet<usize> = nodes.into_iter().collect();
        if nodes.is_empty() {
            return Err(Error::InvalidSet(format!("{tag}: empty")));
        }
        for &i in &nodes {
            if i >= grid.len() {
                return Err(Error::InvalidSet(format!("{tag}: node {i} out of range")));
            }
            if grid.touches_boundary(i) {
                return Err(Error::InvalidSet(format!("{tag}: node {i} touches the boundary")));
            }
        }
        Ok(Self {
            grid,
            nodes,
            tag: tag.to_string(),
        })
    }

    /// Nodes whose coordinates satisfy `pred`.
    pub fn from_predicate(grid: Arc<Grid>, tag: &str, pred: impl Fn(&[f64]) -> bool) -> Result<Self> {
        let nodes: Vec<usize> = (0..grid.len()).filter(|&i| pred(grid.coords(i))).collect();
        Self::new(grid, nodes, tag)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn nodes(&self) -> &BTreeSet<usize> {
        &self.nodes
    }

    pub fn contains(&self, i: usize) -> bool {
        self.nodes.contains(&i)
    }

    /// Nodes within `radius` of `K`.
    pub fn dilate(&self, radius: f64, tag: &str) -> Result<Self> {
        let mut out = self.nodes.clone();
        for &i in &self.nodes {
            out.extend(self.grid.nodes_within(i, radius).into_iter().map(|(j, _)| j));
        }
        Self::new(self.grid.clone(), out, tag)
    }
}

#[derive(Clone, Debug)]
pub struct Capacity {
    pub value: f64,
    pub potential: GridFunction,
}

/// Dirichlet energy of the discrete capacitary potential: `u = 1` on `K`, `K u = 0` at the
/// other interior nodes, `u = 0` on `∂Ω`.
pub fn cap_h1(set: &CompactSet) -> Result<Capacity> {
    let grid = set.grid();
    let k = grid.laplacian().stiffness();
    let free: Vec<usize> = (0..grid.len()).filter(|&i| !set.contains(i)).collect();
    let mut local = vec![usize::MAX; grid.len()];
    for (p, &i) in free.iter().enumerate() {
        local[i] = p;
    }
    let mut entries = Vec::new();
    let mut rhs = vec![0.0; free.len()];
    for (p, &i) in free.iter().enumerate() {
        for (j, v) in k.row(i) {
            if set.contains(j) {
                rhs[p] -= v;
            } else {
                entries.push((p, local[j], v));
            }
        }
    }
    let mut u = vec![1.0; grid.len()];
    if !free.is_empty() {
        let sub = SymSparse::from_entries(free.len(), &entries);
        let x = sub.solve_shifted(&vec![0.0; free.len()], &rhs)?;
        for (p, &i) in free.iter().enumerate() {
            u[i] = x[p];
        }
    }
    let ku = k.matvec(&u);
    let value = u.iter().zip(&ku).map(|(a, b)| a * b).sum();
    Ok(Capacity {
        value,
        potential: GridFunction::new(grid.clone(), u),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PsiOptions {
    /// Level cut `δ` in `v = (u − δ)⁺/(1 − δ)`.
    pub delta: f64,
    /// `K` is dilated by this many cells before its potential is taken, so that `ψ = 1` on a
    /// neighbourhood of `K`.
    pub dilation_cells: f64,
    /// Mollification radius in cells.
    pub radius_cells: f64,
}

impl Default for PsiOptions {
    fn default() -> Self {
        Self {
            delta: 0.02,
            dilation_cells: 3.0,
            radius_cells: 2.0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Psi {
    pub psi: GridFunction,
    /// `Σ|K ψ|`, the discrete `∫|Δψ|`.
    pub delta1_mass: f64,
    /// Capacity of the dilated set whose potential was cut.
    pub dilated_capacity: f64,
}

/// Normalized hat-kernel average of nodal values (gather form; constants are preserved).
pub fn smooth(grid: &Grid, values: &[f64], radius: f64) -> Vec<f64> {
    let vol = grid.volumes();
    (0..grid.len())
        .map(|i| {
            let (mut num, mut den) = (0.0, 0.0);
            for (j, d) in grid.nodes_within(i, radius) {
                let w = (1.0 - d / radius) * vol[j];
                num += w * values[j];
                den += w;
            }
            num / den
        })
        .collect()
}

/// `ψ = ρ * (u_ω − δ)⁺/(1 − δ)` with `u_ω` the capacitary potential of a dilation `ω` of `K`.
pub fn construct_psi(set: &CompactSet, opts: &PsiOptions) -> Result<Psi> {
    if !(opts.delta > 0.0 && opts.delta < 1.0) {
        return Err(Error::Infeasible(format!("δ = {} outside (0, 1)", opts.delta)));
    }
    let grid = set.grid();
    let h = grid.spacing();
    let omega = set
        .dilate(opts.dilation_cells * h * (1.0 + 1e-9), "dilation")
        .map_err(|e| Error::Infeasible(format!("dilated set: {e}")))?;
    let cap = cap_h1(&omega)?;
    let v: Vec<f64> = cap
        .potential
        .values()
        .iter()
        .map(|&u| ((u - opts.delta) / (1.0 - opts.delta)).max(0.0))
        .collect();
    let radius = opts.radius_cells * h;
    for i in 0..grid.len() {
        if v[i] > 0.0 && grid.boundary_distance(i) <= radius + h {
            return Err(Error::Infeasible(format!(
                "level set u > {} reaches the boundary collar at this resolution",
                opts.delta
            )));
        }
    }
    let psi = smooth(grid, &v, radius);
    let delta1_mass = grid
        .laplacian()
        .apply_stiffness(&psi)
        .iter()
        .map(|x| x.abs())
        .sum();
    Ok(Psi {
        psi: GridFunction::new(grid.clone(), psi),
        delta1_mass,
        dilated_capacity: cap.value,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBound {
    pub cap: f64,
    pub half_mass: f64,
    pub holds: bool,
}

/// `cap_h1(K) ≤ ½ Σ|K φ|` for `φ` clamped to `min{1, φ⁺}`; `φ` must equal 1 on `K` and vanish
/// on the nodes next to `∂Ω`.
pub fn lower_bound_check(set: &CompactSet, phi: &GridFunction, slack: f64) -> Result<LowerBound> {
    let grid = set.grid();
    if !phi.grid().same_as(grid) {
        return Err(Error::GridMismatch);
    }
    let clamped: Vec<f64> = phi.values().iter().map(|&x| x.clamp(0.0, 1.0)).collect();
    for &i in set.nodes() {
        if clamped[i] < 1.0 {
            return Err(Error::Infeasible(format!("φ = {} < 1 at node {i} of K", clamped[i])));
        }
    }
    for (i, &x) in clamped.iter().enumerate() {
        if grid.touches_boundary(i) && x != 0.0 {
            return Err(Error::Infeasible(format!("φ = {x} next to the boundary at node {i}")));
        }
    }
    let cap = cap_h1(set)?.value;
    let half_mass = 0.5
        * grid
            .laplacian()
            .apply_stiffness(&clamped)
            .iter()
            .map(|x| x.abs())
            .sum::<f64>();
    Ok(LowerBound {
        cap,
        half_mass,
        holds: cap <= half_mass + slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, GridSpec};
    use std::f64::consts::PI;

    fn point_set(h: f64) -> CompactSet {
        let g = build_grid(&GridSpec::interval(0.0, 1.0, h)).unwrap();
        let (mid, _) = g.locate(&[0.5]).unwrap();
        CompactSet::new(g, [mid], "midpoint").unwrap()
    }

    #[test]
    fn point_in_an_interval() {
        let c = cap_h1(&point_set(1.0 / 256.0)).unwrap();
        assert!((c.value - 4.0).abs() < 1e-9);
        let u = c.potential.values();
        assert!(u.iter().all(|&x| (0.0..=1.0).contains(&x)));
    }

    #[test]
    fn disk_in_a_disk() {
        let g = build_grid(&GridSpec::radial(2, 1.0, 1.0 / 512.0)).unwrap();
        let set = CompactSet::from_predicate(g, "r <= 1/4", |x| x[0] <= 0.25 + 1e-12).unwrap();
        let c = cap_h1(&set).unwrap();
        let exact = 2.0 * PI / 4f64.ln();
        assert!((c.value / exact - 1.0).abs() < 0.05, "{}", c.value);
    }

    #[test]
    fn whole_interior() {
        let g = build_grid(&GridSpec::unit_square(1.0 / 16.0)).unwrap();
        let set = CompactSet::from_predicate(g.clone(), "all", |_| true);
        assert!(set.is_err());
        let nodes: Vec<usize> = (0..g.len()).filter(|&i| !g.touches_boundary(i)).collect();
        let set = CompactSet::new(g, nodes, "interior").unwrap();
        let c = cap_h1(&set).unwrap();
        assert!(set.nodes().iter().all(|&i| c.potential.values()[i] == 1.0));
        assert!(c.value > 20.0, "{}", c.value);
    }

    #[test]
    fn invalid_sets() {
        let g = build_grid(&GridSpec::interval(0.0, 1.0, 0.125)).unwrap();
        assert!(CompactSet::new(g.clone(), [], "empty").is_err());
        assert!(CompactSet::new(g.clone(), [0], "edge").is_err());
        assert!(CompactSet::new(g, [99], "far").is_err());
    }

    #[test]
    fn psi_for_a_point() {
        let set = point_set(1.0 / 1024.0);
        let p = construct_psi(&set, &PsiOptions::default()).unwrap();
        let psi = p.psi.values();
        assert!(psi.iter().all(|&x| (-1e-12..=1.0 + 1e-12).contains(&x)));
        let g = set.grid().clone();
        for &i in set.nodes() {
            for (j, _) in g.nodes_within(i, 1.01 * g.spacing()) {
                assert!((psi[j] - 1.0).abs() < 1e-12);
            }
        }
        assert!(p.delta1_mass >= 2.0 * 4.0 * 0.95 && p.delta1_mass <= 2.0 * 4.0 * 1.10, "{}", p.delta1_mass);
        let lb = lower_bound_check(&set, &p.psi, 1e-12).unwrap();
        assert!(lb.holds);
    }

    #[test]
    fn lower_bound_rejects_infeasible() {
        let set = point_set(1.0 / 64.0);
        let zero = GridFunction::zeros(set.grid().clone());
        assert!(lower_bound_check(&set, &zero, 0.0).is_err());
    }

    #[test]
    fn capacity_is_monotone() {
        let g = build_grid(&GridSpec::unit_square(1.0 / 32.0)).unwrap();
        let small = CompactSet::from_predicate(g.clone(), "s", |x| (x[0] - 0.5).abs() < 0.1 && (x[1] - 0.5).abs() < 0.1).unwrap();
        let big = CompactSet::from_predicate(g, "b", |x| (x[0] - 0.5).abs() < 0.2 && (x[1] - 0.5).abs() < 0.2).unwrap();
        assert!(cap_h1(&small).unwrap().value <= cap_h1(&big).unwrap().value + 1e-12);
    }
}
