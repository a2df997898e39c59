//! Discrete finite measures: an absolutely continuous density plus finitely many atoms.
//!
//! The density is a value per interior node read against the cell volumes; atoms carry a
//! weight at a node. Densities and atoms are treated as mutually singular, the way Lebesgue
//! densities and Dirac masses are in the continuum, so lattice operations act on the two
//! components separately.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{l1, Grid, GridFunction};

#[derive(Clone, Debug)]
pub struct DiscreteMeasure {
    grid: Arc<Grid>,
    density: Vec<f64>,
    atoms: BTreeMap<usize, f64>,
}

impl DiscreteMeasure {
    pub fn zero(grid: Arc<Grid>) -> Self {
        let n = grid.len();
        Self {
            grid,
            density: vec![0.0; n],
            atoms: BTreeMap::new(),
        }
    }

    pub fn from_density(density: GridFunction) -> Self {
        let grid = density.grid().clone();
        Self {
            grid,
            density: density.into_values(),
            atoms: BTreeMap::new(),
        }
    }

    /// Builds a measure from density values and `(node, weight)` atoms; atoms at the same
    /// node are merged.
    pub fn new(grid: Arc<Grid>, density: Vec<f64>, atoms: &[(usize, f64)]) -> Result<Self> {
        if density.len() != grid.len() {
            return Err(Error::InvalidMeasure(format!(
                "density has {} values for {} nodes",
                density.len(),
                grid.len()
            )));
        }
        let mut m = Self {
            grid,
            density,
            atoms: BTreeMap::new(),
        };
        for &(node, w) in atoms {
            m.add_atom(node, w)?;
        }
        Ok(m)
    }

    /// A single atom `weight · δ_node`.
    pub fn dirac(grid: Arc<Grid>, node: usize, weight: f64) -> Result<Self> {
        Self::new(grid.clone(), vec![0.0; grid.len()], &[(node, weight)])
    }

    /// Adds `weight · δ` at the node whose cell contains `point`; returns the snap distance.
    pub fn add_atom_at(&mut self, point: &[f64], weight: f64) -> Result<f64> {
        let (node, snap) = self.grid.locate(point)?;
        if snap >= self.grid.spacing() {
            return Err(Error::InvalidMeasure(format!(
                "atom at {point:?} snaps {snap} away from node {node}"
            )));
        }
        self.add_atom(node, weight)?;
        Ok(snap)
    }

    pub fn add_atom(&mut self, node: usize, weight: f64) -> Result<()> {
        if node >= self.grid.len() {
            return Err(Error::InvalidMeasure(format!(
                "atom node {node} out of range ({} nodes)",
                self.grid.len()
            )));
        }
        if !weight.is_finite() {
            return Err(Error::InvalidMeasure(format!("atom weight {weight}")));
        }
        *self.atoms.entry(node).or_insert(0.0) += weight;
        Ok(())
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn density_mut(&mut self) -> &mut [f64] {
        &mut self.density
    }

    pub fn atoms(&self) -> &BTreeMap<usize, f64> {
        &self.atoms
    }

    pub fn atom(&self, node: usize) -> f64 {
        self.atoms.get(&node).copied().unwrap_or(0.0)
    }

    pub fn atom_nodes(&self) -> Vec<usize> {
        self.atoms.keys().copied().collect()
    }

    pub fn density_function(&self) -> GridFunction {
        GridFunction::new(self.grid.clone(), self.density.clone())
    }

    /// Total mass `μ(Ω)`.
    pub fn mass(&self) -> f64 {
        let d: f64 = self
            .density
            .iter()
            .zip(self.grid.volumes())
            .map(|(f, v)| f * v)
            .sum();
        d + self.atoms.values().sum::<f64>()
    }

    /// `∫|density| + Σ|atom weights|`.
    pub fn tv_norm(&self) -> f64 {
        self.density_tv() + self.atoms_tv()
    }

    pub fn density_tv(&self) -> f64 {
        l1(&self.density, self.grid.volumes())
    }

    pub fn atoms_tv(&self) -> f64 {
        self.atoms.values().map(|w| w.abs()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.density.iter().all(|&f| f == 0.0) && self.atoms.values().all(|&w| w == 0.0)
    }

    /// Componentwise `self ≤ other + tol` on density values and atom weights.
    pub fn le(&self, other: &Self, tol: f64) -> bool {
        self.density
            .iter()
            .zip(&other.density)
            .all(|(a, b)| *a <= b + tol)
            && self
                .atom_union(other)
                .into_iter()
                .all(|k| self.atom(k) <= other.atom(k) + tol)
    }

    fn atom_union(&self, other: &Self) -> Vec<usize> {
        let mut keys: Vec<usize> = self.atoms.keys().chain(other.atoms.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        keys
    }

    fn check_grid(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.grid, &other.grid) || self.grid.same_as(&other.grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.check_grid(other)?;
        let density = self
            .density
            .iter()
            .zip(&other.density)
            .map(|(&a, &b)| f(a, b))
            .collect();
        let atoms = self
            .atom_union(other)
            .into_iter()
            .map(|k| (k, f(self.atom(k), other.atom(k))))
            .filter(|&(_, w)| w != 0.0)
            .collect();
        Ok(Self {
            grid: self.grid.clone(),
            density,
            atoms,
        })
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: self.grid.clone(),
            density: self.density.iter().map(|&a| f(a)).collect(),
            atoms: self
                .atoms
                .iter()
                .map(|(&k, &w)| (k, f(w)))
                .filter(|&(_, w)| w != 0.0)
                .collect(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|a| c * a)
    }

    pub fn pos_part(&self) -> Self {
        self.map(|a| a.max(0.0))
    }

    pub fn neg_part(&self) -> Self {
        self.map(|a| (-a).max(0.0))
    }

    /// `sup{μ, ν} = ν + (μ − ν)⁺`.
    pub fn lattice_sup(&self, other: &Self) -> Result<Self> {
        Ok(other.try_add(&self.try_sub(other)?.pos_part())?)
    }

    /// `inf{μ, ν} = −sup{−μ, −ν}`.
    pub fn lattice_inf(&self, other: &Self) -> Result<Self> {
        Ok(-(&(-self).lattice_sup(&-other)?))
    }

    /// `μ⌊E`: density and atoms zeroed outside the node set `E`.
    pub fn restrict(&self, in_set: impl Fn(usize) -> bool) -> Self {
        Self {
            grid: self.grid.clone(),
            density: self
                .density
                .iter()
                .enumerate()
                .map(|(i, &f)| if in_set(i) { f } else { 0.0 })
                .collect(),
            atoms: self
                .atoms
                .iter()
                .filter(|(&k, _)| in_set(k))
                .map(|(&k, &w)| (k, w))
                .collect(),
        }
    }

    /// Diffuse and concentrated parts. Points have zero H¹-capacity only when `N ≥ 2`, so on
    /// one-dimensional grids every measure is diffuse.
    pub fn decompose(&self) -> (Self, Self) {
        if self.grid.dimension() == 1 {
            return (self.clone(), Self::zero(self.grid.clone()));
        }
        let diffuse = Self {
            grid: self.grid.clone(),
            density: self.density.clone(),
            atoms: BTreeMap::new(),
        };
        let concentrated = Self {
            grid: self.grid.clone(),
            density: vec![0.0; self.grid.len()],
            atoms: self.atoms.clone(),
        };
        (diffuse, concentrated)
    }

    /// True when no atom node of one carries mass of the other and the density supports are
    /// disjoint.
    pub fn mutually_singular(&self, other: &Self) -> bool {
        let atoms_disjoint = self
            .atoms
            .iter()
            .filter(|(_, &w)| w != 0.0)
            .all(|(k, _)| other.atom(*k) == 0.0);
        let density_disjoint = self
            .density
            .iter()
            .zip(&other.density)
            .all(|(&a, &b)| a == 0.0 || b == 0.0);
        atoms_disjoint && density_disjoint
    }

    /// `ρ_n * μ` with the hat kernel `(1 − |x|/r)⁺`, `r = 1/n`.
    pub fn mollify(&self, n: f64) -> Result<Self> {
        self.mollify_radius(1.0 / n)
    }

    /// Spreads every cell mass and atom over the nodes within `radius`, renormalizing the
    /// sampled kernel so that total mass is preserved exactly. Returns a pure density.
    pub fn mollify_radius(&self, radius: f64) -> Result<Self> {
        let h = self.grid.spacing();
        if !(radius > h) {
            return Err(Error::KernelUnresolvable { radius, spacing: h });
        }
        for &node in self.atoms.keys() {
            if self.grid.boundary_distance(node) <= radius {
                return Err(Error::AtomNearBoundary { node, radius });
            }
        }
        let vol = self.grid.volumes();
        let mut out = vec![0.0; self.grid.len()];
        let mut spread = |src: usize, mass: f64| {
            if mass == 0.0 {
                return;
            }
            let support = self.grid.nodes_within(src, radius);
            let weights: Vec<f64> = support.iter().map(|&(_, d)| 1.0 - d / radius).collect();
            let z: f64 = support
                .iter()
                .zip(&weights)
                .map(|(&(j, _), w)| w * vol[j])
                .sum();
            for (&(j, _), w) in support.iter().zip(&weights) {
                out[j] += mass * w / z;
            }
        };
        for (i, &f) in self.density.iter().enumerate() {
            spread(i, f * vol[i]);
        }
        for (&node, &w) in &self.atoms {
            spread(node, w);
        }
        Ok(Self {
            grid: self.grid.clone(),
            density: out,
            atoms: BTreeMap::new(),
        })
    }
}

impl Neg for &DiscreteMeasure {
    type Output = DiscreteMeasure;
    fn neg(self) -> DiscreteMeasure {
        self.map(|a| -a)
    }
}

impl Add for &DiscreteMeasure {
    type Output = DiscreteMeasure;
    fn add(self, rhs: Self) -> DiscreteMeasure {
        self.try_add(rhs).expect("measures on the same grid")
    }
}

impl Sub for &DiscreteMeasure {
    type Output = DiscreteMeasure;
    fn sub(self, rhs: Self) -> DiscreteMeasure {
        self.try_sub(rhs).expect("measures on the same grid")
    }
}

impl Mul<f64> for &DiscreteMeasure {
    type Output = DiscreteMeasure;
    fn mul(self, c: f64) -> DiscreteMeasure {
        self.scale(c)
    }
}

/// Density literal of a measure config.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DensitySpec {
    Constant { value: f64 },
    ExprTable { values: Vec<f64> },
}

/// Atom literal of a measure config.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomSpec {
    pub at: Vec<f64>,
    pub weight: f64,
}

/// `{"density": ..., "atoms": [...]}` as found in experiment configs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MeasureSpec {
    #[serde(default)]
    pub density: Option<DensitySpec>,
    #[serde(default)]
    pub atoms: Vec<AtomSpec>,
}

impl MeasureSpec {
    pub fn build(&self, grid: &Arc<Grid>) -> Result<DiscreteMeasure> {
        let n = grid.len();
        let density = match &self.density {
            None => vec![0.0; n],
            Some(DensitySpec::Constant { value }) => vec![*value; n],
            Some(DensitySpec::ExprTable { values }) => {
                if values.len() != n {
                    return Err(Error::InvalidMeasure(format!(
                        "density table has {} values for {n} nodes",
                        values.len()
                    )));
                }
                values.clone()
            }
        };
        let mut m = DiscreteMeasure::new(grid.clone(), density, &[])?;
        for a in &self.atoms {
            m.add_atom_at(&a.at, a.weight)?;
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, GridSpec};
    use std::f64::consts::PI;

    fn line() -> Arc<Grid> {
        build_grid(&GridSpec::interval(0.0, 1.0, 1.0 / 64.0)).unwrap()
    }

    #[test]
    fn tv_of_simple_measures() {
        let g = build_grid(&GridSpec::radial(2, 1.0, 1.0 / 64.0)).unwrap();
        let m = DiscreteMeasure::dirac(g, 0, 4.0 * PI).unwrap();
        assert!((m.tv_norm() - 12.566370614359172).abs() < 1e-12);

        let g = line();
        let one = DiscreteMeasure::from_density(GridFunction::constant(g.clone(), 1.0));
        assert!((one.tv_norm() - 1.0).abs() < 2.0 / 64.0);

        let m = DiscreteMeasure::new(g.clone(), vec![0.0; g.len()], &[(3, 1.0), (9, -1.0)]).unwrap();
        assert_eq!(m.tv_norm(), 2.0);
    }

    #[test]
    fn atoms_merge_on_construction() {
        let g = line();
        let m = DiscreteMeasure::new(g.clone(), vec![0.0; g.len()], &[(3, 1.0), (3, 2.0)]).unwrap();
        assert_eq!(m.atoms().len(), 1);
        assert_eq!(m.atom(3), 3.0);
        assert!(DiscreteMeasure::dirac(g.clone(), g.len(), 1.0).is_err());
    }

    #[test]
    fn positive_and_negative_parts() {
        let g = line();
        let m = DiscreteMeasure::new(g.clone(), vec![0.0; g.len()], &[(3, 1.0), (9, -2.0)]).unwrap();
        assert_eq!(m.pos_part().atom(3), 1.0);
        assert_eq!(m.pos_part().atom(9), 0.0);
        assert_eq!(m.neg_part().atom(9), 2.0);
        let back = &m.pos_part() - &m.neg_part();
        assert_eq!(back.atoms(), m.atoms());

        let f = GridFunction::from_fn(g.clone(), |x| x[0] - 0.5);
        let m = DiscreteMeasure::from_density(f);
        for (i, &p) in m.pos_part().density().iter().enumerate() {
            assert_eq!(p, m.density()[i].max(0.0));
        }
        let nonneg = m.pos_part();
        assert!(nonneg.neg_part().is_zero());
    }

    #[test]
    fn sup_inf_of_atoms() {
        let g = line();
        let a = DiscreteMeasure::dirac(g.clone(), 5, 1.0).unwrap();
        let a2 = DiscreteMeasure::dirac(g.clone(), 5, 2.0).unwrap();
        let b = DiscreteMeasure::dirac(g.clone(), 7, 1.0).unwrap();
        assert_eq!(a.lattice_sup(&a2).unwrap().atom(5), 2.0);
        let s = a.lattice_sup(&b).unwrap();
        assert_eq!((s.atom(5), s.atom(7)), (1.0, 1.0));
        let i = a.lattice_inf(&a).unwrap();
        assert_eq!(i.atoms(), a.atoms());
    }

    #[test]
    fn restriction() {
        let g = line();
        let m = DiscreteMeasure::new(g.clone(), vec![1.0; g.len()], &[(5, 1.0), (7, 1.0)]).unwrap();
        let r = m.restrict(|i| i == 5);
        assert_eq!(r.atom(5), 1.0);
        assert_eq!(r.atom(7), 0.0);
        assert!(m.restrict(|_| false).is_zero());
        let sum = &m.restrict(|i| i < 6) + &m.restrict(|i| i >= 6);
        assert_eq!(sum.density(), m.density());
        assert_eq!(sum.atoms(), m.atoms());
    }

    #[test]
    fn decompose_by_dimension() {
        let g = build_grid(&GridSpec::unit_square(1.0 / 16.0)).unwrap();
        let m = DiscreteMeasure::new(g.clone(), vec![2.0; g.len()], &[(20, 3.0)]).unwrap();
        let (d, c) = m.decompose();
        assert!(d.atoms().is_empty());
        assert_eq!(c.atom(20), 3.0);
        assert!(c.density().iter().all(|&x| x == 0.0));

        let g = line();
        let m = DiscreteMeasure::dirac(g.clone(), 31, 1.0).unwrap();
        let (d, c) = m.decompose();
        assert_eq!(d.atom(31), 1.0);
        assert!(c.is_zero());

        let (d, c) = DiscreteMeasure::zero(g).decompose();
        assert!(d.is_zero() && c.is_zero());
    }

    #[test]
    fn mollify_preserves_mass() {
        let g = build_grid(&GridSpec::unit_square(1.0 / 64.0)).unwrap();
        let (node, _) = g.locate(&[0.5, 0.5]).unwrap();
        let m = DiscreteMeasure::dirac(g.clone(), node, 1.0).unwrap();
        let s = m.mollify(16.0).unwrap();
        assert!(s.atoms().is_empty());
        assert!((s.tv_norm() - 1.0).abs() < 1e-12);
        assert!(DiscreteMeasure::zero(g.clone()).mollify(16.0).unwrap().is_zero());
        assert!(m.mollify(128.0).is_err());
        let (edge, _) = g.locate(&[0.03125, 0.5]).unwrap();
        assert!(DiscreteMeasure::dirac(g.clone(), edge, 1.0).unwrap().mollify(16.0).is_err());

        let one = DiscreteMeasure::from_density(GridFunction::constant(g.clone(), 1.0));
        let s = one.mollify(16.0).unwrap();
        for i in 0..g.len() {
            if g.boundary_distance(i) > 2.0 / 16.0 {
                assert!((s.density()[i] - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn measure_spec_snaps_atoms() {
        let g = build_grid(&GridSpec::radial(2, 1.0, 1.0 / 64.0)).unwrap();
        let spec: MeasureSpec = serde_json::from_str(
            r#"{"density": {"kind": "constant", "value": 1.0}, "atoms": [{"at": [0.0], "weight": 12.566370614}]}"#,
        )
        .unwrap();
        let m = spec.build(&g).unwrap();
        assert_eq!(m.atom(0), 12.566370614);
        assert!(m.density().iter().all(|&f| f == 1.0));
    }
}
