//! Uniform grids with homogeneous Dirichlet boundary and the cell-centred negative Laplacian.
//!
//! Four geometries are supported: an interval, a ball reduced to its radial coordinate in
//! dimension `N ≥ 2`, an axis-aligned rectangle and an axis-aligned box. Every grid carries
//! a finite-volume cell per interior node and a list of faces with conductances
//! (face area / spacing); the stiffness `K` assembled from the faces is symmetric positive
//! definite, and `−Δ_h = V⁻¹K` with `V` the diagonal of cell volumes.
//!
//! Radial nodes sit at `r_i = (i + 1) h`; the first cell is `[0, 3h/2)` and contains the
//! origin, so a point mass at the origin loads node 0.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SymSparse;

/// Serializable description of a grid, as it appears in experiment configs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum GridSpec {
    #[serde(rename = "interval", alias = "interval1d")]
    Interval {
        #[serde(default)]
        a: f64,
        #[serde(default = "one")]
        b: f64,
        h: f64,
    },
    #[serde(rename = "radial", alias = "radialN")]
    Radial {
        dim: usize,
        #[serde(rename = "R")]
        radius: f64,
        h: f64,
    },
    #[serde(rename = "rect", alias = "rect2d")]
    Rect {
        #[serde(default = "zeros2")]
        lower: [f64; 2],
        #[serde(default = "ones2")]
        upper: [f64; 2],
        h: f64,
    },
    #[serde(rename = "box", alias = "box3d")]
    Box {
        #[serde(default = "zeros3")]
        lower: [f64; 3],
        #[serde(default = "ones3")]
        upper: [f64; 3],
        h: f64,
    },
}

fn one() -> f64 {
    1.0
}
fn zeros2() -> [f64; 2] {
    [0.0; 2]
}
fn ones2() -> [f64; 2] {
    [1.0; 2]
}
fn zeros3() -> [f64; 3] {
    [0.0; 3]
}
fn ones3() -> [f64; 3] {
    [1.0; 3]
}

impl GridSpec {
    pub fn interval(a: f64, b: f64, h: f64) -> Self {
        Self::Interval { a, b, h }
    }

    pub fn radial(dim: usize, radius: f64, h: f64) -> Self {
        Self::Radial { dim, radius, h }
    }

    pub fn unit_square(h: f64) -> Self {
        Self::Rect {
            lower: [0.0; 2],
            upper: [1.0; 2],
            h,
        }
    }

    pub fn unit_cube(h: f64) -> Self {
        Self::Box {
            lower: [0.0; 3],
            upper: [1.0; 3],
            h,
        }
    }

    pub fn spacing(&self) -> f64 {
        match *self {
            Self::Interval { h, .. }
            | Self::Radial { h, .. }
            | Self::Rect { h, .. }
            | Self::Box { h, .. } => h,
        }
    }

    /// Same geometry, different spacing.
    pub fn with_spacing(&self, h: f64) -> Self {
        let mut s = self.clone();
        match &mut s {
            Self::Interval { h: x, .. }
            | Self::Radial { h: x, .. }
            | Self::Rect { h: x, .. }
            | Self::Box { h: x, .. } => *x = h,
        }
        s
    }
}

/// Interface between an interior node and a neighbour (or the boundary when `b` is `None`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Face {
    pub a: usize,
    pub b: Option<usize>,
    /// Face area divided by the node distance.
    pub conductance: f64,
}

#[derive(Clone, Debug, PartialEq)]
enum Geometry {
    Radial { dim: usize, radius: f64 },
    Cartesian { lower: Vec<f64>, upper: Vec<f64> },
}

/// A uniform grid of interior nodes with their finite-volume cells.
#[derive(Debug)]
pub struct Grid {
    spec: GridSpec,
    geometry: Geometry,
    h: f64,
    shape: Vec<usize>,
    coords: Vec<f64>,
    coord_dim: usize,
    volumes: Vec<f64>,
    faces: Vec<Face>,
    boundary_adjacent: Vec<bool>,
    domain_measure: f64,
    laplacian: NegLaplacian,
}

/// Surface area of the unit sphere in `R^n`.
pub fn unit_sphere_area(n: usize) -> f64 {
    match n {
        0 => 0.0,
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 2.0 * PI * unit_sphere_area(n - 2) / (n - 2) as f64,
    }
}

fn axis_count(lo: f64, hi: f64, h: f64) -> Result<usize> {
    if !(hi > lo) {
        return Err(Error::InvalidGrid(format!("empty extent [{lo}, {hi}]")));
    }
    let ratio = (hi - lo) / h;
    let cells = ratio.round();
    if (ratio - cells).abs() > 1e-9 * ratio.max(1.0) {
        return Err(Error::InvalidGrid(format!(
            "spacing {h} does not divide extent {}",
            hi - lo
        )));
    }
    if cells < 2.0 {
        return Err(Error::InvalidGrid(format!(
            "spacing {h} leaves no interior node in [{lo}, {hi}]"
        )));
    }
    Ok(cells as usize - 1)
}

/// Builds a grid from its spec.
pub fn build_grid(spec: &GridSpec) -> Result<Arc<Grid>> {
    Grid::new(spec.clone()).map(Arc::new)
}

impl Grid {
    pub fn new(spec: GridSpec) -> Result<Self> {
        let h = spec.spacing();
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {h}")));
        }
        match spec.clone() {
            GridSpec::Interval { a, b, h } => Self::cartesian(spec, vec![a], vec![b], h),
            GridSpec::Rect { lower, upper, h } => {
                Self::cartesian(spec, lower.to_vec(), upper.to_vec(), h)
            }
            GridSpec::Box { lower, upper, h } => {
                Self::cartesian(spec, lower.to_vec(), upper.to_vec(), h)
            }
            GridSpec::Radial { dim, radius, h } => Self::radial(spec, dim, radius, h),
        }
    }

    fn cartesian(spec: GridSpec, lower: Vec<f64>, upper: Vec<f64>, h: f64) -> Result<Self> {
        let d = lower.len();
        let shape = lower
            .iter()
            .zip(&upper)
            .map(|(&lo, &hi)| axis_count(lo, hi, h))
            .collect::<Result<Vec<_>>>()?;
        let n: usize = shape.iter().product();
        let mut coords = Vec::with_capacity(n * d);
        let mut multi = vec![0usize; d];
        for _ in 0..n {
            for k in 0..d {
                coords.push(lower[k] + (multi[k] + 1) as f64 * h);
            }
            for k in 0..d {
                multi[k] += 1;
                if multi[k] < shape[k] {
                    break;
                }
                multi[k] = 0;
            }
        }
        let volume = h.powi(d as i32);
        let conductance = h.powi(d as i32 - 2);
        let mut strides = vec![1usize; d];
        for k in 1..d {
            strides[k] = strides[k - 1] * shape[k - 1];
        }
        let mut faces = Vec::new();
        let mut boundary_adjacent = vec![false; n];
        for i in 0..n {
            for k in 0..d {
                let pos = (i / strides[k]) % shape[k];
                if pos + 1 < shape[k] {
                    faces.push(Face {
                        a: i,
                        b: Some(i + strides[k]),
                        conductance,
                    });
                } else {
                    faces.push(Face {
                        a: i,
                        b: None,
                        conductance,
                    });
                    boundary_adjacent[i] = true;
                }
                if pos == 0 {
                    faces.push(Face {
                        a: i,
                        b: None,
                        conductance,
                    });
                    boundary_adjacent[i] = true;
                }
            }
        }
        let domain_measure = lower.iter().zip(&upper).map(|(l, u)| u - l).product();
        Ok(Self::assemble(
            spec,
            Geometry::Cartesian { lower, upper },
            h,
            shape,
            coords,
            d,
            vec![volume; n],
            faces,
            boundary_adjacent,
            domain_measure,
        ))
    }

    fn radial(spec: GridSpec, dim: usize, radius: f64, h: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidGrid(format!(
                "radial grids need dimension ≥ 2, got {dim}"
            )));
        }
        if !(radius > 0.0) {
            return Err(Error::InvalidGrid(format!("radius must be positive, got {radius}")));
        }
        let m = axis_count(0.0, radius, h)?;
        let omega = unit_sphere_area(dim);
        let ball = |r: f64| omega / dim as f64 * r.powi(dim as i32);
        let coords: Vec<f64> = (0..m).map(|i| (i + 1) as f64 * h).collect();
        let outer = |i: usize| (i as f64 + 1.5) * h;
        let volumes: Vec<f64> = (0..m)
            .map(|i| {
                let inner = if i == 0 { 0.0 } else { outer(i - 1) };
                ball(outer(i)) - ball(inner)
            })
            .collect();
        let faces: Vec<Face> = (0..m)
            .map(|i| Face {
                a: i,
                b: (i + 1 < m).then_some(i + 1),
                conductance: omega * outer(i).powi(dim as i32 - 1) / h,
            })
            .collect();
        let mut boundary_adjacent = vec![false; m];
        boundary_adjacent[m - 1] = true;
        Ok(Self::assemble(
            spec,
            Geometry::Radial { dim, radius },
            h,
            vec![m],
            coords,
            1,
            volumes,
            faces,
            boundary_adjacent,
            ball(radius),
        ))
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        spec: GridSpec,
        geometry: Geometry,
        h: f64,
        shape: Vec<usize>,
        coords: Vec<f64>,
        coord_dim: usize,
        volumes: Vec<f64>,
        faces: Vec<Face>,
        boundary_adjacent: Vec<bool>,
        domain_measure: f64,
    ) -> Self {
        let n = volumes.len();
        let mut entries = Vec::with_capacity(4 * faces.len());
        for f in &faces {
            entries.push((f.a, f.a, f.conductance));
            if let Some(b) = f.b {
                entries.push((b, b, f.conductance));
                entries.push((f.a, b, -f.conductance));
                entries.push((b, f.a, -f.conductance));
            }
        }
        let stiffness = SymSparse::from_entries(n, &entries);
        Self {
            laplacian: NegLaplacian {
                stiffness,
                volumes: volumes.clone(),
            },
            spec,
            geometry,
            h,
            shape,
            coords,
            coord_dim,
            volumes,
            faces,
            boundary_adjacent,
            domain_measure,
        }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.volumes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.volumes.is_empty()
    }

    /// Interior node counts per axis (a single entry for interval and radial grids).
    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    /// Space dimension `N` of the modelled domain.
    pub fn dimension(&self) -> usize {
        match &self.geometry {
            Geometry::Radial { dim, .. } => *dim,
            Geometry::Cartesian { lower, .. } => lower.len(),
        }
    }

    pub fn is_radial(&self) -> bool {
        matches!(self.geometry, Geometry::Radial { .. })
    }

    /// Number of coordinates printed per node (1 for radial grids: the radius).
    pub fn coord_dim(&self) -> usize {
        self.coord_dim
    }

    pub fn coords(&self, i: usize) -> &[f64] {
        &self.coords[i * self.coord_dim..(i + 1) * self.coord_dim]
    }

    pub fn volumes(&self) -> &[f64] {
        &self.volumes
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    /// `|Ω|` of the continuum domain.
    pub fn domain_measure(&self) -> f64 {
        self.domain_measure
    }

    /// True when the node shares a face with `∂Ω`.
    pub fn touches_boundary(&self, i: usize) -> bool {
        self.boundary_adjacent[i]
    }

    pub fn laplacian(&self) -> &NegLaplacian {
        &self.laplacian
    }

    /// Distance used by kernels and balls. On radial grids node 0 stands for the origin.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        match &self.geometry {
            Geometry::Radial { .. } => {
                if i == j {
                    0.0
                } else if i == 0 {
                    self.coords[j]
                } else if j == 0 {
                    self.coords[i]
                } else {
                    (self.coords[i] - self.coords[j]).abs()
                }
            }
            Geometry::Cartesian { .. } => self
                .coords(i)
                .iter()
                .zip(self.coords(j))
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt(),
        }
    }

    /// Distance from a node to `∂Ω`.
    pub fn boundary_distance(&self, i: usize) -> f64 {
        match &self.geometry {
            Geometry::Radial { radius, .. } => {
                if i == 0 {
                    *radius
                } else {
                    radius - self.coords[i]
                }
            }
            Geometry::Cartesian { lower, upper } => self
                .coords(i)
                .iter()
                .enumerate()
                .map(|(k, &x)| (x - lower[k]).min(upper[k] - x))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Nodes `j` with `distance(center, j) < radius`, with their distances.
    pub fn nodes_within(&self, center: usize, radius: f64) -> Vec<(usize, f64)> {
        let reach = (radius / self.h).ceil() as isize + 1;
        let mut out = Vec::new();
        match &self.geometry {
            Geometry::Radial { .. } => {
                let m = self.len() as isize;
                let (lo, hi) = if center == 0 {
                    (0, reach.min(m - 1))
                } else {
                    let c = center as isize;
                    ((c - reach).max(0), (c + reach).min(m - 1))
                };
                for j in lo..=hi {
                    let d = self.distance(center, j as usize);
                    if d < radius {
                        out.push((j as usize, d));
                    }
                }
            }
            Geometry::Cartesian { .. } => {
                let d = self.shape.len();
                let mut strides = vec![1usize; d];
                for k in 1..d {
                    strides[k] = strides[k - 1] * self.shape[k - 1];
                }
                let pos: Vec<isize> = (0..d)
                    .map(|k| ((center / strides[k]) % self.shape[k]) as isize)
                    .collect();
                let mut offset = vec![-reach; d];
                'outer: loop {
                    let mut idx = 0usize;
                    let mut inside = true;
                    for k in 0..d {
                        let p = pos[k] + offset[k];
                        if p < 0 || p >= self.shape[k] as isize {
                            inside = false;
                            break;
                        }
                        idx += p as usize * strides[k];
                    }
                    if inside {
                        let dist = self.distance(center, idx);
                        if dist < radius {
                            out.push((idx, dist));
                        }
                    }
                    for k in 0..d {
                        offset[k] += 1;
                        if offset[k] <= reach {
                            continue 'outer;
                        }
                        offset[k] = -reach;
                    }
                    break;
                }
                out.sort_by_key(|e| e.0);
            }
        }
        out
    }

    /// Node whose cell contains `point`, with the distance from the point to that node.
    /// On radial grids the point is reduced to its norm and the origin snaps at distance 0.
    pub fn locate(&self, point: &[f64]) -> Result<(usize, f64)> {
        match &self.geometry {
            Geometry::Radial { radius, .. } => {
                let r = point.iter().map(|x| x * x).sum::<f64>().sqrt();
                if r >= radius - 0.5 * self.h {
                    return Err(Error::InvalidMeasure(format!(
                        "point at radius {r} lies outside the interior cells"
                    )));
                }
                if r < 1.5 * self.h {
                    Ok((0, r))
                } else {
                    let i = (r / self.h).round() as usize - 1;
                    Ok((i, (r - self.coords[i]).abs()))
                }
            }
            Geometry::Cartesian { lower, .. } => {
                if point.len() != self.shape.len() {
                    return Err(Error::InvalidMeasure(format!(
                        "point has {} coordinates, grid has {}",
                        point.len(),
                        self.shape.len()
                    )));
                }
                let mut idx = 0usize;
                let mut stride = 1usize;
                for (k, &x) in point.iter().enumerate() {
                    let p = ((x - lower[k]) / self.h).round() as isize - 1;
                    if p < 0 || p >= self.shape[k] as isize {
                        return Err(Error::InvalidMeasure(format!(
                            "point {point:?} lies outside the interior cells"
                        )));
                    }
                    idx += p as usize * stride;
                    stride *= self.shape[k];
                }
                let snap = self
                    .coords(idx)
                    .iter()
                    .zip(point)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                Ok((idx, snap))
            }
        }
    }

    /// True when both grids were built from the same spec.
    pub fn same_as(&self, other: &Grid) -> bool {
        std::ptr::eq(self, other) || self.spec == other.spec
    }
}

/// `−Δ_h = V⁻¹K` with `K` the symmetric stiffness and `V` the cell volumes.
#[derive(Debug)]
pub struct NegLaplacian {
    stiffness: SymSparse,
    volumes: Vec<f64>,
}

impl NegLaplacian {
    pub fn stiffness(&self) -> &SymSparse {
        &self.stiffness
    }

    /// `K u`: the net flux of `u` out of every cell.
    pub fn apply_stiffness(&self, u: &[f64]) -> Vec<f64> {
        self.stiffness.matvec(u)
    }

    /// `(−Δ_h u)_i`.
    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        self.stiffness
            .matvec(u)
            .into_iter()
            .zip(&self.volumes)
            .map(|(k, v)| k / v)
            .collect()
    }

    /// Solves `(K + diag(shift)) x = rhs`.
    pub fn solve_shifted(&self, shift: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
        self.stiffness.solve_shifted(shift, rhs)
    }
}

/// Returns the grid's negative Laplacian.
pub fn negative_laplacian(grid: &Grid) -> &NegLaplacian {
    grid.laplacian()
}

/// Real values on the interior nodes of a grid.
#[derive(Clone, Debug)]
pub struct GridFunction {
    grid: Arc<Grid>,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Arc<Grid>, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), grid.len(), "one value per interior node");
        Self { grid, values }
    }

    pub fn zeros(grid: Arc<Grid>) -> Self {
        let n = grid.len();
        Self::new(grid, vec![0.0; n])
    }

    pub fn constant(grid: Arc<Grid>, c: f64) -> Self {
        let n = grid.len();
        Self::new(grid, vec![c; n])
    }

    /// Samples `f` at the node coordinates.
    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(&[f64]) -> f64) -> Self {
        let values = (0..grid.len()).map(|i| f(grid.coords(i))).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::new(self.grid.clone(), self.values.iter().map(|&v| f(v)).collect())
    }

    /// `∫_Ω |f|`.
    pub fn l1_norm(&self) -> f64 {
        l1(&self.values, self.grid.volumes())
    }

    /// `∫_Ω |f − g|`.
    pub fn l1_distance(&self, other: &GridFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .zip(self.grid.volumes())
            .map(|((a, b), v)| (a - b).abs() * v)
            .sum()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// `Σ_i f_i · vol_i`.
pub fn integrate(f: &GridFunction) -> f64 {
    f.values
        .iter()
        .zip(f.grid.volumes())
        .map(|(a, v)| a * v)
        .sum()
}

pub(crate) fn l1(values: &[f64], volumes: &[f64]) -> f64 {
    values.iter().zip(volumes).map(|(a, v)| a.abs() * v).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn interval_quarter_spacing() {
        let g = build_grid(&GridSpec::interval(0.0, 1.0, 0.25)).unwrap();
        assert_eq!(g.len(), 3);
        let xs: Vec<f64> = (0..3).map(|i| g.coords(i)[0]).collect();
        assert_eq!(xs, vec![0.25, 0.5, 0.75]);
        assert!(g.volumes().iter().all(|&v| v == 0.25));
    }

    #[test]
    fn radial_first_cell_contains_origin() {
        let g = build_grid(&GridSpec::radial(2, 1.0, 0.5)).unwrap();
        assert_eq!(g.len(), 1);
        // first cell is the disk of radius 3h/2
        assert!(close(g.volumes()[0], PI * 0.75 * 0.75, 1e-14));
    }

    #[test]
    fn rect_single_node() {
        let g = build_grid(&GridSpec::unit_square(0.5)).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.volumes()[0], 0.25);
    }

    #[test]
    fn rejects_bad_spacing() {
        assert!(build_grid(&GridSpec::interval(0.0, 1.0, 0.0)).is_err());
        assert!(build_grid(&GridSpec::interval(0.0, 1.0, -0.1)).is_err());
        assert!(build_grid(&GridSpec::interval(0.0, 1.0, 0.3)).is_err());
        assert!(build_grid(&GridSpec::radial(1, 1.0, 0.25)).is_err());
        assert!(build_grid(&GridSpec::radial(2, 0.0, 0.25)).is_err());
    }

    #[test]
    fn second_difference_with_boundary_pull() {
        let g = build_grid(&GridSpec::interval(0.0, 1.0, 0.25)).unwrap();
        let lu = g.laplacian().apply(&[1.0, 1.0, 1.0]);
        assert!(close(lu[0], 16.0, 1e-14) && lu[1].abs() < 1e-12 && close(lu[2], 16.0, 1e-14));
        assert_eq!(g.laplacian().apply(&[0.0; 3]), vec![0.0; 3]);
    }

    #[test]
    fn five_point_single_node() {
        let g = build_grid(&GridSpec::unit_square(0.5)).unwrap();
        assert!(close(g.laplacian().apply(&[1.0])[0], 16.0, 1e-14));
    }

    #[test]
    fn quadratic_is_exact() {
        let g = build_grid(&GridSpec::interval(0.0, 1.0, 1.0 / 64.0)).unwrap();
        let u = GridFunction::from_fn(g.clone(), |x| x[0] * (1.0 - x[0]));
        for v in g.laplacian().apply(u.values()) {
            assert!(close(v, 2.0, 1e-9));
        }
    }

    #[test]
    fn volumes_sum_to_domain() {
        for spec in [
            GridSpec::interval(0.0, 1.0, 1.0 / 128.0),
            GridSpec::radial(2, 1.0, 1.0 / 128.0),
            GridSpec::radial(3, 1.0, 1.0 / 128.0),
            GridSpec::unit_square(1.0 / 32.0),
        ] {
            let g = build_grid(&spec).unwrap();
            let total = integrate(&GridFunction::constant(g.clone(), 1.0));
            let gap = (total - g.domain_measure()).abs() / g.domain_measure();
            assert!(gap < 10.0 * g.spacing(), "{spec:?}: {gap}");
        }
        let g = build_grid(&GridSpec::radial(3, 1.0, 1.0 / 256.0)).unwrap();
        let ball = integrate(&GridFunction::constant(g.clone(), 1.0));
        assert!((ball - 4.0 * PI / 3.0).abs() < 3.0 * 4.0 * PI * g.spacing());
        assert_eq!(integrate(&GridFunction::zeros(g)), 0.0);
    }

    #[test]
    fn locate_and_distances() {
        let g = build_grid(&GridSpec::radial(2, 1.0, 0.125)).unwrap();
        assert_eq!(g.locate(&[0.0]).unwrap(), (0, 0.0));
        assert_eq!(g.locate(&[0.5]).unwrap().0, 3);
        assert!(g.locate(&[0.99]).is_err());
        assert_eq!(g.distance(0, 3), 0.5);
        let s = build_grid(&GridSpec::unit_square(0.25)).unwrap();
        let (i, d) = s.locate(&[0.5, 0.75]).unwrap();
        assert_eq!(s.coords(i), &[0.5, 0.75]);
        assert_eq!(d, 0.0);
        let ball = s.nodes_within(i, 0.26);
        assert_eq!(ball.len(), 4);
    }

    #[test]
    fn sphere_areas() {
        assert!(close(unit_sphere_area(3), 4.0 * PI, 1e-14));
        assert!(close(unit_sphere_area(4), 2.0 * PI * PI, 1e-14));
    }
}
