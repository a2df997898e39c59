//! Sparse symmetric storage and SPD solves for stiffness-plus-diagonal systems.
//!
//! Every system solved in this crate has the form `(K + diag(d)) x = rhs` with `K` the
//! symmetric stiffness of a grid and `d ≥ 0`. Tridiagonal stiffness (interval and radial
//! grids) is solved directly; everything else goes through a sparse Cholesky whose symbolic
//! factorization is computed once per pattern.

use std::sync::OnceLock;

use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::{Llt, SymbolicLlt};
use faer::sparse::{SparseColMat, SymbolicSparseColMat};
use faer::Side;

use crate::error::{Error, Result};

/// Symmetric sparse matrix in compressed (row = column) form, both triangles stored.
#[derive(Debug)]
pub struct SymSparse {
    n: usize,
    ptr: Vec<usize>,
    idx: Vec<usize>,
    val: Vec<f64>,
    diag: Vec<usize>,
    tridiagonal: bool,
    symbolic: OnceLock<std::result::Result<SymbolicLlt<usize>, String>>,
}

impl Clone for SymSparse {
    fn clone(&self) -> Self {
        Self {
            n: self.n,
            ptr: self.ptr.clone(),
            idx: self.idx.clone(),
            val: self.val.clone(),
            diag: self.diag.clone(),
            tridiagonal: self.tridiagonal,
            symbolic: OnceLock::new(),
        }
    }
}

impl SymSparse {
    /// Assembles from `(i, j, v)` entries; duplicates are summed and the pattern is
    /// symmetrized. Every diagonal entry is stored even when zero.
    pub fn from_entries(n: usize, entries: &[(usize, usize, f64)]) -> Self {
        let mut rows: Vec<Vec<(usize, f64)>> = (0..n).map(|i| vec![(i, 0.0)]).collect();
        for &(i, j, v) in entries {
            rows[i].push((j, v));
        }
        let mut ptr = Vec::with_capacity(n + 1);
        let mut idx = Vec::new();
        let mut val = Vec::new();
        let mut diag = Vec::with_capacity(n);
        ptr.push(0);
        let mut tridiagonal = true;
        for (i, row) in rows.iter_mut().enumerate() {
            row.sort_by_key(|e| e.0);
            let mut last: Option<usize> = None;
            for &(j, v) in row.iter() {
                if last == Some(j) {
                    *val.last_mut().unwrap() += v;
                } else {
                    if j == i {
                        diag.push(idx.len());
                    }
                    if j.abs_diff(i) > 1 {
                        tridiagonal = false;
                    }
                    idx.push(j);
                    val.push(v);
                    last = Some(j);
                }
            }
            ptr.push(idx.len());
        }
        Self {
            n,
            ptr,
            idx,
            val,
            diag,
            tridiagonal,
            symbolic: OnceLock::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_tridiagonal(&self) -> bool {
        self.tridiagonal
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.diag.iter().map(|&p| self.val[p]).collect()
    }

    /// Entry `(i, j)`, zero outside the pattern.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let row = &self.idx[self.ptr[i]..self.ptr[i + 1]];
        match row.binary_search(&j) {
            Ok(k) => self.val[self.ptr[i] + k],
            Err(_) => 0.0,
        }
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.ptr[i]..self.ptr[i + 1];
        self.idx[r.clone()].iter().copied().zip(self.val[r].iter().copied())
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).map(|(j, v)| v * x[j]).sum())
            .collect()
    }

    /// Solves `(self + diag(shift)) x = rhs`.
    pub fn solve_shifted(&self, shift: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
        assert_eq!(shift.len(), self.n);
        assert_eq!(rhs.len(), self.n);
        if self.tridiagonal {
            self.solve_tridiagonal(shift, rhs)
        } else {
            self.solve_cholesky(shift, rhs)
        }
    }

    fn solve_tridiagonal(&self, shift: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        let mut lower = vec![0.0; n];
        let mut upper = vec![0.0; n];
        let mut main = vec![0.0; n];
        for i in 0..n {
            main[i] = self.val[self.diag[i]] + shift[i];
            if i > 0 {
                lower[i] = self.get(i, i - 1);
            }
            if i + 1 < n {
                upper[i] = self.get(i, i + 1);
            }
        }
        // Thomas sweep; the matrix is SPD so no pivoting is needed.
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        for i in 0..n {
            let denom = main[i] - if i > 0 { lower[i] * c[i - 1] } else { 0.0 };
            if !(denom > 0.0) || !denom.is_finite() {
                return Err(Error::SolverBreakdown(format!(
                    "non-positive pivot {denom:e} at row {i}"
                )));
            }
            c[i] = upper[i] / denom;
            d[i] = (rhs[i] - if i > 0 { lower[i] * d[i - 1] } else { 0.0 }) / denom;
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            x[i] = d[i] - if i + 1 < n { c[i] * x[i + 1] } else { 0.0 };
        }
        Ok(x)
    }

    fn pattern(&self) -> SymbolicSparseColMat<usize> {
        // Symmetric storage: CSR of a symmetric matrix is also its CSC.
        SymbolicSparseColMat::new_checked(
            self.n,
            self.n,
            self.ptr.clone(),
            None,
            self.idx.clone(),
        )
    }

    fn solve_cholesky(&self, shift: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
        let symbolic = self
            .symbolic
            .get_or_init(|| {
                SymbolicLlt::try_new(self.pattern().as_ref(), Side::Lower)
                    .map_err(|e| format!("{e:?}"))
            })
            .as_ref()
            .map_err(|e| Error::SolverBreakdown(e.clone()))?;
        let mut values = self.val.clone();
        for (i, &p) in self.diag.iter().enumerate() {
            values[p] += shift[i];
        }
        let matrix = SparseColMat::new(self.pattern(), values);
        let llt = Llt::try_new_with_symbolic(symbolic.clone(), matrix.as_ref(), Side::Lower)
            .map_err(|e| Error::SolverBreakdown(format!("{e:?}")))?;
        let b = faer::Col::<f64>::from_fn(self.n, |i| rhs[i]);
        let x = llt.solve(&b);
        let out: Vec<f64> = (0..self.n).map(|i| x[i]).collect();
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::SolverBreakdown("non-finite solution".into()));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_1d(n: usize) -> SymSparse {
        let mut e = Vec::new();
        for i in 0..n {
            e.push((i, i, 2.0));
            if i + 1 < n {
                e.push((i, i + 1, -1.0));
                e.push((i + 1, i, -1.0));
            }
        }
        SymSparse::from_entries(n, &e)
    }

    #[test]
    fn thomas_matches_cholesky() {
        let k = laplacian_1d(7);
        assert!(k.is_tridiagonal());
        let shift = vec![0.3; 7];
        let rhs: Vec<f64> = (0..7).map(|i| (i as f64).sin()).collect();
        let x1 = k.solve_tridiagonal(&shift, &rhs).unwrap();
        let x2 = k.solve_cholesky(&shift, &rhs).unwrap();
        for (a, b) in x1.iter().zip(&x2) {
            assert!((a - b).abs() < 1e-12);
        }
        let mut ax = k.matvec(&x1);
        for i in 0..7 {
            ax[i] += shift[i] * x1[i];
            assert!((ax[i] - rhs[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn duplicates_are_summed() {
        let k = SymSparse::from_entries(2, &[(0, 0, 1.0), (0, 0, 2.0), (1, 1, 1.0)]);
        assert_eq!(k.get(0, 0), 3.0);
        assert_eq!(k.get(0, 1), 0.0);
    }

    #[test]
    fn indefinite_is_reported() {
        let k = SymSparse::from_entries(2, &[(0, 0, -1.0), (1, 1, 1.0)]);
        assert!(k.solve_shifted(&[0.0, 0.0], &[1.0, 1.0]).is_err());
    }
}
