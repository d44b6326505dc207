//! Real symmetric tridiagonal eigensolver (implicit QL with Wilkinson shifts).
//!
//! Every Hamiltonian in this crate is tridiagonal either in the `S_Z`
//! eigenbasis or inside a parity sector of the `S_X` eigenbasis. The solver
//! records its Givens rotations instead of accumulating a dense eigenvector
//! matrix, so applying `V^T` or `V` to a vector costs O(n^2) rather than
//! O(n^3).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 64;

#[derive(Clone, Copy, Debug)]
struct Givens {
    index: u32,
    c: f64,
    s: f64,
}

/// Eigen-decomposition `T = V diag(λ) V^T` of a symmetric tridiagonal matrix,
/// with `V` stored implicitly as an ordered product of plane rotations.
#[derive(Clone, Debug, Default)]
pub struct TridiagonalEigen {
    eigenvalues: Vec<f64>,
    off: Vec<f64>,
    rotations: Vec<Givens>,
}

impl TridiagonalEigen {
    pub fn new(diagonal: &[f64], off_diagonal: &[f64]) -> Result<Self> {
        let mut eig = Self::default();
        eig.compute(diagonal, off_diagonal)?;
        Ok(eig)
    }

    /// Recomputes the decomposition in place, reusing internal buffers.
    ///
    /// `off_diagonal[i]` couples rows `i` and `i + 1`; its length must be
    /// `diagonal.len() - 1` (or zero for an empty matrix).
    pub fn compute(&mut self, diagonal: &[f64], off_diagonal: &[f64]) -> Result<()> {
        let n = diagonal.len();
        if n > 0 && off_diagonal.len() + 1 != n {
            return Err(Error::DimensionMismatch {
                expected: n - 1,
                found: off_diagonal.len(),
            });
        }
        self.eigenvalues.clear();
        self.eigenvalues.extend_from_slice(diagonal);
        self.off.clear();
        self.off.extend_from_slice(off_diagonal);
        self.off.push(0.0);
        self.rotations.clear();

        let d = &mut self.eigenvalues;
        let e = &mut self.off;
        for l in 0..n {
            let mut sweeps = 0;
            loop {
                let mut m = l;
                while m + 1 < n {
                    let dd = d[m].abs() + d[m + 1].abs();
                    if e[m].abs() <= f64::EPSILON * dd {
                        break;
                    }
                    m += 1;
                }
                if m == l {
                    break;
                }
                sweeps += 1;
                if sweeps > MAX_SWEEPS {
                    return Err(Error::EigenSolver);
                }
                let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                let mut r = (g * g + 1.0).sqrt();
                g = d[m] - d[l] + e[l] / (g + r.copysign(g));
                let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
                let mut i = m;
                let mut deflated = false;
                while i > l {
                    i -= 1;
                    let f = s * e[i];
                    let b = c * e[i];
                    r = (f * f + g * g).sqrt();
                    e[i + 1] = r;
                    if r == 0.0 {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        deflated = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    self.rotations.push(Givens {
                        index: i as u32,
                        c,
                        s,
                    });
                }
                if deflated {
                    continue;
                }
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Eigenvalues in the solver's internal (unsorted) order; entry `j`
    /// belongs to column `j` of `V`.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `v <- V^T v`
    pub fn to_eigenbasis(&self, v: &mut [Complex64]) {
        for g in &self.rotations {
            let i = g.index as usize;
            let (a, b) = (v[i], v[i + 1]);
            v[i] = a * g.c - b * g.s;
            v[i + 1] = a * g.s + b * g.c;
        }
    }

    /// `v <- V v`
    pub fn from_eigenbasis(&self, v: &mut [Complex64]) {
        for g in self.rotations.iter().rev() {
            let i = g.index as usize;
            let (a, b) = (v[i], v[i + 1]);
            v[i] = a * g.c + b * g.s;
            v[i + 1] = b * g.c - a * g.s;
        }
    }

    /// `v <- exp(-i T dt) v`
    pub fn apply_exp(&self, v: &mut [Complex64], dt: f64) {
        self.to_eigenbasis(v);
        for (x, &lambda) in v.iter_mut().zip(&self.eigenvalues) {
            let (sin, cos) = (lambda * dt).sin_cos();
            *x *= Complex64::new(cos, -sin);
        }
        self.from_eigenbasis(v);
    }

    /// Dense eigenvector matrix (columns), in the same order as
    /// [`eigenvalues`](Self::eigenvalues).
    pub fn eigenvectors(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut v = DMatrix::<f64>::identity(n, n);
        for g in self.rotations.iter() {
            let i = g.index as usize;
            for k in 0..n {
                let (a, b) = (v[(k, i)], v[(k, i + 1)]);
                v[(k, i)] = a * g.c - b * g.s;
                v[(k, i + 1)] = a * g.s + b * g.c;
            }
        }
        v
    }

    /// Eigenpairs sorted by ascending eigenvalue.
    pub fn sorted_pairs(&self) -> Vec<(f64, DVector<f64>)> {
        let vectors = self.eigenvectors();
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&a, &b| self.eigenvalues[a].total_cmp(&self.eigenvalues[b]));
        order
            .into_iter()
            .map(|j| (self.eigenvalues[j], vectors.column(j).into_owned()))
            .collect()
    }

    /// Sorted eigenvalues only.
    pub fn sorted_eigenvalues(&self) -> Vec<f64> {
        let mut values = self.eigenvalues.clone();
        values.sort_by(f64::total_cmp);
        values
    }
}
