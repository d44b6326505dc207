//! Brute-force reference on the full `2^N` qubit space.
#![allow(dead_code)]

use ghz_adiabatic::{Axis, DickeState};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub struct QubitSpace {
    pub n: usize,
    sz: Vec<f64>,
    sx: DMatrix<f64>,
}

impl QubitSpace {
    pub fn new(n: usize) -> Self {
        let dim = 1 << n;
        // bit set means spin down along z
        let sz = (0..dim)
            .map(|b: usize| 0.5 * (n as f64 - 2.0 * b.count_ones() as f64))
            .collect();
        let mut sx = DMatrix::zeros(dim, dim);
        for b in 0..dim {
            for q in 0..n {
                sx[(b ^ (1 << q), b)] += 0.5;
            }
        }
        Self { n, sz, sx }
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn hamiltonian(&self, j: f64, hx: f64, hz: f64) -> DMatrix<f64> {
        let mut h = &self.sx * (-2.0 * hx);
        for (b, &m) in self.sz.iter().enumerate() {
            h[(b, b)] += -2.0 * j * m * m - 2.0 * hz * m;
        }
        h
    }

    /// Every qubit in `|+x⟩`.
    pub fn all_plus_x(&self) -> DVector<Complex64> {
        DVector::from_element(
            self.dim(),
            Complex64::new((self.dim() as f64).sqrt().recip(), 0.0),
        )
    }

    /// Symmetric embedding of a Dicke state.
    pub fn embed(&self, state: &DickeState) -> DVector<Complex64> {
        let z = state.to_axis(Axis::Z);
        let mut out = DVector::zeros(self.dim());
        for b in 0..self.dim() {
            let k = b.count_ones() as usize;
            out[b] = z.amplitudes()[k] / binomial(self.n, k).sqrt();
        }
        out
    }

    /// Midpoint-rule product of exact short-time exponentials.
    pub fn evolve<F: Fn(f64) -> f64>(
        &self,
        psi: &DVector<Complex64>,
        j: f64,
        hz: f64,
        field: F,
        duration: f64,
        steps: usize,
    ) -> DVector<Complex64> {
        let dt = duration / steps as f64;
        let mut psi = psi.clone();
        for s in 0..steps {
            let h = self.hamiltonian(j, field((s as f64 + 0.5) * dt), hz);
            psi = expm_apply(h, dt, &psi);
        }
        psi
    }
}

fn expm_apply(h: DMatrix<f64>, dt: f64, psi: &DVector<Complex64>) -> DVector<Complex64> {
    let eig = SymmetricEigen::new(h);
    let v = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
    let mut c = v.transpose() * psi;
    for (ck, &lam) in c.iter_mut().zip(eig.eigenvalues.iter()) {
        *ck *= Complex64::from_polar(1.0, -lam * dt);
    }
    v * c
}

pub fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn fidelity(a: &DVector<Complex64>, b: &DVector<Complex64>) -> f64 {
    a.dotc(b).norm_sqr()
}
