//! Basis, states, and collective operators of the maximum-spin (Dicke)
//! subspace of `N` qubits.
//!
//! Index `k` of a basis of dimension `N + 1` carries the magnetic quantum
//! number `m = N/2 - k`, so index 0 is the fully polarized state along the
//! basis axis. The `X` eigenbasis is obtained from the `Z` eigenbasis with the
//! rotation `R = exp(-i (π/2) S_Y)`, which maps `S_Z` eigenvectors onto `S_X`
//! eigenvectors with the same `m` and is a real orthogonal matrix in this
//! gauge. Relative phases between `X`-basis vectors depend on that choice;
//! measured probabilities do not.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tridiag::TridiagonalEigen;

const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    Z,
    X,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::Z => f.write_str("Z"),
            Axis::X => f.write_str("X"),
        }
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Z" | "z" => Ok(Axis::Z),
            "X" | "x" => Ok(Axis::X),
            other => Err(Error::UnknownAxis(other.to_string())),
        }
    }
}

/// The `(N+1)`-dimensional eigenbasis `|N/2, m⟩_W` of a collective spin
/// component `W ∈ {Z, X}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DickeBasis {
    n_qubits: usize,
    axis: Axis,
}

impl DickeBasis {
    pub fn new(n_qubits: usize, axis: Axis) -> Result<Self> {
        validate_qubits(n_qubits)?;
        Ok(Self { n_qubits, axis })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn dim(&self) -> usize {
        self.n_qubits + 1
    }

    /// Total spin `j = N/2`.
    pub fn spin(&self) -> f64 {
        self.n_qubits as f64 / 2.0
    }

    /// Magnetic quantum number of basis index `k`.
    pub fn m(&self, k: usize) -> f64 {
        self.spin() - k as f64
    }

    pub fn m_values(&self) -> Vec<f64> {
        (0..self.dim()).map(|k| self.m(k)).collect()
    }

    pub fn with_axis(self, axis: Axis) -> Self {
        Self { axis, ..self }
    }
}

pub(crate) fn validate_qubits(n_qubits: usize) -> Result<()> {
    if n_qubits < 2 || !n_qubits.is_multiple_of(2) {
        return Err(Error::InvalidQubitCount(n_qubits));
    }
    Ok(())
}

/// Ladder coefficients `c_k = ⟨m_k|S_+|m_k - 1⟩ = sqrt(j(j+1) - m_k(m_k - 1))`
/// for `k = 0..N`, coupling index `k` and `k + 1`.
pub(crate) fn ladder_coefficients(n_qubits: usize) -> Vec<f64> {
    let j = n_qubits as f64 / 2.0;
    (0..n_qubits)
        .map(|k| {
            let m = j - k as f64;
            (j * (j + 1.0) - m * (m - 1.0)).sqrt()
        })
        .collect()
}

/// A vector of complex amplitudes over a [`DickeBasis`].
#[derive(Clone, Debug, PartialEq)]
pub struct DickeState {
    basis: DickeBasis,
    amplitudes: DVector<Complex64>,
}

impl DickeState {
    pub fn new(basis: DickeBasis, amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                found: amplitudes.len(),
            });
        }
        Ok(Self { basis, amplitudes })
    }

    pub fn basis_state(basis: DickeBasis, index: usize) -> Result<Self> {
        if index >= basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                found: index,
            });
        }
        let mut amplitudes = DVector::zeros(basis.dim());
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { basis, amplitudes })
    }

    /// Strong-transverse-field ground state `|N/2, N/2⟩_X`, stored in the X basis.
    pub fn strong_field_ground(n_qubits: usize) -> Result<Self> {
        Self::basis_state(DickeBasis::new(n_qubits, Axis::X)?, 0)
    }

    /// GHZ state `(|N/2,N/2⟩_Z ± |N/2,-N/2⟩_Z)/√2` in the Z basis; `even`
    /// selects the `+` (parity +1) combination.
    pub fn ghz(n_qubits: usize, even: bool) -> Result<Self> {
        let basis = DickeBasis::new(n_qubits, Axis::Z)?;
        let mut amplitudes = DVector::zeros(basis.dim());
        let a = std::f64::consts::FRAC_1_SQRT_2;
        amplitudes[0] = Complex64::new(a, 0.0);
        amplitudes[n_qubits] = Complex64::new(if even { a } else { -a }, 0.0);
        Ok(Self { basis, amplitudes })
    }

    pub fn basis(&self) -> DickeBasis {
        self.basis
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> DVector<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn normalized(&self) -> Self {
        let norm = self.norm();
        Self {
            basis: self.basis,
            amplitudes: self.amplitudes.unscale(norm),
        }
    }

    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// The same state expressed in the eigenbasis of `axis`.
    pub fn to_axis(&self, axis: Axis) -> Self {
        if axis == self.basis.axis {
            return self.clone();
        }
        let r = rotation_matrix(self.basis.n_qubits).map(|x| Complex64::new(x, 0.0));
        let amplitudes = match axis {
            Axis::X => r.transpose() * &self.amplitudes,
            Axis::Z => r * &self.amplitudes,
        };
        Self {
            basis: self.basis.with_axis(axis),
            amplitudes,
        }
    }

    /// `⟨self|other⟩`, rotating `other` into this state's basis if needed.
    pub fn inner(&self, other: &DickeState) -> Result<Complex64> {
        if self.basis.n_qubits != other.basis.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.basis.dim(),
                found: other.basis.dim(),
            });
        }
        let other = other.to_axis(self.basis.axis);
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `|⟨self|other⟩|^2`.
    pub fn fidelity(&self, other: &DickeState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    pub fn expectation(&self, op: &CollectiveOperator) -> Result<Complex64> {
        let op = op.to_axis(self.basis.axis);
        if op.basis.n_qubits != self.basis.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.basis.dim(),
                found: op.basis.dim(),
            });
        }
        Ok(self.amplitudes.dotc(&(&op.matrix * &self.amplitudes)))
    }

    /// Variance `⟨A²⟩ - ⟨A⟩²` of a Hermitian operator.
    pub fn variance(&self, op: &CollectiveOperator) -> Result<f64> {
        let op = op.to_axis(self.basis.axis);
        let applied = &op.matrix * &self.amplitudes;
        let mean = self.amplitudes.dotc(&applied).re;
        Ok((applied.norm_squared() - mean * mean).max(0.0))
    }

    /// `⟨Π⟩`, the expectation of the spin-flip parity.
    pub fn parity_expectation(&self) -> f64 {
        let x = self.to_axis(Axis::X);
        x.amplitudes
            .iter()
            .enumerate()
            .map(|(k, a)| {
                if k % 2 == 0 {
                    a.norm_sqr()
                } else {
                    -a.norm_sqr()
                }
            })
            .sum()
    }
}

/// A dense operator on the Dicke subspace.
#[derive(Clone, Debug, PartialEq)]
pub struct CollectiveOperator {
    basis: DickeBasis,
    matrix: DMatrix<Complex64>,
    hermitian: bool,
}

impl CollectiveOperator {
    pub fn new(basis: DickeBasis, matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != basis.dim() || matrix.ncols() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                found: matrix.nrows(),
            });
        }
        let hermitian = (&matrix - matrix.adjoint()).camax() <= HERMITIAN_TOL;
        Ok(Self {
            basis,
            matrix,
            hermitian,
        })
    }

    pub(crate) fn from_real(basis: DickeBasis, matrix: DMatrix<f64>) -> Self {
        let hermitian = (&matrix - matrix.transpose()).camax() <= HERMITIAN_TOL;
        Self {
            basis,
            matrix: matrix.map(|x| Complex64::new(x, 0.0)),
            hermitian,
        }
    }

    pub fn basis(&self) -> DickeBasis {
        self.basis
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn to_axis(&self, axis: Axis) -> Self {
        if axis == self.basis.axis {
            return self.clone();
        }
        let r = rotation_matrix(self.basis.n_qubits).map(|x| Complex64::new(x, 0.0));
        let matrix = match axis {
            Axis::X => r.transpose() * &self.matrix * r,
            Axis::Z => &r * &self.matrix * r.transpose(),
        };
        Self {
            basis: self.basis.with_axis(axis),
            matrix,
            hermitian: self.hermitian,
        }
    }

    pub fn apply(&self, state: &DickeState) -> Result<DickeState> {
        let state = state.to_axis(self.basis.axis);
        DickeState::new(self.basis, &self.matrix * state.amplitudes)
    }
}

/// `S_X`, `S_Y`, `S_Z` in the Z eigenbasis.
#[derive(Clone, Debug)]
pub struct CollectiveSpin {
    pub sx: CollectiveOperator,
    pub sy: CollectiveOperator,
    pub sz: CollectiveOperator,
}

pub fn build_collective_operators(n_qubits: usize) -> Result<CollectiveSpin> {
    let basis = DickeBasis::new(n_qubits, Axis::Z)?;
    let dim = basis.dim();
    let c = ladder_coefficients(n_qubits);
    let mut sx = DMatrix::<Complex64>::zeros(dim, dim);
    let mut sy = DMatrix::<Complex64>::zeros(dim, dim);
    let mut sz = DMatrix::<Complex64>::zeros(dim, dim);
    for k in 0..dim {
        sz[(k, k)] = Complex64::new(basis.m(k), 0.0);
    }
    // S_+ raises m, i.e. maps index k+1 to index k.
    for (k, &ck) in c.iter().enumerate() {
        sx[(k, k + 1)] = Complex64::new(ck / 2.0, 0.0);
        sx[(k + 1, k)] = Complex64::new(ck / 2.0, 0.0);
        sy[(k, k + 1)] = Complex64::new(0.0, -ck / 2.0);
        sy[(k + 1, k)] = Complex64::new(0.0, ck / 2.0);
    }
    Ok(CollectiveSpin {
        sx: CollectiveOperator::new(basis, sx)?,
        sy: CollectiveOperator::new(basis, sy)?,
        sz: CollectiveOperator::new(basis, sz)?,
    })
}

/// The rotation `R = exp(-i (π/2) S_Y)` in the Z basis. Column `k` holds the
/// Z-basis amplitudes of `|N/2, N/2 - k⟩_X`.
///
/// `S_Y = D S_X D†` with `D = diag(i^k)`, so `R = D exp(-i (π/2) S_X) D†` and
/// the exponential reduces to one tridiagonal eigen-decomposition.
pub fn rotation_matrix(n_qubits: usize) -> DMatrix<f64> {
    let dim = n_qubits + 1;
    let c = ladder_coefficients(n_qubits);
    let off: Vec<f64> = c.iter().map(|x| x / 2.0).collect();
    let eig = TridiagonalEigen::new(&vec![0.0; dim], &off)
        .expect("S_X is a well-conditioned tridiagonal matrix");
    let v = eig.eigenvectors();
    let theta = std::f64::consts::FRAC_PI_2;
    let phase = |k: usize| -> Complex64 {
        match k % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    };
    let lambda = eig.eigenvalues();
    DMatrix::from_fn(dim, dim, |a, b| {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &l) in lambda.iter().enumerate() {
            acc += Complex64::from_polar(1.0, -theta * l) * v[(a, j)] * v[(b, j)];
        }
        (phase(a) * acc * phase(b).conj()).re
    })
}

/// The spin-flip parity `Π = ∏ X_i` on the Dicke subspace.
pub fn parity_operator(basis: DickeBasis) -> CollectiveOperator {
    let dim = basis.dim();
    let x_form = DMatrix::from_fn(dim, dim, |a, b| {
        if a == b {
            if a % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        } else {
            0.0
        }
    });
    let x_op = CollectiveOperator::from_real(basis.with_axis(Axis::X), x_form);
    x_op.to_axis(basis.axis)
}

/// Objects that can be re-expressed in another Dicke eigenbasis.
pub trait BasisRotation: Sized {
    fn axis(&self) -> Axis;
    fn rotated(&self, to: Axis) -> Self;
}

impl BasisRotation for DickeState {
    fn axis(&self) -> Axis {
        self.basis.axis
    }
    fn rotated(&self, to: Axis) -> Self {
        self.to_axis(to)
    }
}

impl BasisRotation for CollectiveOperator {
    fn axis(&self) -> Axis {
        self.basis.axis
    }
    fn rotated(&self, to: Axis) -> Self {
        self.to_axis(to)
    }
}

/// Change of basis from `from` to `to`; `from` must match the object's tag.
pub fn rotate_basis<T: BasisRotation>(item: &T, from: Axis, to: Axis) -> Result<T> {
    if item.axis() != from {
        return Err(Error::BasisMismatch {
            expected: from,
            found: item.axis(),
        });
    }
    Ok(item.rotated(to))
}
