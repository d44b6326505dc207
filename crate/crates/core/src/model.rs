//! The infinite-range transverse-field Ising Hamiltonian on the Dicke
//! subspace, its parity-resolved spectrum, overlaps and gaps.
//!
//! With `Σ Z_i = 2 S_Z`, `Σ_{i,j} Z_i Z_j = 4 S_Z²` and `Σ X_i = 2 S_X`,
//!
//! ```text
//! H = -2J S_Z² - 2h_x S_X - 2h_z S_Z
//! ```
//!
//! keeping the `i = j` terms of the double sum. The matrix is tridiagonal in
//! the Z basis. For `h_z = 0` it commutes with the parity and splits into two
//! tridiagonal blocks in the X basis: even indices (`Π = +1`, states `ψ_n`)
//! and odd indices (`Π = -1`, states `φ_n`).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::dicke::{
    ladder_coefficients, validate_qubits, Axis, CollectiveOperator, DickeBasis, DickeState,
};
use crate::error::{invalid, Error, Result};
use crate::numeric::{golden_section_min, log_log_fit, LinearFit};
use crate::tridiag::TridiagonalEigen;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub n_qubits: usize,
    /// Ising coupling `J > 0`.
    pub coupling: f64,
    pub transverse_field: f64,
    pub longitudinal_field: f64,
}

impl ModelParams {
    pub fn new(
        n_qubits: usize,
        coupling: f64,
        transverse_field: f64,
        longitudinal_field: f64,
    ) -> Result<Self> {
        let params = Self {
            n_qubits,
            coupling,
            transverse_field,
            longitudinal_field,
        };
        params.validate()?;
        Ok(params)
    }

    /// Parameters in the `JN = 1` convention with fields given in units of `JN`.
    pub fn natural(n_qubits: usize, hx_over_jn: f64, hz_over_jn: f64) -> Result<Self> {
        validate_qubits(n_qubits)?;
        Self::new(n_qubits, 1.0 / n_qubits as f64, hx_over_jn, hz_over_jn)
    }

    pub fn validate(&self) -> Result<()> {
        validate_qubits(self.n_qubits)?;
        if !(self.coupling > 0.0 && self.coupling.is_finite()) {
            return Err(invalid(
                "J",
                format!("coupling must be positive, got {}", self.coupling),
            ));
        }
        if !self.transverse_field.is_finite() || !self.longitudinal_field.is_finite() {
            return Err(invalid("field", "fields must be finite"));
        }
        Ok(())
    }

    pub fn with_transverse_field(self, transverse_field: f64) -> Self {
        Self {
            transverse_field,
            ..self
        }
    }
}

/// Tridiagonal form `(diagonal, off_diagonal)` of `H` in the Z basis.
pub(crate) fn z_tridiagonal(
    n_qubits: usize,
    coupling: f64,
    hx: f64,
    hz: f64,
) -> (Vec<f64>, Vec<f64>) {
    let j = n_qubits as f64 / 2.0;
    let diag = (0..=n_qubits)
        .map(|k| {
            let m = j - k as f64;
            -2.0 * coupling * m * m - 2.0 * hz * m
        })
        .collect();
    let off = ladder_coefficients(n_qubits)
        .iter()
        .map(|c| -hx * c)
        .collect();
    (diag, off)
}

/// Parity sector of the X basis: `Even` holds indices `0, 2, 4, …`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sector {
    Even,
    Odd,
}

impl Sector {
    pub fn offset(self) -> usize {
        match self {
            Sector::Even => 0,
            Sector::Odd => 1,
        }
    }

    pub fn dim(self, n_qubits: usize) -> usize {
        match self {
            Sector::Even => n_qubits / 2 + 1,
            Sector::Odd => n_qubits / 2,
        }
    }

    /// X-basis index of the `a`-th sector element.
    pub fn index(self, a: usize) -> usize {
        self.offset() + 2 * a
    }
}

/// The `h_x`-independent and `h_x`-linear parts of a sector block, so that
/// the block at field `h` is `diag_coupling + h·diag_field` with constant
/// off-diagonal.
#[derive(Clone, Debug)]
pub(crate) struct SectorBlock {
    pub diag_coupling: Vec<f64>,
    pub diag_field: Vec<f64>,
    pub off: Vec<f64>,
}

impl SectorBlock {
    pub fn new(n_qubits: usize, coupling: f64, sector: Sector) -> Self {
        // In the X basis S_Z is (up to sign) the ladder matrix L with
        // L[k][k+1] = c_k / 2, so S_Z² has diagonal (c_{k-1}² + c_k²)/4 and
        // second off-diagonal c_k c_{k+1} / 4.
        let c = ladder_coefficients(n_qubits);
        let cc = |k: isize| -> f64 {
            if k < 0 || k as usize >= c.len() {
                0.0
            } else {
                c[k as usize]
            }
        };
        let j = n_qubits as f64 / 2.0;
        let dim = sector.dim(n_qubits);
        let mut diag_coupling = Vec::with_capacity(dim);
        let mut diag_field = Vec::with_capacity(dim);
        let mut off = Vec::with_capacity(dim.saturating_sub(1));
        for a in 0..dim {
            let k = sector.index(a) as isize;
            let sz2 = (cc(k - 1).powi(2) + cc(k).powi(2)) / 4.0;
            diag_coupling.push(-2.0 * coupling * sz2);
            diag_field.push(-2.0 * (j - k as f64));
            if a + 1 < dim {
                off.push(-2.0 * coupling * cc(k) * cc(k + 1) / 4.0);
            }
        }
        Self {
            diag_coupling,
            diag_field,
            off,
        }
    }

    pub fn diagonal_into(&self, field: f64, out: &mut Vec<f64>) {
        out.clear();
        out.extend(
            self.diag_coupling
                .iter()
                .zip(&self.diag_field)
                .map(|(a, b)| a + field * b),
        );
    }

    pub fn eigen(&self, field: f64) -> Result<TridiagonalEigen> {
        let mut diag = Vec::new();
        self.diagonal_into(field, &mut diag);
        TridiagonalEigen::new(&diag, &self.off)
    }
}

/// `H = -2J S_Z² - 2h_x S_X - 2h_z S_Z` in the requested basis.
pub fn build_hamiltonian(params: &ModelParams, axis: Axis) -> Result<CollectiveOperator> {
    params.validate()?;
    let n = params.n_qubits;
    let (diag, off) = z_tridiagonal(
        n,
        params.coupling,
        params.transverse_field,
        params.longitudinal_field,
    );
    let dense = DMatrix::from_fn(n + 1, n + 1, |a, b| {
        if a == b {
            diag[a]
        } else if b == a + 1 {
            off[a]
        } else if a == b + 1 {
            off[b]
        } else {
            0.0
        }
    });
    let z = CollectiveOperator::new(
        DickeBasis::new(n, Axis::Z)?,
        dense.map(|x| Complex64::new(x, 0.0)),
    )?;
    Ok(z.to_axis(axis))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Eigenpair {
    pub energy: f64,
    /// Eigenvector in the X basis, gauge-fixed so its largest-magnitude
    /// amplitude is real and positive.
    pub state: DickeState,
}

/// Parity-resolved eigenpairs `ψ_n` (even) and `φ_n` (odd), ascending in energy.
#[derive(Clone, Debug)]
pub struct SpectrumData {
    pub params: ModelParams,
    pub even: Vec<Eigenpair>,
    pub odd: Vec<Eigenpair>,
    /// `g_n = ⟨ψ_n(h_x)|N/2, N/2⟩_X`.
    pub overlaps: Vec<Complex64>,
}

impl SpectrumData {
    /// `E(ψ_1) - E(ψ_0)`, the gap relevant to parity-protected ramps.
    pub fn even_gap(&self) -> f64 {
        self.even[1].energy - self.even[0].energy
    }

    /// Gap between the two lowest levels of the full spectrum.
    pub fn full_gap(&self) -> f64 {
        let e = self.merged_energies();
        e[1] - e[0]
    }

    pub fn merged_energies(&self) -> Vec<f64> {
        let mut e: Vec<f64> = self
            .even
            .iter()
            .chain(&self.odd)
            .map(|p| p.energy)
            .collect();
        e.sort_by(f64::total_cmp);
        e
    }

    pub fn ground_overlap_sq(&self) -> f64 {
        self.overlaps[0].norm_sqr()
    }

    /// Phases `γ_n = arg g_n`.
    pub fn overlap_phases(&self) -> Vec<f64> {
        self.overlaps.iter().map(|g| g.arg()).collect()
    }
}

fn gauge_fix(v: &mut DVector<f64>) {
    let mut best = 0;
    for (k, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() + 1e-14 {
            best = k;
        }
    }
    if v[best] < 0.0 {
        v.neg_mut();
    }
}

fn sector_eigenpairs(params: &ModelParams, sector: Sector) -> Result<Vec<Eigenpair>> {
    let n = params.n_qubits;
    let basis = DickeBasis::new(n, Axis::X)?;
    let block = SectorBlock::new(n, params.coupling, sector);
    let eig = block.eigen(params.transverse_field)?;
    eig.sorted_pairs()
        .into_iter()
        .map(|(energy, mut v)| {
            gauge_fix(&mut v);
            let mut amplitudes = DVector::<Complex64>::zeros(n + 1);
            for (a, x) in v.iter().enumerate() {
                amplitudes[sector.index(a)] = Complex64::new(*x, 0.0);
            }
            Ok(Eigenpair {
                energy,
                state: DickeState::new(basis, amplitudes)?,
            })
        })
        .collect()
}

/// Diagonalizes each parity sector separately. Requires `h_z = 0`.
pub fn parity_resolved_spectrum(params: &ModelParams) -> Result<SpectrumData> {
    params.validate()?;
    if params.longitudinal_field != 0.0 {
        return Err(Error::ParityBroken(params.longitudinal_field));
    }
    let even = sector_eigenpairs(params, Sector::Even)?;
    let odd = sector_eigenpairs(params, Sector::Odd)?;
    let overlaps = even
        .iter()
        .map(|p| p.state.amplitudes()[0].conj())
        .collect();
    Ok(SpectrumData {
        params: *params,
        even,
        odd,
        overlaps,
    })
}

fn sector_energies(n_qubits: usize, coupling: f64, hx: f64, sector: Sector) -> Result<Vec<f64>> {
    Ok(SectorBlock::new(n_qubits, coupling, sector)
        .eigen(hx)?
        .sorted_eigenvalues())
}

/// `E(ψ_1) - E(ψ_0)` without building eigenvectors.
pub fn even_gap(n_qubits: usize, coupling: f64, hx: f64) -> Result<f64> {
    validate_qubits(n_qubits)?;
    let e = sector_energies(n_qubits, coupling, hx, Sector::Even)?;
    Ok(e[1] - e[0])
}

/// Lowest gap of the full (both-parity) spectrum.
pub fn full_gap(n_qubits: usize, coupling: f64, hx: f64) -> Result<f64> {
    validate_qubits(n_qubits)?;
    let mut e = sector_energies(n_qubits, coupling, hx, Sector::Even)?;
    e.extend(sector_energies(n_qubits, coupling, hx, Sector::Odd)?);
    e.sort_by(f64::total_cmp);
    Ok(e[1] - e[0])
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OverlapPoint {
    pub hx_over_jn: f64,
    /// `|g_0|²`
    pub overlap_sq: f64,
}

/// `|g_0|² = |⟨ψ_0(h_x)|N/2,N/2⟩_X|²` on a grid of `h_x / JN`.
pub fn ground_overlap(n_qubits: usize, hx_over_jn: &[f64]) -> Result<Vec<OverlapPoint>> {
    validate_qubits(n_qubits)?;
    let coupling = 1.0 / n_qubits as f64;
    let block = SectorBlock::new(n_qubits, coupling, Sector::Even);
    hx_over_jn
        .iter()
        .map(|&h| {
            if !(h >= 0.0 && h.is_finite()) {
                return Err(invalid(
                    "h_x/JN",
                    format!("grid values must be nonnegative, got {h}"),
                ));
            }
            let pairs = block.eigen(h)?.sorted_pairs();
            Ok(OverlapPoint {
                hx_over_jn: h,
                overlap_sq: pairs[0].1[0].powi(2),
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapMinimum {
    pub field: f64,
    pub gap: f64,
}

/// Minimum of the even-sector gap over `h_x ∈ [lo, hi]`: a coarse scan
/// brackets the minimum, then golden-section search refines it.
pub fn minimum_gap(n_qubits: usize, coupling: f64, range: (f64, f64)) -> Result<GapMinimum> {
    validate_qubits(n_qubits)?;
    let (lo, hi) = range;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::Empty("field range"));
    }
    const COARSE: usize = 200;
    let step = (hi - lo) / COARSE as f64;
    let mut best = (lo, f64::INFINITY);
    for i in 0..=COARSE {
        let h = lo + step * i as f64;
        let g = even_gap(n_qubits, coupling, h)?;
        if g < best.1 {
            best = (h, g);
        }
    }
    let a = (best.0 - step).max(lo);
    let b = (best.0 + step).min(hi);
    let mut failure = None;
    let (field, gap) = golden_section_min(
        |h| match even_gap(n_qubits, coupling, h) {
            Ok(g) => g,
            Err(e) => {
                failure = Some(e);
                f64::INFINITY
            }
        },
        a,
        b,
        1e-10 * (1.0 + b.abs()),
    );
    if let Some(e) = failure {
        return Err(e);
    }
    if best.1 < gap {
        return Ok(GapMinimum {
            field: best.0,
            gap: best.1,
        });
    }
    Ok(GapMinimum { field, gap })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapScalingRow {
    pub n_qubits: usize,
    /// Location of the minimum, in units of `JN`.
    pub min_field_over_jn: f64,
    /// Minimum even-sector gap, in units of `JN`.
    pub min_gap: f64,
    /// Even-sector gap at the critical field `h_x = JN`.
    pub critical_gap: f64,
}

#[derive(Clone, Debug)]
pub struct GapScaling {
    pub rows: Vec<GapScalingRow>,
    /// Log-log fit of the minimum gap against `N`.
    pub min_gap_fit: LinearFit,
    /// Log-log fit of the gap at `h_x/JN = 1` against `N`.
    pub critical_gap_fit: LinearFit,
}

/// Gap statistics in the `JN = 1` convention for each `N`, with the field
/// range given in units of `JN`.
pub fn gap_scaling(sizes: &[usize], range_over_jn: (f64, f64)) -> Result<GapScaling> {
    if sizes.len() < 2 {
        return Err(Error::Empty("system-size list (need at least two sizes)"));
    }
    let rows = sizes
        .iter()
        .map(|&n| {
            validate_qubits(n)?;
            let coupling = 1.0 / n as f64;
            let min = minimum_gap(n, coupling, range_over_jn)?;
            Ok(GapScalingRow {
                n_qubits: n,
                min_field_over_jn: min.field,
                min_gap: min.gap,
                critical_gap: even_gap(n, coupling, 1.0)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let ns: Vec<f64> = rows.iter().map(|r| r.n_qubits as f64).collect();
    let min_gaps: Vec<f64> = rows.iter().map(|r| r.min_gap).collect();
    let crit_gaps: Vec<f64> = rows.iter().map(|r| r.critical_gap).collect();
    Ok(GapScaling {
        min_gap_fit: log_log_fit(&ns, &min_gaps)?,
        critical_gap_fit: log_log_fit(&ns, &crit_gaps)?,
        rows,
    })
}
