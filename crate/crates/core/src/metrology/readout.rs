//! Global `S_Z` readout of the two-level probe state
//! `cos(h N T)|N/2,N/2⟩_X + sin(h N T) e^{iα} |N/2,N/2-1⟩_X`.
//!
//! The `S_Z` matrix element between the two X-basis states is `√N / 2`,
//! so `⟨S_Z⟩ = (√N/2) cos α sin(2hNT)` and
//! `ΔS_Z² = N/4 + (N-1)/2 sin²(hNT) - (N/4) sin²(2hNT) cos²α`.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::dicke::{build_collective_operators, validate_qubits, Axis, DickeBasis, DickeState};
use crate::error::Result;

use super::estimation::field_uncertainty;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SzReadout {
    pub mean: f64,
    pub std_dev: f64,
    /// `∂⟨S_Z⟩/∂h_z`
    pub slope: f64,
    /// Error-propagation uncertainty of `h_z`; infinite when the slope vanishes.
    pub delta_h: f64,
}

/// Sign of `⟨N/2,N/2|_X S_Z |N/2,N/2-1⟩_X` in this crate's rotation gauge.
fn gauge_sign(n_qubits: usize) -> Result<f64> {
    let sz = build_collective_operators(n_qubits)?.sz.to_axis(Axis::X);
    Ok(sz.matrix()[(0, 1)].re.signum())
}

/// The ideal two-level probe state, in the X basis. The relative sign of
/// the second component is chosen so that the closed forms hold as written.
pub fn readout_state(
    n_qubits: usize,
    field: f64,
    sense_time: f64,
    alpha: f64,
) -> Result<DickeState> {
    validate_qubits(n_qubits)?;
    let basis = DickeBasis::new(n_qubits, Axis::X)?;
    let theta = field * n_qubits as f64 * sense_time;
    let mut v = DVector::zeros(basis.dim());
    v[0] = Complex64::new(theta.cos(), 0.0);
    v[1] = Complex64::from_polar(gauge_sign(n_qubits)? * theta.sin(), alpha);
    DickeState::new(basis, v)
}

/// `⟨S_Z⟩` and `ΔS_Z` of an arbitrary state.
pub fn sz_moments(state: &DickeState) -> Result<(f64, f64)> {
    let sz = build_collective_operators(state.basis().n_qubits())?.sz;
    Ok((state.expectation(&sz)?.re, state.variance(&sz)?.sqrt()))
}

/// Closed-form moments and uncertainty for the ideal probe state.
pub fn sz_readout_closed_form(
    n_qubits: usize,
    field: f64,
    sense_time: f64,
    alpha: f64,
    shots: f64,
) -> Result<SzReadout> {
    validate_qubits(n_qubits)?;
    let n = n_qubits as f64;
    let nt = n * sense_time;
    let theta = field * nt;
    let (s2, c2) = (2.0 * theta).sin_cos();
    let ca = alpha.cos();
    let mean = 0.5 * n.sqrt() * ca * s2;
    let var = 0.25 * n + 0.5 * (n - 1.0) * theta.sin().powi(2) - 0.25 * n * (s2 * ca).powi(2);
    let std_dev = var.max(0.0).sqrt();
    let slope = n.sqrt() * nt * ca * c2;
    Ok(SzReadout {
        mean,
        std_dev,
        slope,
        delta_h: field_uncertainty(std_dev, slope, shots)?,
    })
}

/// Moments evaluated from the state vector, with the slope taken by a
/// central difference in `h_z` of step `step`.
pub fn sz_readout(
    n_qubits: usize,
    field: f64,
    sense_time: f64,
    alpha: f64,
    shots: f64,
    step: f64,
) -> Result<SzReadout> {
    let (mean, std_dev) = sz_moments(&readout_state(n_qubits, field, sense_time, alpha)?)?;
    let (plus, _) = sz_moments(&readout_state(n_qubits, field + step, sense_time, alpha)?)?;
    let (minus, _) = sz_moments(&readout_state(n_qubits, field - step, sense_time, alpha)?)?;
    let slope = (plus - minus) / (2.0 * step);
    Ok(SzReadout {
        mean,
        std_dev,
        slope,
        delta_h: field_uncertainty(std_dev, slope, shots)?,
    })
}

/// `1 / (2N √M T |cos α cos(2hNT)|)`, valid for small `hNT`.
pub fn sz_small_angle_uncertainty(
    n_qubits: usize,
    field: f64,
    sense_time: f64,
    alpha: f64,
    shots: f64,
) -> f64 {
    let n = n_qubits as f64;
    let denom = 2.0
        * n
        * shots.sqrt()
        * sense_time
        * (alpha.cos() * (2.0 * field * n * sense_time).cos()).abs();
    if denom == 0.0 {
        f64::INFINITY
    } else {
        1.0 / denom
    }
}
