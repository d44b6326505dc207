//! Uncertainty against sensing time for the full nonadiabatic protocol.
//!
//! The ramps do not depend on `T_int` or `h_z`, so the prepared state
//! `ψ = U_down |start⟩` and the readout vector `b = U_up† |start⟩` are
//! computed once. Sensing is diagonal in the Z basis, which leaves
//! `P(h) = |Σ_k b_k* e^{-i E_k(h) T_int} ψ_k|²` at O(N) cost per point.

use num_complex::Complex64;

use crate::dicke::{Axis, DickeState};
use crate::dynamics::{propagate, propagate_adjoint, Integrator, ProtocolParams};
use crate::error::{invalid, Error, Result};
use crate::numeric::mean_std;

use super::estimation::{calibrate_offset, forward_difference, projection_std, OffsetPolicy};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub sense_time: f64,
    /// `h_k + h_0` at which the slope is taken.
    pub total_field: f64,
    pub probability: f64,
    pub slope: f64,
    /// `√(P(1-P)) / |∂P/∂h|`, per shot.
    pub delta_h: f64,
    /// `1 / (2 N T_int δh)`.
    pub p_index: f64,
    pub divergent: bool,
    pub cancellation: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TintSweep {
    pub rows: Vec<SweepRow>,
    /// Mean of `p_index` over rows that are neither divergent nor cancelled.
    pub p_mean: f64,
    /// Population standard deviation of the same rows.
    pub p_std: f64,
    pub divergent: usize,
    pub cancelled: usize,
    /// GHZ fidelity of the prepared state.
    pub fidelity_to_ghz: f64,
    /// Return fidelity at `T_int = 0`, `h_z = 0`.
    pub fidelity_to_initial: f64,
}

/// Sweep settings beyond the protocol itself.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepSettings {
    pub known_field: f64,
    pub offset: OffsetPolicy,
    /// Finite-difference step in `h_z`.
    pub step: f64,
}

impl Default for SweepSettings {
    fn default() -> Self {
        Self {
            known_field: 0.0,
            offset: OffsetPolicy::SmallestBranch,
            step: 1e-10,
        }
    }
}

/// Precomputed ramp data for fast evaluation of `P(h_z, T_int)`.
#[derive(Clone, Debug)]
pub struct SensingInterferometer {
    n_qubits: usize,
    coupling: f64,
    m: Vec<f64>,
    prepared: Vec<Complex64>,
    readout: Vec<Complex64>,
    pub fidelity_to_ghz: f64,
}

impl SensingInterferometer {
    /// Integrates both ramps of `params` (its sensing time and field are
    /// ignored). The readout projects onto the start state.
    pub fn new(params: &ProtocolParams, integrator: &Integrator) -> Result<Self> {
        params.validate()?;
        let start = params.start_state()?;
        let prep = match params.down_ramp()? {
            Some(s) => propagate(&start, &s, params.coupling, 0.0, integrator)?,
            None => start.clone(),
        };
        let back = match params.up_ramp()? {
            Some(s) => propagate_adjoint(&start, &s, params.coupling, 0.0, integrator)?,
            None => start,
        };
        let ghz = DickeState::ghz(params.n_qubits, true)?;
        let prep_z = prep.to_axis(Axis::Z);
        let back_z = back.to_axis(Axis::Z);
        Ok(Self {
            n_qubits: params.n_qubits,
            coupling: params.coupling,
            m: prep_z.basis().m_values(),
            fidelity_to_ghz: ghz.fidelity(&prep_z)?.clamp(0.0, 1.0),
            prepared: prep_z.amplitudes().iter().copied().collect(),
            readout: back_z.amplitudes().iter().copied().collect(),
        })
    }

    pub fn probability(&self, field: f64, sense_time: f64) -> f64 {
        let j = self.coupling;
        let amp: Complex64 = self
            .readout
            .iter()
            .zip(&self.prepared)
            .zip(&self.m)
            .map(|((b, a), &m)| {
                let e = -2.0 * j * m * m - 2.0 * field * m;
                b.conj() * a * Complex64::from_polar(1.0, -e * sense_time)
            })
            .sum();
        amp.norm_sqr().clamp(0.0, 1.0)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// One grid point of the sweep.
    pub fn evaluate(&self, sense_time: f64, settings: &SweepSettings) -> Result<SweepRow> {
        let offset = calibrate_offset(
            settings.known_field,
            self.n_qubits,
            sense_time,
            settings.offset,
        )?;
        let total_field = settings.known_field + offset;
        let p0 = self.probability(total_field, sense_time);
        let p1 = self.probability(total_field + settings.step, sense_time);
        let d = forward_difference(p1, p0, settings.step)?;
        let divergent = d.slope == 0.0;
        let delta_h = if divergent {
            f64::INFINITY
        } else {
            projection_std(p0) / d.slope.abs()
        };
        let p_index = if divergent {
            0.0
        } else {
            1.0 / (2.0 * self.n_qubits as f64 * sense_time * delta_h)
        };
        Ok(SweepRow {
            sense_time,
            total_field,
            probability: p0,
            slope: d.slope,
            delta_h,
            p_index,
            divergent,
            cancellation: d.cancellation,
        })
    }
}

/// Per-point uncertainty and the averaged index `p` over a sensing-time grid.
pub fn tint_sweep(
    params: &ProtocolParams,
    sense_times: &[f64],
    settings: &SweepSettings,
    integrator: &Integrator,
) -> Result<TintSweep> {
    if sense_times.is_empty() {
        return Err(Error::Empty("sensing-time grid"));
    }
    if sense_times.iter().any(|&t| !(t > 0.0)) {
        return Err(invalid("T_int", "grid values must be positive"));
    }
    let interferometer = SensingInterferometer::new(params, integrator)?;
    let rows = sense_times
        .iter()
        .map(|&t| interferometer.evaluate(t, settings))
        .collect::<Result<Vec<_>>>()?;
    let good: Vec<f64> = rows
        .iter()
        .filter(|r| !r.divergent && !r.cancellation)
        .map(|r| r.p_index)
        .collect();
    let (p_mean, p_std) = if good.is_empty() {
        (0.0, 0.0)
    } else {
        mean_std(&good)
    };
    Ok(TintSweep {
        p_mean,
        p_std,
        divergent: rows.iter().filter(|r| r.divergent).count(),
        cancelled: rows
            .iter()
            .filter(|r| r.cancellation && !r.divergent)
            .count(),
        fidelity_to_ghz: interferometer.fidelity_to_ghz,
        fidelity_to_initial: interferometer.probability(0.0, 0.0),
        rows,
    })
}

/// The grid `(2JN²) T_int = 1, 3, …, 199` in units of `(2JN²)^{-1}`.
pub fn default_sense_grid() -> Vec<f64> {
    (1..200).step_by(2).map(f64::from).collect()
}
