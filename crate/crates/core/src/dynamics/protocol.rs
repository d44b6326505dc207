//! The prepare → sense → read-out protocol and ramp-time scans.

use crate::dicke::{validate_qubits, Axis, DickeState};
use crate::error::{invalid, Result};
use crate::model::{parity_resolved_spectrum, ModelParams};

use super::propagate::{propagate, sense, Integrator};
use super::schedule::{Schedule, Segment, SegmentKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum ScheduleKind {
    /// Cosine ramp down, sine ramp up.
    #[default]
    CosineSine,
    Linear,
}

impl ScheduleKind {
    fn ramps(self) -> (SegmentKind, SegmentKind) {
        match self {
            ScheduleKind::CosineSine => (SegmentKind::CosineRampDown, SegmentKind::SineRampUp),
            ScheduleKind::Linear => (SegmentKind::LinearRamp, SegmentKind::LinearRamp),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum StartState {
    /// `|N/2, N/2⟩_X`, obtained by projecting in a strong transverse field.
    #[default]
    StrongFieldProjected,
    /// The even-parity ground state `ψ_0(h_0)` at the initial field.
    GroundState,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProtocolParams {
    pub n_qubits: usize,
    pub coupling: f64,
    /// Transverse field `h_0` at the start and end of the protocol.
    pub initial_field: f64,
    pub ramp_time: f64,
    pub sense_time: f64,
    /// Total longitudinal field acting during the sensing hold.
    pub longitudinal_field: f64,
    pub schedule: ScheduleKind,
    pub start: StartState,
}

impl ProtocolParams {
    /// Parameters in the `JN = 1` convention: fields in units of `JN`, times
    /// in units of `(2JN²)^{-1}`.
    pub fn natural(
        n_qubits: usize,
        h0_over_jn: f64,
        ramp_time_scaled: f64,
        sense_time_scaled: f64,
        hz_over_jn: f64,
    ) -> Result<Self> {
        validate_qubits(n_qubits)?;
        let unit = 1.0 / (2.0 * n_qubits as f64);
        let params = Self {
            n_qubits,
            coupling: 1.0 / n_qubits as f64,
            initial_field: h0_over_jn,
            ramp_time: ramp_time_scaled * unit,
            sense_time: sense_time_scaled * unit,
            longitudinal_field: hz_over_jn,
            schedule: ScheduleKind::CosineSine,
            start: StartState::StrongFieldProjected,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        ModelParams::new(
            self.n_qubits,
            self.coupling,
            self.initial_field,
            self.longitudinal_field,
        )?;
        if !(self.ramp_time >= 0.0 && self.ramp_time.is_finite()) {
            return Err(invalid(
                "T_a",
                format!("ramp time must be nonnegative, got {}", self.ramp_time),
            ));
        }
        if !(self.sense_time >= 0.0 && self.sense_time.is_finite()) {
            return Err(invalid(
                "T_int",
                format!("sensing time must be nonnegative, got {}", self.sense_time),
            ));
        }
        Ok(())
    }

    pub fn start_state(&self) -> Result<DickeState> {
        match self.start {
            StartState::StrongFieldProjected => DickeState::strong_field_ground(self.n_qubits),
            StartState::GroundState => {
                let params =
                    ModelParams::new(self.n_qubits, self.coupling, self.initial_field, 0.0)?;
                Ok(parity_resolved_spectrum(&params)?.even[0].state.clone())
            }
        }
    }

    /// The ramp from `h_0` to zero, or `None` when `T_a = 0`.
    pub fn down_ramp(&self) -> Result<Option<Schedule>> {
        self.ramp(true)
    }

    /// The ramp from zero back to `h_0`, or `None` when `T_a = 0`.
    pub fn up_ramp(&self) -> Result<Option<Schedule>> {
        self.ramp(false)
    }

    fn ramp(&self, down: bool) -> Result<Option<Schedule>> {
        if self.ramp_time == 0.0 {
            return Ok(None);
        }
        let (d, u) = self.schedule.ramps();
        let seg = if down {
            Segment::new(d, self.ramp_time, self.initial_field, 0.0)?
        } else {
            Segment::new(u, self.ramp_time, 0.0, self.initial_field)?
        };
        Ok(Some(Schedule::new(vec![seg])?))
    }
}

#[derive(Clone, Debug)]
pub struct ProtocolResult {
    pub state_after_prep: DickeState,
    pub state_after_sense: DickeState,
    pub final_state: DickeState,
    /// `|⟨GHZ+|ψ(T_a)⟩|²`.
    pub fidelity_to_ghz: f64,
    /// `|⟨start|ψ(final)⟩|²`.
    pub fidelity_to_initial: f64,
    /// `P = |⟨N/2, N/2|_X ψ(final)⟩|²`.
    pub survival_probability: f64,
    /// Mean of the projection readout onto `|N/2, N/2⟩_X` (equal to `P`).
    pub expectation: f64,
    /// Bernoulli variance `P(1 - P)` of the projection readout.
    pub variance: f64,
}

fn propagate_optional(
    state: DickeState,
    schedule: Option<Schedule>,
    coupling: f64,
    integrator: &Integrator,
) -> Result<DickeState> {
    match schedule {
        Some(s) => propagate(&state, &s, coupling, 0.0, integrator),
        None => Ok(state),
    }
}

/// Runs ramp down, sensing at `h_x = 0`, and ramp up. The ramps are
/// integrated at `h_z = 0`; the longitudinal field acts during sensing,
/// which is evaluated in closed form.
pub fn run_protocol(params: &ProtocolParams, integrator: &Integrator) -> Result<ProtocolResult> {
    params.validate()?;
    let start = params.start_state()?;
    let prep = propagate_optional(
        start.clone(),
        params.down_ramp()?,
        params.coupling,
        integrator,
    )?;
    let sensed = sense(
        &prep,
        params.coupling,
        params.longitudinal_field,
        params.sense_time,
    );
    let final_state = propagate_optional(
        sensed.clone(),
        params.up_ramp()?,
        params.coupling,
        integrator,
    )?;

    let ghz = DickeState::ghz(params.n_qubits, true)?;
    let x0 = DickeState::strong_field_ground(params.n_qubits)?;
    let p = clamp_probability(x0.fidelity(&final_state)?);
    Ok(ProtocolResult {
        fidelity_to_ghz: clamp_probability(ghz.fidelity(&prep)?),
        fidelity_to_initial: clamp_probability(start.fidelity(&final_state)?),
        survival_probability: p,
        expectation: p,
        variance: p * (1.0 - p),
        state_after_prep: prep,
        state_after_sense: sensed,
        final_state,
    })
}

fn clamp_probability(p: f64) -> f64 {
    p.clamp(0.0, 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RampScanRow {
    pub ramp_time: f64,
    pub fidelity_to_ghz: f64,
    pub fidelity_to_initial: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RampScan {
    pub rows: Vec<RampScanRow>,
    /// Indices of grid points whose GHZ fidelity exceeds both neighbours.
    pub local_maxima: Vec<usize>,
}

impl RampScan {
    pub fn optima(&self) -> impl Iterator<Item = &RampScanRow> {
        self.local_maxima.iter().map(|&i| &self.rows[i])
    }

    /// The local optimum with the highest GHZ fidelity.
    pub fn optimum_highest(&self) -> Option<&RampScanRow> {
        self.optima()
            .max_by(|a, b| a.fidelity_to_ghz.total_cmp(&b.fidelity_to_ghz))
    }

    /// The local optimum whose ramp time is closest to `target`.
    pub fn optimum_nearest(&self, target: f64) -> Option<&RampScanRow> {
        self.optima().min_by(|a, b| {
            (a.ramp_time - target)
                .abs()
                .total_cmp(&(b.ramp_time - target).abs())
        })
    }
}

/// Interior grid points strictly larger than both neighbours.
pub fn local_maxima(values: &[f64]) -> Vec<usize> {
    (1..values.len().saturating_sub(1))
        .filter(|&i| values[i] > values[i - 1] && values[i] > values[i + 1])
        .collect()
}

/// GHZ and return fidelities with `T_int = 0`, `h_z = 0` for each ramp time.
///
/// In the X basis the Hamiltonian is real, and the discretized up-ramp is
/// the down-ramp's steps in reverse order, so `U_up = U_downᵀ`. Both start
/// states are real there, so the return amplitude is `(U_down s)ᵀ (U_down s)`
/// and only the down ramp is integrated.
pub fn scan_ramp_time(
    n_qubits: usize,
    coupling: f64,
    initial_field: f64,
    ramp_times: &[f64],
    schedule: ScheduleKind,
    start: StartState,
    integrator: &Integrator,
) -> Result<RampScan> {
    if ramp_times.is_empty() {
        return Err(crate::error::Error::Empty("ramp-time grid"));
    }
    let ghz = DickeState::ghz(n_qubits, true)?.to_axis(Axis::X);
    let mut rows = Vec::with_capacity(ramp_times.len());
    for &ramp_time in ramp_times {
        let params = ProtocolParams {
            n_qubits,
            coupling,
            initial_field,
            ramp_time,
            sense_time: 0.0,
            longitudinal_field: 0.0,
            schedule,
            start,
        };
        params.validate()?;
        let start = params.start_state()?;
        let prep =
            propagate_optional(start, params.down_ramp()?, coupling, integrator)?.to_axis(Axis::X);
        let a = prep.amplitudes();
        let ret: num_complex::Complex64 = a.iter().map(|z| z * z).sum();
        rows.push(RampScanRow {
            ramp_time,
            fidelity_to_ghz: clamp_probability(ghz.fidelity(&prep)?),
            fidelity_to_initial: clamp_probability(ret.norm_sqr()),
        });
    }
    let fid: Vec<f64> = rows.iter().map(|r| r.fidelity_to_ghz).collect();
    Ok(RampScan {
        local_maxima: local_maxima(&fid),
        rows,
    })
}

/// Empirical line `T_a ≈ (11.6 N + 60)` in units of `(2JN²)^{-1}` along
/// which the locally optimal ramp times lie.
pub fn reference_ramp_time(n_qubits: usize) -> f64 {
    11.6 * n_qubits as f64 + 60.0
}

#[derive(Clone, Debug, PartialEq)]
pub struct RampOptimum {
    pub n_qubits: usize,
    /// Scan in the `JN = 1` convention; ramp times in natural time units.
    pub scan: RampScan,
    /// Highest-fidelity local optimum of the scan.
    pub selected: Option<RampScanRow>,
    /// Local optimum closest to [`reference_ramp_time`].
    pub nearest_reference: Option<RampScanRow>,
}

impl RampOptimum {
    /// Selected ramp time in units of `(2JN²)^{-1}`.
    pub fn selected_scaled(&self) -> Option<f64> {
        self.selected
            .map(|r| r.ramp_time * 2.0 * self.n_qubits as f64)
    }
}

/// Scans integer ramp times (units of `(2JN²)^{-1}`) over `window` with
/// `JN = 1`, the cosine/sine schedule and the projected start, and reports
/// the local optima of the GHZ fidelity.
pub fn locate_ramp_optimum(
    n_qubits: usize,
    h0_over_jn: f64,
    window: (f64, f64),
    integrator: Option<Integrator>,
) -> Result<RampOptimum> {
    let (lo, hi) = (window.0.ceil().max(1.0) as usize, window.1.floor() as usize);
    if hi < lo + 2 {
        return Err(crate::error::Error::Empty("ramp-time window"));
    }
    let grid: Vec<f64> = (lo..=hi).map(|u| u as f64).collect();
    optimum_on_grid(n_qubits, h0_over_jn, &grid, integrator)
}

/// Like [`locate_ramp_optimum`] on an explicit grid of scaled ramp times.
pub fn optimum_on_grid(
    n_qubits: usize,
    h0_over_jn: f64,
    grid_scaled: &[f64],
    integrator: Option<Integrator>,
) -> Result<RampOptimum> {
    validate_qubits(n_qubits)?;
    let unit = 1.0 / (2.0 * n_qubits as f64);
    let grid: Vec<f64> = grid_scaled.iter().map(|t| t * unit).collect();
    let longest = grid_scaled.iter().copied().fold(0.0, f64::max);
    let integrator =
        integrator.unwrap_or_else(|| Integrator::fourth_order_for(longest).unchecked());
    let scan = scan_ramp_time(
        n_qubits,
        unit * 2.0,
        h0_over_jn,
        &grid,
        ScheduleKind::CosineSine,
        StartState::StrongFieldProjected,
        &integrator,
    )?;
    let target = reference_ramp_time(n_qubits) * unit;
    Ok(RampOptimum {
        n_qubits,
        selected: scan.optimum_highest().copied(),
        nearest_reference: scan.optimum_nearest(target).copied(),
        scan,
    })
}

/// The window `[0.75, 1.25] × (11.6 N + 60)` used for optimum searches.
pub fn default_ramp_window(n_qubits: usize) -> (f64, f64) {
    let line = reference_ramp_time(n_qubits);
    (0.75 * line, 1.25 * line)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Method;

    #[test]
    fn scan_matches_full_protocol() {
        let integ = Integrator::fixed(Method::Midpoint, 300);
        let n = 6;
        let j = 1.0 / n as f64;
        for (start, schedule) in [
            (StartState::StrongFieldProjected, ScheduleKind::CosineSine),
            (StartState::GroundState, ScheduleKind::Linear),
        ] {
            let scan = scan_ramp_time(n, j, 1.3, &[0.5, 2.0], schedule, start, &integ).unwrap();
            for row in &scan.rows {
                let params = ProtocolParams {
                    n_qubits: n,
                    coupling: j,
                    initial_field: 1.3,
                    ramp_time: row.ramp_time,
                    sense_time: 0.0,
                    longitudinal_field: 0.0,
                    schedule,
                    start,
                };
                let full = run_protocol(&params, &integ).unwrap();
                assert!((full.fidelity_to_ghz - row.fidelity_to_ghz).abs() < 1e-12);
                assert!((full.fidelity_to_initial - row.fidelity_to_initial).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn local_maxima_are_strict_interior_peaks() {
        assert_eq!(
            local_maxima(&[0.0, 1.0, 0.5, 0.5, 2.0, 1.0, 3.0]),
            vec![1, 4]
        );
        assert!(local_maxima(&[1.0, 1.0]).is_empty());
    }

    #[test]
    fn zero_ramp_time_is_sudden() {
        let params = ProtocolParams::natural(4, 1.0, 0.0, 0.0, 0.0).unwrap();
        let r = run_protocol(&params, &Integrator::default()).unwrap();
        assert!((r.survival_probability - 1.0).abs() < 1e-12);
        assert!((r.fidelity_to_ghz - 2.0 / 16.0).abs() < 1e-12);
    }
}
