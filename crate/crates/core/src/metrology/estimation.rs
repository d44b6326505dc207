//! Error propagation, finite-difference slopes and phase-offset calibration.

use std::f64::consts::PI;

use crate::error::{invalid, Result};

/// Longitudinal field split into a known part, an unknown part and an
/// applied offset.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct TargetField {
    pub known: f64,
    pub unknown: f64,
    pub offset: f64,
}

impl TargetField {
    pub fn total(&self) -> f64 {
        self.known + self.unknown + self.offset
    }
}

/// `δω = ΔA / (|∂⟨A⟩/∂ω| √M)`. A vanishing slope gives `+∞`.
pub fn uncertainty(std_dev: f64, slope: f64, shots: f64) -> Result<f64> {
    if !(shots >= 1.0) {
        return Err(invalid(
            "M",
            format!("at least one shot is required, got {shots}"),
        ));
    }
    if !(std_dev >= 0.0) {
        return Err(invalid(
            "std_dev",
            format!("must be nonnegative, got {std_dev}"),
        ));
    }
    if slope == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(std_dev / (slope.abs() * shots.sqrt()))
}

/// Uncertainty of `h_z` given the slope `∂⟨A⟩/∂h_z`. With `ω = 2h_z` this
/// is `δω / 2`.
pub fn field_uncertainty(std_dev: f64, slope_per_field: f64, shots: f64) -> Result<f64> {
    Ok(0.5 * uncertainty(std_dev, 0.5 * slope_per_field, shots)?)
}

/// Bernoulli standard deviation `√(P(1-P))` of a projective readout.
pub fn projection_std(p: f64) -> f64 {
    (p * (1.0 - p)).max(0.0).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Derivative {
    pub slope: f64,
    /// The two samples agree to within `100 ε_mach`, so the slope is noise.
    pub cancellation: bool,
    /// A larger step to retry with when `cancellation` is set.
    pub suggested_step: Option<f64>,
}

const CANCELLATION_FLOOR: f64 = 100.0 * f64::EPSILON;

fn derivative(diff: f64, width: f64, step: f64) -> Derivative {
    let cancellation = diff.abs() < CANCELLATION_FLOOR;
    Derivative {
        slope: diff / width,
        cancellation,
        suggested_step: cancellation.then_some(step * 1e3),
    }
}

fn check_step(step: f64) -> Result<()> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(invalid(
            "delta",
            format!("finite-difference step must be positive, got {step}"),
        ));
    }
    Ok(())
}

/// `(P(δ) - P(0)) / δ`.
pub fn forward_difference(p_shifted: f64, p_base: f64, step: f64) -> Result<Derivative> {
    check_step(step)?;
    Ok(derivative(p_shifted - p_base, step, step))
}

/// `(P(+δ) - P(-δ)) / 2δ`.
pub fn central_difference(p_plus: f64, p_minus: f64, step: f64) -> Result<Derivative> {
    check_step(step)?;
    Ok(derivative(p_plus - p_minus, 2.0 * step, step))
}

/// Ideal survival probability `P = cos²(h N T)`.
pub fn ideal_probability(n_qubits: usize, sense_time: f64, field: f64) -> f64 {
    (field * n_qubits as f64 * sense_time).cos().powi(2)
}

/// `∂P/∂h = -N T sin(2hNT)` for the ideal protocol.
pub fn ideal_slope(n_qubits: usize, sense_time: f64, field: f64) -> f64 {
    let nt = n_qubits as f64 * sense_time;
    -nt * (2.0 * field * nt).sin()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OffsetPolicy {
    /// Smallest branch `n ≥ 0` of `2(h_k + h_0) N T = (2n+1)π/2` with a
    /// nonnegative offset.
    SmallestBranch,
    /// Total field `h_k + h_0` held at the given value.
    FixedTotal(f64),
}

/// Offset `h_0` that places the interferometric phase at maximum slope.
pub fn calibrate_offset(
    known: f64,
    n_qubits: usize,
    sense_time: f64,
    policy: OffsetPolicy,
) -> Result<f64> {
    if !(sense_time > 0.0) {
        return Err(invalid(
            "T_int",
            format!("sensing time must be positive, got {sense_time}"),
        ));
    }
    match policy {
        OffsetPolicy::FixedTotal(total) => Ok(total - known),
        OffsetPolicy::SmallestBranch => {
            let quarter = PI / (4.0 * n_qubits as f64 * sense_time);
            // total = (2n+1)·quarter must be ≥ known
            let n = ((known / quarter - 1.0) / 2.0).ceil().max(0.0);
            Ok((2.0 * n + 1.0) * quarter - known)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitution_example() {
        let (n, t) = (10, 0.3);
        let d = field_uncertainty(0.5, n as f64 * t, 1.0).unwrap();
        assert!((d - 1.0 / (2.0 * n as f64 * t)).abs() < 1e-15);
        assert_eq!(uncertainty(0.5, 0.0, 1.0).unwrap(), f64::INFINITY);
        assert!(uncertainty(0.5, 1.0, 0.5).is_err());
    }

    #[test]
    fn smallest_branch_phase() {
        for known in [0.0, 0.2, 3.7] {
            let (n, t) = (10, 0.35);
            let h0 = calibrate_offset(known, n, t, OffsetPolicy::SmallestBranch).unwrap();
            assert!(h0 >= -1e-15);
            let phase = 2.0 * (known + h0) * n as f64 * t;
            assert!((phase.rem_euclid(PI) - PI / 2.0).abs() < 1e-12);
            // no smaller branch keeps the offset nonnegative
            assert!(h0 - PI / (2.0 * n as f64 * t) < 0.0);
        }
    }

    #[test]
    fn doubling_sense_time_halves_offset() {
        let a = calibrate_offset(0.0, 10, 0.1, OffsetPolicy::SmallestBranch).unwrap();
        let b = calibrate_offset(0.0, 10, 0.2, OffsetPolicy::SmallestBranch).unwrap();
        assert!((a - 2.0 * b).abs() < 1e-15);
    }

    #[test]
    fn cancellation_flag() {
        let d = forward_difference(0.5, 0.5, 1e-10).unwrap();
        assert!(d.cancellation);
        assert_eq!(d.slope, 0.0);
        assert!(d.suggested_step.unwrap() > 1e-10);
        assert!(forward_difference(0.5, 0.4, 0.0).is_err());
    }
}
