//! Finite-duration time budgets and the adiabatic preparation constant.

use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum BudgetVariant {
    /// `T = C̃ N^{2/3}` with `M = T/(T_int + 2T_a)` repetitions and
    /// `T_int = √(C C̃) N^{1/6+ε}`.
    #[default]
    Averaged,
    /// A single run, `T = T_int + 2T_a`, with `T_int = C N^{1/6+ε}`.
    SingleShot,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeBudget {
    pub variant: BudgetVariant,
    pub ramp_time: f64,
    pub total_time: f64,
    pub sense_time: f64,
    pub shots: f64,
    /// Gain over the minimized SQL, `δh_SQL,min / δh`.
    pub eta: f64,
    /// Ratio to the minimized Heisenberg limit of the variant.
    pub eta_prime: f64,
    /// Smallest `T_int` that beats the SQL for this `T` and `T_a`.
    pub sense_time_threshold: f64,
    pub beats_sql: bool,
}

/// `2T_a = C N^{2/3}`; see [`BudgetVariant`] for the rest.
pub fn time_budget(
    n_qubits: usize,
    c: f64,
    c_tilde: f64,
    epsilon: f64,
    variant: BudgetVariant,
) -> Result<TimeBudget> {
    if n_qubits == 0 {
        return Err(invalid("N", "at least one probe is required"));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(invalid("C", format!("must be positive, got {c}")));
    }
    if !(0.0..=0.5).contains(&epsilon) {
        return Err(invalid(
            "epsilon",
            format!("must lie in [0, 1/2] so that T_int ≤ T, got {epsilon}"),
        ));
    }
    let n = n_qubits as f64;
    let ramp_time = 0.5 * c * n.powf(2.0 / 3.0);
    let prep_read = 2.0 * ramp_time;
    let tail = n.powf(1.0 / 6.0 + epsilon);
    match variant {
        BudgetVariant::Averaged => {
            if !(c_tilde > 0.0 && c_tilde.is_finite()) {
                return Err(invalid(
                    "C_tilde",
                    format!("must be positive, got {c_tilde}"),
                ));
            }
            let total_time = c_tilde * n.powf(2.0 / 3.0);
            let sense_time = (c * c_tilde).sqrt() * tail;
            let cycle = sense_time + prep_read;
            let eta = (n * sense_time * sense_time / (total_time * cycle)).sqrt();
            let half = total_time / (2.0 * n);
            Ok(TimeBudget {
                variant,
                ramp_time,
                total_time,
                sense_time,
                shots: total_time / cycle,
                eta,
                eta_prime: (sense_time / cycle).sqrt(),
                sense_time_threshold: half + (prep_read * total_time / n + half * half).sqrt(),
                beats_sql: eta > 1.0,
            })
        }
        BudgetVariant::SingleShot => {
            let sense_time = c * tail;
            let total_time = sense_time + prep_read;
            let eta = n.sqrt() * sense_time / total_time;
            let root = n.sqrt().recip();
            let sense_time_threshold = if n > 1.0 {
                prep_read * root / (1.0 - root)
            } else {
                f64::INFINITY
            };
            Ok(TimeBudget {
                variant,
                ramp_time,
                total_time,
                sense_time,
                shots: 1.0,
                eta,
                eta_prime: sense_time / total_time,
                sense_time_threshold,
                beats_sql: eta > 1.0,
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdiabaticTimeEstimate {
    /// Residual amplitude `ε = √(1 - p)` on the first excited state.
    pub epsilon: f64,
    /// `C̄ = ε^{-4/3} / 2`.
    pub c_bar: f64,
    /// `JN·C = (h_0/JN) C̄`.
    pub jn_c: f64,
    /// `2JN·T_prep = ε^{-4/3} (h_0/JN) N^{2/3}`.
    pub prep_time_2jn: f64,
}

/// Preparation-time constants for a target ground-state probability `p`.
pub fn adiabatic_time_estimate(
    h0_over_jn: f64,
    probability: f64,
    n_qubits: usize,
) -> Result<AdiabaticTimeEstimate> {
    if !(0.0..1.0).contains(&probability) {
        return Err(invalid(
            "probability",
            format!("must lie in [0, 1), got {probability}"),
        ));
    }
    if !(h0_over_jn > 0.0 && h0_over_jn.is_finite()) {
        return Err(invalid(
            "h0x_over_JN",
            format!("must be positive, got {h0_over_jn}"),
        ));
    }
    let epsilon = (1.0 - probability).sqrt();
    let scale = epsilon.powf(-4.0 / 3.0);
    let c_bar = 0.5 * scale;
    Ok(AdiabaticTimeEstimate {
        epsilon,
        c_bar,
        jn_c: h0_over_jn * c_bar,
        prep_time_2jn: scale * h0_over_jn * (n_qubits as f64).powf(2.0 / 3.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_range_enforced() {
        assert!(time_budget(100, 1.0, 50.0, 0.7, BudgetVariant::Averaged).is_err());
        assert!(time_budget(100, 1.0, 50.0, -0.1, BudgetVariant::SingleShot).is_err());
        assert!(time_budget(100, 1.0, 50.0, 0.5, BudgetVariant::Averaged).is_ok());
    }

    #[test]
    fn threshold_is_where_eta_crosses_one() {
        let b = time_budget(400, 2.0, 80.0, 0.2, BudgetVariant::Averaged).unwrap();
        let n = 400.0;
        let eta_at = |ti: f64| (n * ti * ti / (b.total_time * (ti + 2.0 * b.ramp_time))).sqrt();
        assert!((eta_at(b.sense_time_threshold) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_probability_floor() {
        let e = adiabatic_time_estimate(1.0, 0.0, 10).unwrap();
        assert!((e.c_bar - 0.5).abs() < 1e-15);
        assert!(adiabatic_time_estimate(1.0, 1.0, 10).is_err());
    }
}
