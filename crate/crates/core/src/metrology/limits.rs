//! Reference precision limits and dephasing analysis.

use std::f64::consts::E;

use crate::error::{invalid, Result};

/// Frequency (`ω = 2h_z`) limits for `N` probes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Limits {
    /// `1/(N √M T_int)`
    pub heisenberg: f64,
    /// `1/(√(NM) T_int)`
    pub standard_quantum: f64,
    /// `1/(N T)`
    pub heisenberg_min: f64,
    /// `1/(√N T)`
    pub standard_quantum_min: f64,
    /// `1/(N √(T_int T))`
    pub heisenberg_min_averaged: f64,
}

impl Limits {
    /// The same limits expressed for `h_z`, i.e. halved.
    pub fn in_field_units(&self) -> Self {
        Self {
            heisenberg: self.heisenberg / 2.0,
            standard_quantum: self.standard_quantum / 2.0,
            heisenberg_min: self.heisenberg_min / 2.0,
            standard_quantum_min: self.standard_quantum_min / 2.0,
            heisenberg_min_averaged: self.heisenberg_min_averaged / 2.0,
        }
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if !(value > 0.0 && value.is_finite()) {
        return Err(invalid(name, format!("must be positive, got {value}")));
    }
    Ok(())
}

pub fn limits(n_probes: usize, shots: f64, sense_time: f64, total_time: f64) -> Result<Limits> {
    if n_probes == 0 {
        return Err(invalid("N", "at least one probe is required"));
    }
    positive("M", shots)?;
    positive("T_int", sense_time)?;
    positive("T", total_time)?;
    let n = n_probes as f64;
    Ok(Limits {
        heisenberg: 1.0 / (n * shots.sqrt() * sense_time),
        standard_quantum: 1.0 / ((n * shots).sqrt() * sense_time),
        heisenberg_min: 1.0 / (n * total_time),
        standard_quantum_min: 1.0 / (n.sqrt() * total_time),
        heisenberg_min_averaged: 1.0 / (n * (sense_time * total_time).sqrt()),
    })
}

/// Time allocation of a repeated measurement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetrologyBudget {
    pub total_time: f64,
    pub prep_time: f64,
    pub sense_time: f64,
    pub read_time: f64,
    pub dephasing_rate: f64,
}

impl MetrologyBudget {
    pub fn new(
        total_time: f64,
        prep_time: f64,
        sense_time: f64,
        read_time: f64,
        dephasing_rate: f64,
    ) -> Result<Self> {
        let budget = Self {
            total_time,
            prep_time,
            sense_time,
            read_time,
            dephasing_rate,
        };
        budget.validate()?;
        Ok(budget)
    }

    pub fn validate(&self) -> Result<()> {
        positive("T", self.total_time)?;
        positive("T_int", self.sense_time)?;
        for (name, v) in [
            ("T_prep", self.prep_time),
            ("T_read", self.read_time),
            ("Gamma", self.dephasing_rate),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(invalid(name, format!("must be nonnegative, got {v}")));
            }
        }
        Ok(())
    }

    pub fn cycle_time(&self) -> f64 {
        self.prep_time + self.sense_time + self.read_time
    }

    /// `M = T / (T_prep + T_int + T_read)`.
    pub fn shots(&self) -> f64 {
        self.total_time / self.cycle_time()
    }
}

/// GHZ-probe uncertainty of `h_z` under quadratic-in-time dephasing:
/// `√(T_prep + T_int + T_read) e^{Γ²N T_int²/2} / (2N T_int √T)`.
pub fn ghz_dephased_uncertainty(n_qubits: usize, budget: &MetrologyBudget) -> f64 {
    let n = n_qubits as f64;
    let g = budget.dephasing_rate;
    let ti = budget.sense_time;
    budget.cycle_time().sqrt() * (0.5 * g * g * n * ti * ti).exp()
        / (2.0 * n * ti * budget.total_time.sqrt())
}

/// Uncorrelated-probe uncertainty `e^{Γ²T_int²/2} / (2√(N T_int T))`.
pub fn separable_dephased_uncertainty(
    n_qubits: usize,
    dephasing_rate: f64,
    sense_time: f64,
    total_time: f64,
) -> f64 {
    let n = n_qubits as f64;
    (0.5 * (dephasing_rate * sense_time).powi(2)).exp()
        / (2.0 * (n * sense_time * total_time).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DephasingAnalysis {
    /// Best uncorrelated-probe uncertainty, `(2eΓ²)^{1/4} / (2√(NT))`.
    pub sql_min: f64,
    /// GHZ-probe uncertainty at the budget's sensing time.
    pub estimate: f64,
    /// Optimal `T_int = 1/√(2Γ²N)` when preparation and readout are free.
    pub zeno_sense_time: f64,
    /// Optimal `T_int = 1/√(Γ²N)` when preparation and readout dominate.
    pub prep_dominated_sense_time: f64,
    /// `(2eΓ²)^{1/4} / (2N^{3/4}√T)`.
    pub zeno_limit: f64,
    /// `Γ = 0`: optimal times become `T` and the limits become noiseless.
    pub noiseless: bool,
}

pub fn dephasing_analysis(n_qubits: usize, budget: &MetrologyBudget) -> Result<DephasingAnalysis> {
    budget.validate()?;
    if n_qubits == 0 {
        return Err(invalid("N", "at least one probe is required"));
    }
    let n = n_qubits as f64;
    let g = budget.dephasing_rate;
    let t = budget.total_time;
    let estimate = ghz_dephased_uncertainty(n_qubits, budget);
    if g == 0.0 {
        return Ok(DephasingAnalysis {
            sql_min: 1.0 / (2.0 * n.sqrt() * t),
            estimate,
            zeno_sense_time: t,
            prep_dominated_sense_time: t,
            zeno_limit: 1.0 / (2.0 * n * t),
            noiseless: true,
        });
    }
    let scale = (2.0 * E * g * g).powf(0.25);
    Ok(DephasingAnalysis {
        sql_min: scale / (2.0 * (n * t).sqrt()),
        estimate,
        zeno_sense_time: 1.0 / (g * (2.0 * n).sqrt()),
        prep_dominated_sense_time: 1.0 / (g * n.sqrt()),
        zeno_limit: scale / (2.0 * n.powf(0.75) * t.sqrt()),
        noiseless: false,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowRow {
    pub n_qubits: usize,
    /// `ΓC N^{7/6}`
    pub lhs: f64,
    /// `(√2/e) N^{1/2} - 1`
    pub rhs: f64,
    pub beats_sql: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DephasingWindow {
    pub gamma_c: f64,
    pub rows: Vec<WindowRow>,
    /// Even `N` for which the entangled scheme beats the dephased SQL.
    pub window: Vec<usize>,
}

impl DephasingWindow {
    pub fn bounds(&self) -> Option<(usize, usize)> {
        Some((*self.window.first()?, *self.window.last()?))
    }
}

/// Evaluates `ΓC N^{7/6} < (√2/e) N^{1/2} - 1` on even `N ∈ [2, n_max]`.
pub fn dephasing_window(gamma_c: f64, n_max: usize) -> Result<DephasingWindow> {
    if !(gamma_c >= 0.0 && gamma_c.is_finite()) {
        return Err(invalid(
            "gamma_c",
            format!("must be nonnegative, got {gamma_c}"),
        ));
    }
    if n_max < 2 {
        return Err(invalid("n_max", "the grid needs at least N = 2"));
    }
    let rows: Vec<WindowRow> = (2..=n_max)
        .step_by(2)
        .map(|n| {
            let x = n as f64;
            let lhs = gamma_c * x.powf(7.0 / 6.0);
            let rhs = std::f64::consts::SQRT_2 / E * x.sqrt() - 1.0;
            WindowRow {
                n_qubits: n,
                lhs,
                rhs,
                beats_sql: lhs < rhs,
            }
        })
        .collect();
    let window = rows
        .iter()
        .filter(|r| r.beats_sql)
        .map(|r| r.n_qubits)
        .collect();
    Ok(DephasingWindow {
        gamma_c,
        rows,
        window,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_probe_limits_coincide() {
        let l = limits(1, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(l.heisenberg, 1.0);
        assert_eq!(l.standard_quantum, 1.0);
    }

    #[test]
    fn ratio_and_reduction() {
        let l = limits(64, 9.0, 0.5, 3.0).unwrap();
        assert!((l.heisenberg / l.standard_quantum - 1.0 / 8.0).abs() < 1e-15);
        let full = limits(64, 1.0, 3.0, 3.0).unwrap();
        assert!((full.heisenberg_min_averaged - full.heisenberg_min).abs() < 1e-15);
    }

    #[test]
    fn zeno_expression_at_its_sensing_time() {
        let (n, g, t) = (40, 0.07, 100.0);
        let ti = 1.0 / (g * (2.0 * n as f64).sqrt());
        let budget = MetrologyBudget::new(t, 0.0, ti, 0.0, g).unwrap();
        let a = dephasing_analysis(n, &budget).unwrap();
        assert!((a.estimate - a.zeno_limit).abs() < 1e-14 * a.zeno_limit);
        assert!((a.zeno_sense_time - ti).abs() < 1e-15);
    }

    #[test]
    fn noiseless_fallback() {
        let (n, t, ti) = (10, 50.0, 0.2);
        let budget = MetrologyBudget::new(t, 0.0, ti, 0.0, 0.0).unwrap();
        let a = dephasing_analysis(n, &budget).unwrap();
        assert!(a.noiseless);
        let m = budget.shots();
        assert!((a.estimate - 1.0 / (2.0 * n as f64 * m.sqrt() * ti)).abs() < 1e-14);
    }

    #[test]
    fn window_empty_for_large_rate() {
        assert!(dephasing_window(10.0, 1000).unwrap().window.is_empty());
    }
}
