//! Lower bounds on the readout slope for a finite initial field.
//!
//! With ground-state overlaps `g_n` (weights `w_n = |g_n|²`, phases
//! `γ_n = arg g_n`), the survival probability is
//! `P = |Σ_n w_n e^{iγ_n} cos(h(N-2n)T)|²`, and for `w_0² > 1/2` and
//! `0 ≤ 2hNT ≤ π/2` its slope satisfies
//! `|∂P/∂h| ≥ N T (2w_0² - 1) sin(2hNT)`.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dicke::validate_qubits;
use crate::error::{invalid, Error, Result};

const NORMALIZATION_TOLERANCE: f64 = 1e-10;

/// Survival probability for overlaps `g_n`, `n = 0..=N/2`.
pub fn finite_field_probability(
    overlaps: &[Complex64],
    n_qubits: usize,
    field: f64,
    sense_time: f64,
) -> f64 {
    let n = n_qubits as f64;
    let amp: Complex64 = overlaps
        .iter()
        .enumerate()
        .map(|(k, g)| {
            let w = g.norm_sqr();
            Complex64::from_polar(w, g.arg()) * (field * (n - 2.0 * k as f64) * sense_time).cos()
        })
        .sum();
    amp.norm_sqr()
}

/// Closed-form `∂P/∂h` of [`finite_field_probability`].
pub fn finite_field_slope(
    overlaps: &[Complex64],
    n_qubits: usize,
    field: f64,
    sense_time: f64,
) -> f64 {
    let n = n_qubits as f64;
    let mut a = Complex64::new(0.0, 0.0);
    let mut da = Complex64::new(0.0, 0.0);
    for (k, g) in overlaps.iter().enumerate() {
        let c = Complex64::from_polar(g.norm_sqr(), g.arg());
        let f = (n - 2.0 * k as f64) * sense_time;
        a += c * (field * f).cos();
        da -= c * f * (field * f).sin();
    }
    2.0 * (a.conj() * da).re
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundCheck {
    /// `|∂P/∂h|`, from a five-point stencil.
    pub slope: f64,
    /// `N T (2w_0² - 1) sin(2hNT)`, or zero when trivial.
    pub bound: f64,
    /// `w_0² ≤ 1/2`: only `|∂P/∂h| ≥ 0` is claimed.
    pub trivial: bool,
    pub holds: bool,
    /// Slope of the single-overlap model `P = w_0 cos²(hNT)` against
    /// its bound `w_0 N T |sin(2hNT)|`.
    pub first_approach_holds: bool,
}

/// Checks the slope bound for one instance. Overlaps must be normalized
/// and `0 ≤ 2hNT ≤ π/2`.
pub fn uncertainty_bound_check(
    overlaps: &[Complex64],
    n_qubits: usize,
    field: f64,
    sense_time: f64,
) -> Result<BoundCheck> {
    validate_qubits(n_qubits)?;
    if overlaps.is_empty() {
        return Err(Error::Empty("overlap list"));
    }
    if overlaps.len() > n_qubits / 2 + 1 {
        return Err(Error::DimensionMismatch {
            expected: n_qubits / 2 + 1,
            found: overlaps.len(),
        });
    }
    let total: f64 = overlaps.iter().map(|g| g.norm_sqr()).sum();
    if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(invalid(
            "overlaps",
            format!("weights sum to {total}, not 1"),
        ));
    }
    if !(sense_time > 0.0) {
        return Err(invalid(
            "T_int",
            format!("must be positive, got {sense_time}"),
        ));
    }
    let nt = n_qubits as f64 * sense_time;
    let phase = 2.0 * field * nt;
    if !(0.0..=FRAC_PI_2).contains(&phase) {
        return Err(invalid(
            "field",
            format!("2hNT = {phase} lies outside [0, π/2]"),
        ));
    }

    let p = |h: f64| finite_field_probability(overlaps, n_qubits, h, sense_time);
    let step = 1e-3 / nt;
    let slope = ((p(field - 2.0 * step) - 8.0 * p(field - step) + 8.0 * p(field + step)
        - p(field + 2.0 * step))
        / (12.0 * step))
        .abs();
    // stencil truncation is O((step·NT)^4) relative; rounding O(ε/step)
    let slack = 1e-8 * nt;

    let w0 = overlaps[0].norm_sqr();
    let trivial = w0 * w0 <= 0.5;
    let bound = if trivial {
        0.0
    } else {
        nt * (2.0 * w0 * w0 - 1.0) * phase.sin()
    };

    let first = |h: f64| w0 * (h * nt).cos().powi(2);
    let first_slope = ((first(field - 2.0 * step) - 8.0 * first(field - step)
        + 8.0 * first(field + step)
        - first(field + 2.0 * step))
        / (12.0 * step))
        .abs();
    Ok(BoundCheck {
        slope,
        bound,
        trivial,
        holds: slope + slack >= bound,
        first_approach_holds: first_slope + slack >= w0 * nt * phase.sin().abs(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundSample {
    pub instances: usize,
    pub violations: usize,
    pub first_approach_violations: usize,
    /// Smallest `|∂P/∂h| / bound` observed.
    pub min_ratio: f64,
}

/// Random overlap vector with `w_0² > 1/2` and uniform phases.
pub fn random_overlaps<R: Rng>(rng: &mut R, n_qubits: usize) -> Vec<Complex64> {
    let len = n_qubits / 2 + 1;
    let w0_min = std::f64::consts::FRAC_1_SQRT_2;
    let w0 = loop {
        let w: f64 = rng.random_range(w0_min..=1.0);
        if w * w > 0.5 {
            break w;
        }
    };
    let mut rest: Vec<f64> = (1..len)
        .map(|_| -rng.random::<f64>().max(f64::MIN_POSITIVE).ln())
        .collect();
    let sum: f64 = rest.iter().sum();
    for r in &mut rest {
        *r *= (1.0 - w0) / sum;
    }
    std::iter::once(w0)
        .chain(rest)
        .map(|w| Complex64::from_polar(w.sqrt(), rng.random_range(0.0..TAU)))
        .collect()
}

/// Draws `count` instances from a seeded generator and counts violations.
pub fn sample_bound_checks(
    n_qubits: usize,
    sense_time: f64,
    count: usize,
    seed: u64,
) -> Result<BoundSample> {
    validate_qubits(n_qubits)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nt = n_qubits as f64 * sense_time;
    let mut out = BoundSample {
        instances: 0,
        violations: 0,
        first_approach_violations: 0,
        min_ratio: f64::INFINITY,
    };
    for _ in 0..count {
        let overlaps = random_overlaps(&mut rng, n_qubits);
        let field = rng.random_range(0.0..=FRAC_PI_2) / (2.0 * nt);
        let check = uncertainty_bound_check(&overlaps, n_qubits, field, sense_time)?;
        out.instances += 1;
        out.violations += usize::from(!check.holds);
        out.first_approach_violations += usize::from(!check.first_approach_holds);
        if check.bound > 0.0 {
            out.min_ratio = out.min_ratio.min(check.slope / check.bound);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_term_is_tight() {
        let (n, t, h) = (8, 0.3, 0.2);
        let g = [Complex64::new(1.0, 0.0)];
        let c = uncertainty_bound_check(&g, n, h, t).unwrap();
        let exact = n as f64 * t * (2.0 * h * n as f64 * t).sin();
        assert!((c.slope - exact).abs() < 1e-9 * exact);
        assert!((c.bound - exact).abs() < 1e-12);
        assert!(c.holds && !c.trivial);
    }

    #[test]
    fn low_overlap_is_trivial() {
        let a = (0.5f64).sqrt();
        let g = [Complex64::new(a, 0.0), Complex64::new(0.0, a)];
        let c = uncertainty_bound_check(&g, 4, 0.1, 0.5).unwrap();
        assert!(c.trivial);
        assert_eq!(c.bound, 0.0);
    }

    #[test]
    fn preconditions_rejected() {
        let g = [Complex64::new(0.9, 0.0)];
        assert!(uncertainty_bound_check(&g, 4, 0.1, 0.5).is_err());
        let g = [Complex64::new(1.0, 0.0)];
        assert!(uncertainty_bound_check(&g, 4, 2.0, 0.5).is_err());
    }
}
