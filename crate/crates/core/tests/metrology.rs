use std::f64::consts::{E, FRAC_PI_2, SQRT_2};

use ghz_adiabatic::dynamics::{Integrator, ProtocolParams, StartState};
use ghz_adiabatic::metrology::{
    adiabatic_time_estimate, calibrate_offset, dephasing_analysis, dephasing_window,
    forward_difference, ideal_probability, limits, sz_readout_closed_form,
    sz_small_angle_uncertainty, time_budget, tint_sweep, BudgetVariant, MetrologyBudget,
    OffsetPolicy, SweepSettings,
};

#[test]
fn forward_difference_of_ideal_probability() {
    let (n, t) = (10, 0.35);
    let h = calibrate_offset(0.0, n, t, OffsetPolicy::SmallestBranch).unwrap();
    let d = forward_difference(
        ideal_probability(n, t, h + 1e-10),
        ideal_probability(n, t, h),
        1e-10,
    )
    .unwrap();
    let nt = n as f64 * t;
    assert!(((d.slope.abs() - nt) / nt).abs() < 1e-4);
    assert!(!d.cancellation);
    let flat = forward_difference(0.25, 0.25, 1e-10).unwrap();
    assert_eq!(flat.slope, 0.0);
    assert!(flat.cancellation);
}

#[test]
fn adiabatic_protocol_reaches_unit_index() {
    let n = 4;
    let mut p = ProtocolParams::natural(n, 2.0, 8000.0, 0.0, 0.0).unwrap();
    p.start = StartState::GroundState;
    let grid: Vec<f64> = [1.0, 3.0, 9.0, 27.0, 81.0]
        .iter()
        .map(|k| k / (2.0 * n as f64))
        .collect();
    let s = tint_sweep(
        &p,
        &grid,
        &SweepSettings::default(),
        &Integrator::fourth_order_for(8000.0),
    )
    .unwrap();
    assert!((s.p_mean - 1.0).abs() < 1e-3, "p = {}", s.p_mean);
    assert_eq!(s.divergent, 0);
}

#[test]
fn fixed_operating_point_is_a_smallest_branch_for_odd_grid_points() {
    let n = 10;
    let p = ProtocolParams::natural(n, 1.0, 150.0, 0.0, 0.0).unwrap();
    let grid: Vec<f64> = [1.0, 3.0, 5.0]
        .iter()
        .map(|k| k / (2.0 * n as f64))
        .collect();
    let fixed = SweepSettings {
        offset: OffsetPolicy::FixedTotal(FRAC_PI_2),
        ..SweepSettings::default()
    };
    let s = tint_sweep(&p, &grid, &fixed, &Integrator::default()).unwrap();
    for r in &s.rows {
        let phase = 2.0 * r.total_field * n as f64 * r.sense_time;
        assert!(((phase - FRAC_PI_2).rem_euclid(std::f64::consts::PI)).abs() < 1e-12);
    }
}

#[test]
fn single_probe_and_ratio_limits() {
    let l = limits(1, 1.0, 1.0, 1.0).unwrap();
    assert_eq!((l.heisenberg, l.standard_quantum), (1.0, 1.0));
    let l = limits(49, 4.0, 0.2, 5.0).unwrap();
    assert!((l.heisenberg / l.standard_quantum - 1.0 / 7.0).abs() < 1e-15);
}

#[test]
fn weak_dephasing_approaches_noiseless_estimate() {
    let (n, t, ti, tp) = (20, 100.0, 0.3, 0.5);
    let clean = dephasing_analysis(n, &MetrologyBudget::new(t, tp, ti, tp, 0.0).unwrap()).unwrap();
    let weak = dephasing_analysis(n, &MetrologyBudget::new(t, tp, ti, tp, 1e-9).unwrap()).unwrap();
    assert!(((weak.estimate - clean.estimate) / clean.estimate).abs() < 1e-12);
    let m = t / (ti + 2.0 * tp);
    assert!((clean.estimate - 1.0 / (2.0 * n as f64 * m.sqrt() * ti)).abs() < 1e-14);
}

#[test]
fn noiseless_window_starts_where_rhs_turns_positive() {
    let threshold = (E / SQRT_2).powi(2);
    let expected = (2..).step_by(2).find(|&n| n as f64 > threshold).unwrap();
    let w = dephasing_window(0.0, 100).unwrap();
    assert_eq!(w.window.first(), Some(&expected));
    assert_eq!(w.window.len(), 50 - expected / 2 + 1);
}

#[test]
fn sz_readout_small_angle_limit() {
    let (n, t, m) = (20, 0.5, 9.0);
    let h = 1e-5;
    let r = sz_readout_closed_form(n, h, t, 0.0, m).unwrap();
    let approx = sz_small_angle_uncertainty(n, h, t, 0.0, m);
    assert!(((r.delta_h - approx) / approx).abs() < 1e-6);
}

#[test]
fn budget_scalings() {
    let b = time_budget(1000, 1.0, 100.0, 0.5, BudgetVariant::SingleShot).unwrap();
    assert!((b.eta_prime - 0.5).abs() < 1e-15);
    assert!((b.eta - 0.5 * 1000f64.sqrt()).abs() < 1e-9);
    let a = time_budget(1000, 1.0, 100.0, 0.0, BudgetVariant::Averaged).unwrap();
    assert!(!a.beats_sql || a.eta > 1.0);
    let e = adiabatic_time_estimate(2.0, 0.95, 64).unwrap();
    assert!((e.prep_time_2jn - 2.0 * e.c_bar * 2.0 * 16.0).abs() < 1e-9);
    assert!((e.jn_c - 2.0 * e.c_bar).abs() < 1e-15);
}
