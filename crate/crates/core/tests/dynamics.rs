use ghz_adiabatic::dicke::parity_operator;
use ghz_adiabatic::dynamics::{
    evolve, locate_ramp_optimum, propagate, scan_ramp_time, sense, Integrator, Method, Schedule,
    ScheduleKind, Segment, StartState,
};
use ghz_adiabatic::{Axis, DickeState};

#[test]
fn constant_hold_matches_closed_form_sensing() {
    let n = 16;
    let j = 1.0 / n as f64;
    let start = DickeState::strong_field_ground(n).unwrap();
    for (t, hz) in [(0.3, 0.05), (2.7, -0.4), (11.0, 1.3)] {
        let hold = Schedule::new(vec![Segment::constant(t, 0.0).unwrap()]).unwrap();
        let a = propagate(&start, &hold, j, hz, &Integrator::default()).unwrap();
        let b = sense(&start, j, hz, t);
        let diff = (a.to_axis(Axis::X).amplitudes() - b.to_axis(Axis::X).amplitudes()).norm();
        assert!(diff < 1e-12, "diff {diff}");
    }
}

#[test]
fn step_doubling_shrinks_the_error() {
    let n = 20;
    let s = Schedule::cosine_sine(1.0, 6.0, 0.0).unwrap();
    let start = DickeState::strong_field_ground(n).unwrap();
    let reference = propagate(
        &start,
        &s,
        1.0 / n as f64,
        0.0,
        &Integrator::fixed(Method::CommutatorFree4, 4000),
    )
    .unwrap();
    let mut last = f64::INFINITY;
    for steps in [8, 16, 32, 64, 128] {
        let out = propagate(
            &start,
            &s,
            1.0 / n as f64,
            0.0,
            &Integrator::fixed(Method::Midpoint, steps),
        )
        .unwrap();
        let err = (out.amplitudes() - reference.amplitudes()).norm();
        assert!(err < last, "{steps} steps: {err} !< {last}");
        last = err;
    }
}

#[test]
fn default_integrator_reports_convergence() {
    let n = 10;
    let s = Schedule::cosine_sine(1.0, 7.5, 0.0).unwrap();
    let start = DickeState::strong_field_ground(n).unwrap();
    let p = evolve(&start, &s, 0.1, 0.0, &Integrator::default()).unwrap();
    assert!(p.change.unwrap() < 1e-9);
    assert!(p.steps_per_segment >= 10_000);
}

#[test]
fn longitudinal_field_mixes_parity() {
    let n = 8;
    let start = DickeState::strong_field_ground(n).unwrap();
    let parity = parity_operator(start.basis());
    let s = Schedule::linear(1.0, 2.0, 0.5).unwrap();
    let out = propagate(
        &start,
        &s,
        0.125,
        0.3,
        &Integrator::fixed(Method::CommutatorFree4, 200),
    )
    .unwrap();
    assert!((out.norm() - 1.0).abs() < 1e-12);
    assert!((out.expectation(&parity).unwrap().re - 1.0).abs() > 1e-3);
}

#[test]
fn scan_integrators_agree_with_a_fine_reference() {
    let n = 30;
    let unit = 1.0 / (2.0 * n as f64);
    let grid: Vec<f64> = [300.0, 430.0, 520.0].iter().map(|t| t * unit).collect();
    let scan = |i: &Integrator| {
        scan_ramp_time(
            n,
            2.0 * unit,
            1.0,
            &grid,
            ScheduleKind::CosineSine,
            StartState::StrongFieldProjected,
            i,
        )
        .unwrap()
    };
    let reference = scan(&Integrator::fixed(Method::CommutatorFree4, 8000));
    for integrator in [
        Integrator::fourth_order_for(520.0).unchecked(),
        Integrator::default(),
    ] {
        for (a, b) in scan(&integrator).rows.iter().zip(&reference.rows) {
            assert!((a.fidelity_to_ghz - b.fidelity_to_ghz).abs() < 1e-7);
            assert!((a.fidelity_to_initial - b.fidelity_to_initial).abs() < 1e-7);
        }
    }
}

#[test]
fn ten_qubit_scan_has_an_optimum_near_150() {
    let o = locate_ramp_optimum(10, 1.0, (100.0, 200.0), None).unwrap();
    let scaled: Vec<f64> = o.scan.optima().map(|r| r.ramp_time * 20.0).collect();
    assert!(
        scaled.iter().any(|t| (140.0..=160.0).contains(t)),
        "{scaled:?}"
    );
    let best = o.selected.unwrap();
    assert!((best.fidelity_to_ghz - 0.967).abs() < 0.01);
}
