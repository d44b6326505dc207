use std::f64::consts::{FRAC_PI_2, PI};

use ghz_adiabatic::dicke::{build_collective_operators, parity_operator};
use ghz_adiabatic::dynamics::{evolve, Integrator, Method, ProtocolParams, Schedule};
use ghz_adiabatic::metrology::{
    calibrate_offset, dephasing_analysis, dephasing_window, field_uncertainty, finite_field_slope,
    ghz_dephased_uncertainty, ideal_probability, ideal_slope, projection_std, random_overlaps,
    sz_readout, sz_readout_closed_form, tint_sweep, uncertainty, uncertainty_bound_check,
    MetrologyBudget, OffsetPolicy, SweepSettings,
};
use ghz_adiabatic::numeric::golden_section_min;
use ghz_adiabatic::DickeState;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn even_n(lo: usize, hi: usize) -> impl Strategy<Value = usize> {
    (lo / 2..=hi / 2).prop_map(|k| 2 * k)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn norm_and_parity_conserved_without_longitudinal_field(
        n in even_n(2, 40),
        h0 in 0.1f64..3.0,
        ta in 0.1f64..4.0,
        ti in 0.0f64..2.0,
        linear in any::<bool>(),
        cf4 in any::<bool>(),
    ) {
        let s = if linear { Schedule::linear(h0, ta, ti) } else { Schedule::cosine_sine(h0, ta, ti) }.unwrap();
        let method = if cf4 { Method::CommutatorFree4 } else { Method::Midpoint };
        let start = DickeState::strong_field_ground(n).unwrap();
        let parity = parity_operator(start.basis());
        let out = evolve(&start, &s, 1.0 / n as f64, 0.0, &Integrator::fixed(method, 64)).unwrap().state;
        prop_assert!((out.norm() - 1.0).abs() <= 1e-12);
        prop_assert!((out.expectation(&parity).unwrap().re - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn collective_spin_algebra(n in even_n(2, 60)) {
        let s = build_collective_operators(n).unwrap();
        let (x, y, z) = (s.sx.matrix(), s.sy.matrix(), s.sz.matrix());
        let i = Complex64::new(0.0, 1.0);
        prop_assert!(((x * y - y * x) - z * i).norm() < 1e-9);
        prop_assert!(((y * z - z * y) - x * i).norm() < 1e-9);
        let j = n as f64 / 2.0;
        let casimir = x * x + y * y + z * z;
        let expected = nalgebra::DMatrix::<Complex64>::identity(n + 1, n + 1) * Complex64::new(j * (j + 1.0), 0.0);
        prop_assert!((casimir - expected).norm() < 1e-8 * j * j);
    }

    #[test]
    fn calibrated_offset_maximizes_ideal_slope(
        n in even_n(2, 100),
        k in 1u32..200,
        known in 0.0f64..5.0,
        seed in any::<u64>(),
    ) {
        use rand::Rng;
        let t = k as f64 / (2.0 * n as f64);
        let total = known + calibrate_offset(known, n, t, OffsetPolicy::SmallestBranch).unwrap();
        let best = ideal_slope(n, t, total).abs();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..100 {
            let h = rng.random_range(0.0..10.0);
            prop_assert!(ideal_slope(n, t, h).abs() <= best * (1.0 + 1e-12));
        }
        let phase = (2.0 * total * n as f64 * t).rem_euclid(PI);
        prop_assert!((phase - FRAC_PI_2).abs() < 1e-9);
    }

    #[test]
    fn projection_readout_reaches_heisenberg_limit(n in even_n(2, 200), t in 0.01f64..10.0, m in 1.0f64..1e4) {
        let h = calibrate_offset(0.0, n, t, OffsetPolicy::SmallestBranch).unwrap();
        let p = ideal_probability(n, t, h);
        let d = field_uncertainty(projection_std(p), ideal_slope(n, t, h), m).unwrap();
        let hl = 1.0 / (2.0 * n as f64 * m.sqrt() * t);
        prop_assert!(((d - hl) / hl).abs() < 1e-6);
        // ω = 2h: the frequency uncertainty is twice the field one
        let dw = uncertainty(projection_std(p), 0.5 * ideal_slope(n, t, h), m).unwrap();
        prop_assert!((dw - 2.0 * d).abs() < 1e-12 * dw);
    }

    #[test]
    fn heisenberg_index_never_exceeds_one(
        n in even_n(4, 20),
        ta in 20.0f64..300.0,
        h0 in 0.5f64..2.5,
    ) {
        let p = ProtocolParams::natural(n, h0, ta, 0.0, 0.0).unwrap();
        let grid: Vec<f64> = [1.0, 5.0, 21.0, 77.0, 199.0].iter().map(|k| k / (2.0 * n as f64)).collect();
        let s = tint_sweep(&p, &grid, &SweepSettings::default(), &Integrator::fourth_order_for(ta)).unwrap();
        for r in &s.rows {
            prop_assert!(r.p_index >= 0.0 && r.p_index <= 1.0 + 1e-6, "p = {}", r.p_index);
        }
    }

    #[test]
    fn dephasing_windows_shrink_with_rate(a in 0.0f64..0.1, b in 0.0f64..0.1) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let wl = dephasing_window(lo, 2000).unwrap().window;
        let wh = dephasing_window(hi, 2000).unwrap().window;
        prop_assert!(wh.iter().all(|n| wl.contains(n)));
    }

    #[test]
    fn zeno_optimum_matches_golden_section(n in 2usize..500, g in 1e-4f64..1.0, t in 1.0f64..1e6) {
        let a = dephasing_analysis(n, &MetrologyBudget::new(t, 0.0, 1.0, 0.0, g).unwrap()).unwrap();
        let z = a.zeno_sense_time;
        let f = |ti: f64| ghz_dephased_uncertainty(n, &MetrologyBudget::new(t, 0.0, ti, 0.0, g).unwrap()).ln();
        let (x, _) = golden_section_min(f, 1e-2 * z, 10.0 * z, 1e-12 * z);
        prop_assert!(((x - z) / z).abs() < 1e-6);
    }

    #[test]
    fn bound_holds_and_stencil_matches_analytic_slope(n in even_n(2, 120), k in 1u32..200, seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = k as f64 / (2.0 * n as f64);
        let g = random_overlaps(&mut rng, n);
        let nt = n as f64 * t;
        let h = rng.random_range(0.0..=FRAC_PI_2) / (2.0 * nt);
        let c = uncertainty_bound_check(&g, n, h, t).unwrap();
        let exact = finite_field_slope(&g, n, h, t).abs();
        prop_assert!((c.slope - exact).abs() <= 1e-7 * nt);
        let w0 = g[0].norm_sqr();
        prop_assert!(exact + 1e-9 * nt >= nt * (2.0 * w0 * w0 - 1.0) * (2.0 * h * nt).sin());
        prop_assert!(c.holds && c.first_approach_holds);
    }

    #[test]
    fn sz_state_evaluation_matches_closed_form(
        n in even_n(2, 60),
        h in 0.0f64..0.2,
        t in 0.05f64..2.0,
        alpha in 0.0f64..std::f64::consts::TAU,
    ) {
        let exact = sz_readout(n, h, t, alpha, 1.0, 1e-6).unwrap();
        let closed = sz_readout_closed_form(n, h, t, alpha, 1.0).unwrap();
        prop_assert!((exact.mean - closed.mean).abs() < 1e-10);
        prop_assert!((exact.std_dev - closed.std_dev).abs() < 1e-10);
        let scale = (n as f64).sqrt() * n as f64 * t;
        prop_assert!((exact.slope - closed.slope).abs() < 1e-6 * scale);
    }
}
