mod common;

use common::QubitSpace;
use ghz_adiabatic::model::parity_resolved_spectrum;
use ghz_adiabatic::ModelParams;
use nalgebra::SymmetricEigen;
use num_complex::Complex64;

#[test]
fn sector_eigenpairs_solve_the_qubit_hamiltonian() {
    for n in [2, 4, 6, 8] {
        let space = QubitSpace::new(n);
        for hx in [0.0, 0.4, 1.0, 2.5] {
            let params = ModelParams::natural(n, hx, 0.0).unwrap();
            let spectrum = parity_resolved_spectrum(&params).unwrap();
            let h = space
                .hamiltonian(params.coupling, hx, 0.0)
                .map(|x| Complex64::new(x, 0.0));
            for pair in spectrum.even.iter().chain(&spectrum.odd) {
                let v = space.embed(&pair.state);
                let residual = (&h * &v - &v * Complex64::new(pair.energy, 0.0)).norm();
                assert!(residual < 1e-10, "N={n} hx={hx}: {residual}");
            }
            let full = SymmetricEigen::new(space.hamiltonian(params.coupling, hx, 0.0));
            let ground = full
                .eigenvalues
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min);
            assert!(
                (spectrum.even[0].energy - ground).abs() < 1e-10,
                "N={n} hx={hx}"
            );
        }
    }
}

#[test]
fn overlap_matches_embedded_product_state() {
    let n = 6;
    let space = QubitSpace::new(n);
    let plus = space.all_plus_x();
    let spectrum = parity_resolved_spectrum(&ModelParams::natural(n, 0.8, 0.0).unwrap()).unwrap();
    for (pair, g) in spectrum.even.iter().zip(&spectrum.overlaps) {
        let direct = space.embed(&pair.state).dotc(&plus);
        assert!((direct - g).norm() < 1e-12);
    }
}
