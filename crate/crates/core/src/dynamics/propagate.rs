//! Time stepping under `H(t) = -2J S_Z² - 2h_x(t) S_X - 2h_z S_Z`.
//!
//! Each step applies an exact exponential of a frozen Hamiltonian, obtained
//! from a tridiagonal eigen-decomposition. For `h_z = 0` the two parity
//! sectors of the X basis are propagated separately; otherwise the full
//! Z-basis matrix is used.

use num_complex::Complex64;

use crate::dicke::{ladder_coefficients, Axis, DickeState};
use crate::error::{invalid, Error, Result};
use crate::model::{Sector, SectorBlock};
use crate::tridiag::TridiagonalEigen;

use super::schedule::{Schedule, Segment};

const NORM_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Method {
    /// Exponential midpoint rule (second order).
    #[default]
    Midpoint,
    /// Fourth-order commutator-free Magnus scheme with two exponentials per
    /// step at the Gauss nodes.
    CommutatorFree4,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integrator {
    pub method: Method,
    pub steps_per_segment: usize,
    /// Doubling stops once the largest change of an X-basis population is
    /// below this value. `None` runs exactly `steps_per_segment` steps.
    pub tolerance: Option<f64>,
    pub max_steps_per_segment: usize,
}

impl Default for Integrator {
    fn default() -> Self {
        Self {
            method: Method::Midpoint,
            steps_per_segment: 10_000,
            tolerance: Some(1e-9),
            max_steps_per_segment: 320_000,
        }
    }
}

impl Integrator {
    /// A single pass with a fixed number of steps and no convergence check.
    pub fn fixed(method: Method, steps_per_segment: usize) -> Self {
        Self {
            method,
            steps_per_segment,
            tolerance: None,
            max_steps_per_segment: steps_per_segment,
        }
    }

    /// Fourth-order stepping sized for a ramp of `scaled_ramp_time` units of
    /// `(2JN²)^{-1}`, about one step per four units, with the default
    /// convergence check.
    pub fn fourth_order_for(scaled_ramp_time: f64) -> Self {
        let steps = ((scaled_ramp_time / 4.0).ceil() as usize).max(64);
        Self {
            method: Method::CommutatorFree4,
            steps_per_segment: steps,
            tolerance: Some(1e-9),
            max_steps_per_segment: steps << 6,
        }
    }

    /// The same integrator without the convergence check.
    pub fn unchecked(self) -> Self {
        Self::fixed(self.method, self.steps_per_segment)
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps_per_segment == 0 {
            return Err(invalid(
                "steps",
                "at least one step per segment is required",
            ));
        }
        if self.max_steps_per_segment < self.steps_per_segment {
            return Err(invalid(
                "max_steps",
                "step cap is below the initial step count",
            ));
        }
        if let Some(tol) = self.tolerance {
            if !(tol > 0.0) {
                return Err(invalid("tolerance", format!("must be positive, got {tol}")));
            }
        }
        Ok(())
    }
}

/// Outcome of a converged propagation.
#[derive(Clone, Debug)]
pub struct Propagation {
    pub state: DickeState,
    pub steps_per_segment: usize,
    /// Population change between the last two step counts, if checked.
    pub change: Option<f64>,
}

// weights of the earlier exponential on the two Gauss nodes
const CF4_EARLY: f64 = 0.25 + 0.288_675_134_594_812_9;
const CF4_LATE: f64 = 0.25 - 0.288_675_134_594_812_9;
const GAUSS_OFFSET: f64 = 0.288_675_134_594_812_9;

/// The sequence of frozen-field exponentials `(h_x, dt)` realizing one
/// segment, in the order they act on the state.
fn segment_plan(seg: &Segment, steps: usize, method: Method, out: &mut Vec<(f64, f64)>) {
    if seg.is_constant() {
        out.push((seg.field_start, seg.duration));
        return;
    }
    let dt = seg.duration / steps as f64;
    for k in 0..steps {
        let t = k as f64 * dt;
        match method {
            Method::Midpoint => out.push((seg.field_at(t + 0.5 * dt), dt)),
            Method::CommutatorFree4 => {
                let h1 = seg.field_at(t + (0.5 - GAUSS_OFFSET) * dt);
                let h2 = seg.field_at(t + (0.5 + GAUSS_OFFSET) * dt);
                out.push((2.0 * (CF4_EARLY * h1 + CF4_LATE * h2), 0.5 * dt));
                out.push((2.0 * (CF4_LATE * h1 + CF4_EARLY * h2), 0.5 * dt));
            }
        }
    }
}

fn schedule_plan(schedule: &Schedule, steps: usize, method: Method) -> Vec<(f64, f64)> {
    let mut plan = Vec::new();
    for seg in schedule.segments() {
        segment_plan(seg, steps, method, &mut plan);
    }
    plan
}

enum Kernel {
    Sectors { even: SectorBlock, odd: SectorBlock },
    Z { base: Vec<f64>, ladder: Vec<f64> },
}

/// Reusable stepping workspace.
struct Stepper {
    kernel: Kernel,
    eig: TridiagonalEigen,
    diag: Vec<f64>,
    off: Vec<f64>,
}

enum Amplitudes {
    Sectors {
        even: Vec<Complex64>,
        odd: Vec<Complex64>,
    },
    Z(Vec<Complex64>),
}

impl Stepper {
    fn new(n_qubits: usize, coupling: f64, hz: f64) -> Self {
        let kernel = if hz == 0.0 {
            Kernel::Sectors {
                even: SectorBlock::new(n_qubits, coupling, Sector::Even),
                odd: SectorBlock::new(n_qubits, coupling, Sector::Odd),
            }
        } else {
            let j = n_qubits as f64 / 2.0;
            let base = (0..=n_qubits)
                .map(|k| {
                    let m = j - k as f64;
                    -2.0 * coupling * m * m - 2.0 * hz * m
                })
                .collect();
            Kernel::Z {
                base,
                ladder: ladder_coefficients(n_qubits),
            }
        };
        Self {
            kernel,
            eig: TridiagonalEigen::default(),
            diag: Vec::new(),
            off: Vec::new(),
        }
    }

    fn load(&self, state: &DickeState) -> Amplitudes {
        match self.kernel {
            Kernel::Sectors { .. } => {
                let x = state.to_axis(Axis::X);
                let a = x.amplitudes();
                Amplitudes::Sectors {
                    even: a.iter().step_by(2).copied().collect(),
                    odd: a.iter().skip(1).step_by(2).copied().collect(),
                }
            }
            Kernel::Z { .. } => Amplitudes::Z(
                state
                    .to_axis(Axis::Z)
                    .amplitudes()
                    .iter()
                    .copied()
                    .collect(),
            ),
        }
    }

    fn store(&self, amps: &Amplitudes, template: &DickeState) -> Result<DickeState> {
        let basis = template.basis();
        let out = match amps {
            Amplitudes::Sectors { even, odd } => {
                let dim = basis.dim();
                let v = nalgebra::DVector::from_fn(dim, |k, _| {
                    if k % 2 == 0 {
                        even[k / 2]
                    } else {
                        odd[k / 2]
                    }
                });
                DickeState::new(basis.with_axis(Axis::X), v)?
            }
            Amplitudes::Z(z) => DickeState::new(
                basis.with_axis(Axis::Z),
                nalgebra::DVector::from_column_slice(z),
            )?,
        };
        Ok(out.to_axis(basis.axis()))
    }

    /// Applies `exp(-i H(h) dt)`; a negative `dt` applies the inverse.
    fn apply(&mut self, amps: &mut Amplitudes, h: f64, dt: f64) -> Result<()> {
        match (&self.kernel, amps) {
            (Kernel::Sectors { even, odd }, Amplitudes::Sectors { even: ve, odd: vo }) => {
                for (block, v) in [(even, ve), (odd, vo)] {
                    if v.is_empty() || v.iter().all(|a| *a == Complex64::new(0.0, 0.0)) {
                        continue;
                    }
                    block.diagonal_into(h, &mut self.diag);
                    self.eig.compute(&self.diag, &block.off)?;
                    self.eig.apply_exp(v, dt);
                }
            }
            (Kernel::Z { base, ladder }, Amplitudes::Z(v)) => {
                self.off.clear();
                self.off.extend(ladder.iter().map(|c| -h * c));
                self.eig.compute(base, &self.off)?;
                self.eig.apply_exp(v, dt);
            }
            _ => unreachable!("amplitude layout always matches its kernel"),
        }
        Ok(())
    }
}

fn check_normalized(state: &DickeState) -> Result<()> {
    let norm = state.norm();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized { norm });
    }
    Ok(())
}

fn run_plan(
    stepper: &mut Stepper,
    state: &DickeState,
    schedule: &Schedule,
    steps: usize,
    method: Method,
    adjoint: bool,
) -> Result<DickeState> {
    let plan = schedule_plan(schedule, steps, method);
    let mut amps = stepper.load(state);
    if adjoint {
        for &(h, dt) in plan.iter().rev() {
            stepper.apply(&mut amps, h, -dt)?;
        }
    } else {
        for &(h, dt) in &plan {
            stepper.apply(&mut amps, h, dt)?;
        }
    }
    stepper.store(&amps, state)
}

fn max_population_change(a: &DickeState, b: &DickeState) -> f64 {
    let pa = a.to_axis(Axis::X).populations();
    let pb = b.to_axis(Axis::X).populations();
    pa.iter()
        .zip(&pb)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn evolve_impl(
    state: &DickeState,
    schedule: &Schedule,
    coupling: f64,
    hz: f64,
    integrator: &Integrator,
    adjoint: bool,
) -> Result<Propagation> {
    integrator.validate()?;
    check_normalized(state)?;
    if !(coupling > 0.0) {
        return Err(invalid(
            "J",
            format!("coupling must be positive, got {coupling}"),
        ));
    }
    let mut stepper = Stepper::new(state.basis().n_qubits(), coupling, hz);
    let mut steps = integrator.steps_per_segment;
    let mut current = run_plan(
        &mut stepper,
        state,
        schedule,
        steps,
        integrator.method,
        adjoint,
    )?;
    let Some(tolerance) = integrator.tolerance else {
        return Ok(Propagation {
            state: current,
            steps_per_segment: steps,
            change: None,
        });
    };
    let mut change = f64::INFINITY;
    while steps * 2 <= integrator.max_steps_per_segment {
        steps *= 2;
        let refined = run_plan(
            &mut stepper,
            state,
            schedule,
            steps,
            integrator.method,
            adjoint,
        )?;
        change = max_population_change(&current, &refined);
        current = refined;
        if change < tolerance {
            return Ok(Propagation {
                state: current,
                steps_per_segment: steps,
                change: Some(change),
            });
        }
    }
    Err(Error::NonConvergence {
        steps,
        change,
        tolerance,
    })
}

/// Propagates `state` through `schedule` with a constant longitudinal field
/// `hz`. The result is expressed in the input's basis.
pub fn evolve(
    state: &DickeState,
    schedule: &Schedule,
    coupling: f64,
    hz: f64,
    integrator: &Integrator,
) -> Result<Propagation> {
    evolve_impl(state, schedule, coupling, hz, integrator, false)
}

/// Like [`evolve`], but returns only the final state.
pub fn propagate(
    state: &DickeState,
    schedule: &Schedule,
    coupling: f64,
    hz: f64,
    integrator: &Integrator,
) -> Result<DickeState> {
    Ok(evolve(state, schedule, coupling, hz, integrator)?.state)
}

/// Applies the adjoint `U†` of the discretized schedule propagator.
pub fn propagate_adjoint(
    state: &DickeState,
    schedule: &Schedule,
    coupling: f64,
    hz: f64,
    integrator: &Integrator,
) -> Result<DickeState> {
    Ok(evolve_impl(state, schedule, coupling, hz, integrator, true)?.state)
}

/// Exact evolution for time `t` at `h_x = 0`, where `H` is diagonal in the
/// Z basis: amplitude `k` picks up `exp(-i E_k t)` with
/// `E_k = -2J m_k² - 2h_z m_k`.
pub fn sense(state: &DickeState, coupling: f64, hz: f64, t: f64) -> DickeState {
    let z = state.to_axis(Axis::Z);
    let basis = z.basis();
    let mut amps = z.into_amplitudes();
    for (k, a) in amps.iter_mut().enumerate() {
        let m = basis.m(k);
        let e = -2.0 * coupling * m * m - 2.0 * hz * m;
        *a *= Complex64::from_polar(1.0, -e * t);
    }
    DickeState::new(basis, amps)
        .expect("dimension unchanged")
        .to_axis(state.basis().axis())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dicke::DickeBasis;

    #[test]
    fn constant_zero_field_is_a_phase_on_z_states() {
        let n = 6;
        let state = DickeState::basis_state(DickeBasis::new(n, Axis::Z).unwrap(), 0).unwrap();
        let schedule = Schedule::new(vec![Segment::constant(0.7, 0.0).unwrap()]).unwrap();
        let j = 0.25;
        let out = propagate(
            &state,
            &schedule,
            j,
            0.0,
            &Integrator::fixed(Method::Midpoint, 4),
        )
        .unwrap();
        let e = -2.0 * j * 9.0;
        let expected = Complex64::from_polar(1.0, -e * 0.7);
        assert!((out.amplitudes()[0] - expected).norm() < 1e-12);
    }

    #[test]
    fn adjoint_undoes_forward() {
        let n = 8;
        let state = DickeState::strong_field_ground(n).unwrap();
        let schedule = Schedule::cosine_sine(1.3, 2.0, 0.5).unwrap();
        let integ = Integrator::fixed(Method::CommutatorFree4, 50);
        for hz in [0.0, 0.07] {
            let fwd = propagate(&state, &schedule, 0.125, hz, &integ).unwrap();
            let back = propagate_adjoint(&fwd, &schedule, 0.125, hz, &integ).unwrap();
            assert!((back.fidelity(&state).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn non_normalized_input_rejected() {
        let basis = DickeBasis::new(2, Axis::X).unwrap();
        let v = nalgebra::DVector::from_element(3, Complex64::new(1.0, 0.0));
        let state = DickeState::new(basis, v).unwrap();
        let schedule = Schedule::linear(1.0, 1.0, 0.0).unwrap();
        let err = propagate(&state, &schedule, 0.5, 0.0, &Integrator::default()).unwrap_err();
        assert!(matches!(err, Error::NotNormalized { .. }));
    }

    #[test]
    fn step_cap_reports_nonconvergence() {
        let state = DickeState::strong_field_ground(10).unwrap();
        let schedule = Schedule::cosine_sine(1.0, 1.0, 0.0).unwrap();
        let integ = Integrator {
            method: Method::Midpoint,
            steps_per_segment: 2,
            tolerance: Some(1e-14),
            max_steps_per_segment: 8,
        };
        let err = propagate(&state, &schedule, 0.1, 0.0, &integ).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { steps: 8, .. }));
    }

    #[test]
    fn fourth_order_scheme_converges_faster() {
        let n = 10;
        let state = DickeState::strong_field_ground(n).unwrap();
        let schedule = Schedule::cosine_sine(1.0, 3.0, 0.0).unwrap();
        let reference = propagate(
            &state,
            &schedule,
            0.1,
            0.0,
            &Integrator::fixed(Method::CommutatorFree4, 2000),
        )
        .unwrap();
        let err = |method, steps| {
            let s = propagate(
                &state,
                &schedule,
                0.1,
                0.0,
                &Integrator::fixed(method, steps),
            )
            .unwrap();
            (s.amplitudes() - reference.amplitudes()).norm()
        };
        let (m1, m2) = (err(Method::Midpoint, 16), err(Method::Midpoint, 32));
        let (c1, c2) = (
            err(Method::CommutatorFree4, 16),
            err(Method::CommutatorFree4, 32),
        );
        assert!(
            ((m1 / m2).log2() - 2.0).abs() < 0.3,
            "midpoint order {}",
            (m1 / m2).log2()
        );
        assert!(
            ((c1 / c2).log2() - 4.0).abs() < 0.3,
            "cf4 order {}",
            (c1 / c2).log2()
        );
        assert!(c2 < m2);
    }
}
