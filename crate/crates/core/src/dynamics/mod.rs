//! Schedules, time propagation and the full metrology protocol.

mod propagate;
mod protocol;
mod schedule;

pub use propagate::{evolve, propagate, propagate_adjoint, sense, Integrator, Method, Propagation};
pub use protocol::{
    default_ramp_window, local_maxima, locate_ramp_optimum, optimum_on_grid, reference_ramp_time,
    run_protocol, scan_ramp_time, ProtocolParams, ProtocolResult, RampOptimum, RampScan,
    RampScanRow, ScheduleKind, StartState,
};
pub use schedule::{Schedule, Segment, SegmentKind};
