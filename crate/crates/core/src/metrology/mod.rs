//! Estimation uncertainty, reference limits, resource budgets and readout
//! analysis.

mod bound;
mod budget;
mod estimation;
mod limits;
mod readout;
mod sweep;

pub use bound::{
    finite_field_probability, finite_field_slope, random_overlaps, sample_bound_checks,
    uncertainty_bound_check, BoundCheck, BoundSample,
};
pub use budget::{
    adiabatic_time_estimate, time_budget, AdiabaticTimeEstimate, BudgetVariant, TimeBudget,
};
pub use estimation::{
    calibrate_offset, central_difference, field_uncertainty, forward_difference, ideal_probability,
    ideal_slope, projection_std, uncertainty, Derivative, OffsetPolicy, TargetField,
};
pub use limits::{
    dephasing_analysis, dephasing_window, ghz_dephased_uncertainty, limits,
    separable_dephased_uncertainty, DephasingAnalysis, DephasingWindow, Limits, MetrologyBudget,
    WindowRow,
};
pub use readout::{
    readout_state, sz_moments, sz_readout, sz_readout_closed_form, sz_small_angle_uncertainty,
    SzReadout,
};
pub use sweep::{
    default_sense_grid, tint_sweep, SensingInterferometer, SweepRow, SweepSettings, TintSweep,
};
