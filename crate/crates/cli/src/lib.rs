//! Config-driven experiment runner for the `ghz-adiabatic` library.

pub mod experiments;
pub mod grid;
pub mod output;
pub mod settings;

pub use experiments::run_experiment;
pub use output::{Cell, Report, Table};
pub use settings::{
    parse_config, validate_config, Experiment, Figure, Kind, Settings, OUT_DIR_ENV,
};
