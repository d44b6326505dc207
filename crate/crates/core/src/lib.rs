//! Simulation of GHZ-state metrology in the infinite-range transverse-field
//! Ising model: Dicke-subspace algebra, parity-resolved spectra,
//! schedule-driven propagation, and uncertainty and resource analysis.

pub mod dicke;
pub mod dynamics;
pub mod error;
pub mod metrology;
pub mod model;
pub mod numeric;
pub mod tridiag;
pub mod units;

pub use dicke::{Axis, CollectiveOperator, DickeBasis, DickeState};
pub use error::{Error, Result};
pub use model::{ModelParams, SpectrumData};
pub use units::Units;
