//! Quantum statics and dynamics of a single magnetic fluxon trapped in two- and
//! three-cell SQUIDs with high kinetic inductance.
//!
//! # Units
//!
//! Every energy in this crate is stored as `E/h` in GHz, times are in ns,
//! phases are dimensionless radians, external fluxes are in units of the flux
//! quantum `Φ₀`, and currents are in units of `Φ₀/L`. With `h = 1` a frequency
//! in GHz is numerically the same as an energy in GHz, and `1 GHz × 1 ns` is
//! one full phase cycle. See [`units`].
//!
//! # Layout
//!
//! - [`circuit`]: parameter records and the one- and two-variable potentials.
//! - [`grid`]: finite-difference discretization and the eigensolvers.
//! - [`semiclassics`]: well structure, WKB and asymptotic tunneling splittings.
//! - [`effective`]: current matrix elements, the two-level fluxon model and
//!   the qutrit/two-transmon dispersive model.
//! - [`protocol`]: quantum beats, Ramsey calibration and position readout.

pub mod circuit;
pub mod effective;
mod error;
pub mod grid;
pub mod protocol;
pub mod quad;
pub mod roots;
pub mod semiclassics;
pub mod units;

pub use circuit::{potential_1d, potential_2d, validate_params, CircuitConfig, CircuitParams, Diagnostic, FluxConfig};
pub use effective::{
    current_elements, dispersive_estimate, extract_qutrit_qubit, saturation_current, two_level_fit, CurrentElements,
    DispersiveEstimate, QutritQubitModel, TwoLevelModel,
};
pub use error::{Error, Result};
pub use grid::{
    classify_state, converge, discretize_1d, find_wells_2d, richardson, spectrum_1d, spectrum_1d_potential,
    spectrum_2d, Convergence, PhaseGrid1D, PhaseGrid2D, Site, Spectrum, StateLabel, WellSite,
};
pub use protocol::{
    beats, calibrate_delay, decode_position, ramsey_fringe, run_protocol, BeatsTrace, DelayCalibration, Initial,
    Position, ProtocolOutcome, ProtocolScenario, RamseyCalibration, DELAY_TOLERANCE,
};
pub use semiclassics::{
    asymptotic_splitting, find_extrema, turning_points, well_frequency, wkb_splitting, TurningPoints, WellStructure,
};
