//! Parameter sweeps over the fluxon simulator with reproducible CSV/JSON
//! output. The `fluxsim` binary is a thin wrapper around [`sweep::run`].

pub mod setup;
pub mod sweep;
pub mod table;

pub use setup::{linspace, read_config, Format, Mode, Preset, SweepSpec};
pub use sweep::{run, status_code, SweepOutput};
pub use table::{write_with_manifest, Manifest, Table, Value};
