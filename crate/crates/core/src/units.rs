//! Repository-wide unit convention.
//!
//! Energies are `E/h` in GHz, times in ns, phases in radians, fluxes in `Φ₀`,
//! currents in `Φ₀/L`. Nothing here carries a unit type; the constants below
//! exist so that conversions are spelled out at their call sites.

use std::f64::consts::PI;

/// MHz per GHz.
pub const MHZ_PER_GHZ: f64 = 1e3;

/// Phase advanced by a frequency `f` (GHz) over a time `t` (ns), in radians.
pub fn phase_advance(f_ghz: f64, t_ns: f64) -> f64 {
    2.0 * PI * f_ghz * t_ns
}

/// Josephson phase offset `πΦ/Φ₀` for a flux given in units of `Φ₀`.
pub fn half_flux_phase(flux: f64) -> f64 {
    PI * flux
}

/// Reduced flux `2πΦ/Φ₀` for a flux given in units of `Φ₀`.
pub fn flux_phase(flux: f64) -> f64 {
    2.0 * PI * flux
}
