//! Physical parameters of the two- and three-cell SQUIDs and their potentials.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::units::{flux_phase, half_flux_phase};
use crate::{Error, Result};

/// Energy scales of the circuit, all as `E/h` in GHz.
///
/// `ejm` is ignored by the two-cell (single junction) routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircuitParams {
    /// Josephson energy of junction `f`.
    pub ejf: f64,
    /// Josephson energy of junction `m`.
    pub ejm: f64,
    /// Charging energy `e²/2C`.
    pub ec: f64,
    /// Inductive energy `Φ₀²/[L(2π)²]`.
    pub el: f64,
}

impl CircuitParams {
    pub fn new(ejf: f64, ejm: f64, ec: f64, el: f64) -> Result<Self> {
        let p = CircuitParams { ejf, ejm, ec, el };
        p.check()?;
        Ok(p)
    }

    /// Parameters for the two-cell SQUID, which has only junction `f`.
    pub fn two_cell(ejf: f64, ec: f64, el: f64) -> Result<Self> {
        Self::new(ejf, ejf, ec, el)
    }

    pub fn check(&self) -> Result<()> {
        for (name, value) in [("ejf", self.ejf), ("ejm", self.ejm), ("ec", self.ec), ("el", self.el)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::NonPositiveEnergy { name, value });
            }
        }
        Ok(())
    }

    /// `β_f = E_Jf / E_L`.
    pub fn beta_f(&self) -> f64 {
        self.ejf / self.el
    }

    /// `β_m = E_Jm / E_L`.
    pub fn beta_m(&self) -> f64 {
        self.ejm / self.el
    }

    pub fn with_ejf(self, ejf: f64) -> Self {
        CircuitParams { ejf, ..self }
    }
}

/// External fluxes threading the left, central and right cells, in `Φ₀`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FluxConfig {
    pub phi1: f64,
    pub phi2: f64,
    pub phim: f64,
}

impl FluxConfig {
    pub fn new(phi1: f64, phi2: f64, phim: f64) -> Self {
        FluxConfig { phi1, phi2, phim }
    }

    /// Single trapped fluxon: `Φ₁ + Φ₂ = Φ₀`, `Φ_m = 0`, and the requested
    /// difference `Φ_Δf = Φ₂ − Φ₁`.
    pub fn trapped_fluxon(delta_f: f64) -> Self {
        FluxConfig { phi1: 0.5 * (1.0 - delta_f), phi2: 0.5 * (1.0 + delta_f), phim: 0.0 }
    }

    pub fn delta_f(&self) -> f64 {
        self.phi2 - self.phi1
    }

    pub fn sigma_f(&self) -> f64 {
        self.phi1 + self.phi2
    }

    pub fn delta_m(&self) -> f64 {
        self.phim - self.phi2
    }

    pub fn sigma_m(&self) -> f64 {
        self.phi2 + self.phim
    }

    /// Constant energy offset of the two-variable potential (GHz).
    ///
    /// This is the exact remainder of completing the squares in the three
    /// loop energies, `π²E_L(Φ_Σf² + Φ_Σm² − 2Φ₂²)`. It vanishes for the
    /// trapped-fluxon configuration at `Φ_Δf = Φ₀`.
    pub fn constant_offset(&self, el: f64) -> f64 {
        PI * PI * el * (self.sigma_f().powi(2) + self.sigma_m().powi(2) - 2.0 * self.phi2.powi(2))
    }
}

/// Two-cell potential `E_J(1 − cos φ) + E_L(φ − πΦ_Δ)²` (GHz).
///
/// The flux-sum constant is dropped, so absolute energies differ from the
/// two-variable potential by a known offset.
pub fn potential_1d(p: &CircuitParams, phi_delta: f64, phi: f64) -> f64 {
    let x = phi - half_flux_phase(phi_delta);
    p.ejf * (1.0 - phi.cos()) + p.el * x * x
}

/// `dU/dφ` of [`potential_1d`].
pub fn potential_1d_slope(p: &CircuitParams, phi_delta: f64, phi: f64) -> f64 {
    p.ejf * phi.sin() + 2.0 * p.el * (phi - half_flux_phase(phi_delta))
}

/// `d²U/dφ²` of [`potential_1d`].
pub fn potential_1d_curvature(p: &CircuitParams, phi: f64) -> f64 {
    p.ejf * phi.cos() + 2.0 * p.el
}

/// Three-cell potential `U(φ_f, φ_m)` in GHz, including the constant offset.
pub fn potential_2d(p: &CircuitParams, f: &FluxConfig, phi_f: f64, phi_m: f64) -> f64 {
    let xf = phi_f - half_flux_phase(f.delta_f());
    let xm = phi_m - half_flux_phase(f.delta_m());
    p.ejf * (1.0 - phi_f.cos()) + p.ejm * (1.0 - phi_m.cos()) + p.el * (xf * xf + xm * xm) - p.el * phi_f * phi_m
        + f.constant_offset(p.el)
}

/// Gradient of [`potential_2d`].
pub fn potential_2d_gradient(p: &CircuitParams, f: &FluxConfig, phi_f: f64, phi_m: f64) -> [f64; 2] {
    let xf = phi_f - half_flux_phase(f.delta_f());
    let xm = phi_m - half_flux_phase(f.delta_m());
    [p.ejf * phi_f.sin() + 2.0 * p.el * xf - p.el * phi_m, p.ejm * phi_m.sin() + 2.0 * p.el * xm - p.el * phi_f]
}

/// Hessian of [`potential_2d`] as `[[∂ff, ∂fm], [∂mf, ∂mm]]`.
pub fn potential_2d_hessian(p: &CircuitParams, phi_f: f64, phi_m: f64) -> [[f64; 2]; 2] {
    [[p.ejf * phi_f.cos() + 2.0 * p.el, -p.el], [-p.el, p.ejm * phi_m.cos() + 2.0 * p.el]]
}

/// Phase drops across the three loops, `(φ_f + φ₁ˣ, φ_f − φ_m − φ₂ˣ, φ_m − φ_mˣ)`.
///
/// A drop near `±2π` marks the loop that holds the fluxon.
pub fn loop_phase_drops(f: &FluxConfig, phi_f: f64, phi_m: f64) -> [f64; 3] {
    [phi_f + flux_phase(f.phi1), phi_f - phi_m - flux_phase(f.phi2), phi_m - flux_phase(f.phim)]
}

/// Non-fatal regime warnings from [`validate_params`].
#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    /// `β < 1`: the fluxon is not well defined.
    SmallBeta { junction: &'static str, beta: f64 },
    /// `E_J/E_C < 1`: quasi-classical results are not trustworthy.
    SmallJosephsonRatio { junction: &'static str, ratio: f64 },
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Diagnostic::SmallBeta { junction, beta } => {
                write!(f, "β<1 for junction {junction} (β = {beta:.4}): fluxon not well defined")
            }
            Diagnostic::SmallJosephsonRatio { junction, ratio } => {
                write!(f, "E_J/E_C<1 for junction {junction} ({ratio:.4}): quasi-classics invalid")
            }
        }
    }
}

/// Checks the energy scales and reports regime warnings.
///
/// Only non-positive energies are an error. `f` is accepted so that callers
/// can validate a whole configuration in one place; fluxes carry no constraint.
pub fn validate_params(p: &CircuitParams, f: &FluxConfig) -> Result<Vec<Diagnostic>> {
    p.check()?;
    for (name, v) in [("phi1", f.phi1), ("phi2", f.phi2), ("phim", f.phim)] {
        if !v.is_finite() {
            return Err(Error::InvalidArgument(format!("flux {name} is not finite")));
        }
    }
    let mut out = Vec::new();
    for (junction, ej) in [("f", p.ejf), ("m", p.ejm)] {
        let beta = ej / p.el;
        if beta < 1.0 {
            out.push(Diagnostic::SmallBeta { junction, beta });
        }
        let ratio = ej / p.ec;
        if ratio < 1.0 {
            out.push(Diagnostic::SmallJosephsonRatio { junction, ratio });
        }
    }
    Ok(out)
}

/// Flat key-value configuration as read from a JSON file.
///
/// Grid and sweep keys are optional; the CLI fills them from presets.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitConfig {
    pub ejf_ghz: Option<f64>,
    pub ejm_ghz: Option<f64>,
    pub ec_ghz: Option<f64>,
    pub el_ghz: Option<f64>,
    pub phi1: Option<f64>,
    pub phi2: Option<f64>,
    pub phim: Option<f64>,
    pub grid1d_min: Option<f64>,
    pub grid1d_max: Option<f64>,
    pub grid1d_n: Option<usize>,
    pub grid2d_n: Option<usize>,
    pub sweep_start: Option<f64>,
    pub sweep_stop: Option<f64>,
    pub sweep_steps: Option<usize>,
}

impl CircuitConfig {
    /// Values set in `other` override values in `self`.
    pub fn overlay(&self, other: &CircuitConfig) -> CircuitConfig {
        macro_rules! pick {
            ($($field:ident),*) => {
                CircuitConfig { $($field: other.$field.or(self.$field)),* }
            };
        }
        pick!(
            ejf_ghz,
            ejm_ghz,
            ec_ghz,
            el_ghz,
            phi1,
            phi2,
            phim,
            grid1d_min,
            grid1d_max,
            grid1d_n,
            grid2d_n,
            sweep_start,
            sweep_stop,
            sweep_steps
        )
    }

    pub fn params(&self) -> Result<CircuitParams> {
        let need = |name: &'static str, v: Option<f64>| {
            v.ok_or_else(|| Error::InvalidArgument(format!("missing config key {name}")))
        };
        let ejf = need("ejf_ghz", self.ejf_ghz)?;
        CircuitParams::new(ejf, self.ejm_ghz.unwrap_or(ejf), need("ec_ghz", self.ec_ghz)?, need("el_ghz", self.el_ghz)?)
    }

    pub fn flux(&self) -> FluxConfig {
        FluxConfig { phi1: self.phi1.unwrap_or(0.0), phi2: self.phi2.unwrap_or(0.0), phim: self.phim.unwrap_or(0.0) }
    }
}
