//! Semiclassical description of the two-cell double well: extrema of the
//! potential, harmonic well frequencies and tunneling splittings.

use std::f64::consts::{E, PI};

use crate::circuit::{potential_1d, potential_1d_curvature, potential_1d_slope, CircuitParams};
use crate::quad::integrate_sqrt_endpoints;
use crate::roots::{bisect, bisect_newton, sign_scan};
use crate::units::half_flux_phase;
use crate::{Error, Result};

const SCAN_STEP: f64 = 0.01;

/// Double-well structure of the two-cell potential at one flux difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellStructure {
    pub phi_min_left: f64,
    pub phi_max: f64,
    pub phi_min_right: f64,
    /// Potential at the left minimum, barrier top and right minimum (GHz).
    pub u_left: f64,
    pub u_barrier: f64,
    pub u_right: f64,
    /// `U''` at the minima (GHz).
    pub curvature_left: f64,
    pub curvature_right: f64,
    /// Harmonic level spacings of the two wells (GHz).
    pub omega_left: f64,
    pub omega_right: f64,
}

impl WellStructure {
    /// Ground level of the left well in the harmonic approximation.
    pub fn ground_left(&self) -> f64 {
        self.u_left + 0.5 * self.omega_left
    }

    pub fn ground_right(&self) -> f64 {
        self.u_right + 0.5 * self.omega_right
    }
}

/// Phases where the potential crosses a level on either side of the barrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurningPoints {
    pub phi_g1: f64,
    pub phi_g2: f64,
}

/// Minima and barrier top of the two-cell potential nearest the parabola
/// vertex, from `E_J sin φ = −2E_L(φ − πΦ_Δ)`.
pub fn find_extrema(p: &CircuitParams, phi_delta: f64) -> Result<WellStructure> {
    p.check()?;
    let vertex = half_flux_phase(phi_delta);
    let slope = |x: f64| potential_1d_slope(p, phi_delta, x);
    let curv = |x: f64| potential_1d_curvature(p, x);
    let roots: Vec<f64> = sign_scan(slope, vertex - 2.0 * PI, vertex + 2.0 * PI, SCAN_STEP)
        .into_iter()
        .map(|(a, b)| bisect_newton(slope, curv, a, b))
        .collect();
    let no_well = || Error::NoDoubleWell { phi_delta };
    let top = roots
        .iter()
        .enumerate()
        .filter(|(_, &x)| curv(x) < 0.0)
        .min_by(|a, b| (a.1 - vertex).abs().total_cmp(&(b.1 - vertex).abs()))
        .map(|(i, _)| i)
        .ok_or_else(no_well)?;
    let left = roots[..top].iter().rev().find(|&&x| curv(x) > 0.0).copied().ok_or_else(no_well)?;
    let right = roots[top + 1..].iter().find(|&&x| curv(x) > 0.0).copied().ok_or_else(no_well)?;
    let phi_max = roots[top];
    let u = |x: f64| potential_1d(p, phi_delta, x);
    Ok(WellStructure {
        phi_min_left: left,
        phi_max,
        phi_min_right: right,
        u_left: u(left),
        u_barrier: u(phi_max),
        u_right: u(right),
        curvature_left: curv(left),
        curvature_right: curv(right),
        omega_left: well_frequency(p, left)?,
        omega_right: well_frequency(p, right)?,
    })
}

/// Harmonic level spacing `√(8E_C (2E_L + E_J cos φ))` of a well at `phi`.
pub fn well_frequency(p: &CircuitParams, phi: f64) -> Result<f64> {
    let curvature = potential_1d_curvature(p, phi);
    if !(curvature > 0.0) {
        return Err(Error::NotAWell { curvature });
    }
    Ok((8.0 * p.ec * curvature).sqrt())
}

/// Turning points of `level` around the barrier of `w`.
pub fn turning_points(p: &CircuitParams, phi_delta: f64, w: &WellStructure, level: f64) -> Result<TurningPoints> {
    if level >= w.u_barrier {
        return Err(Error::LevelAboveBarrier { level, barrier: w.u_barrier });
    }
    if level <= w.u_left.max(w.u_right) {
        return Err(Error::InvalidArgument(format!("level {level} lies below a well bottom")));
    }
    let g = |x: f64| potential_1d(p, phi_delta, x) - level;
    Ok(TurningPoints {
        phi_g1: bisect(g, w.phi_min_left, w.phi_max, 1e-14),
        phi_g2: bisect(g, w.phi_max, w.phi_min_right, 1e-14),
    })
}

/// Under-barrier action `∫ √((U − E)/(4E_C)) dφ` between the turning points.
///
/// The `4E_C` matches the kinetic term `4E_C n̂²`; with `E_C` alone the
/// exponent is twice too large.
fn action(p: &CircuitParams, phi_delta: f64, tp: &TurningPoints, level: f64) -> f64 {
    let f = |x: f64| ((potential_1d(p, phi_delta, x) - level) / (4.0 * p.ec)).max(0.0).sqrt();
    integrate_sqrt_endpoints(f, tp.phi_g1, tp.phi_g2, 1e-10).value
}

/// Ground-doublet tunneling splitting of symmetric wells in the WKB
/// approximation, `Δ = ω/(e√π) · exp(−S)` with `S` the under-barrier action
/// at the harmonic ground level `E = U(φ_min) + ω/2` (GHz).
pub fn wkb_splitting(p: &CircuitParams, phi_delta: f64) -> Result<f64> {
    if (phi_delta.abs() - 1.0).abs() > 1e-9 {
        return Err(Error::AsymmetricWells { phi_delta });
    }
    let w = find_extrema(p, phi_delta)?;
    let level = w.ground_left();
    let tp = turning_points(p, phi_delta, &w, level)?;
    let s = action(p, phi_delta, &tp, level);
    Ok(w.omega_left / (E * PI.sqrt()) * (-s).exp())
}

/// Cosine-potential splitting with the inductance-renormalized
/// `Ē_J = E_J[1 − π²/(4β)(1 − 1/β)]` and `Ē_C = E_C/(1 − 1/β)²` (GHz).
///
/// The exponent is `√(8Ē_J/Ē_C)`, as in the transmon charge-dispersion
/// result whose prefactor this formula shares.
pub fn asymptotic_splitting(p: &CircuitParams) -> Result<f64> {
    p.check()?;
    let beta = p.beta_f();
    if !(beta > 1.0) {
        return Err(Error::InvalidBeta(beta));
    }
    let ej = p.ejf * (1.0 - PI * PI / (4.0 * beta) * (1.0 - 1.0 / beta));
    let ec = p.ec / (1.0 - 1.0 / beta).powi(2);
    let ratio = 8.0 * ej / ec;
    Ok(2.0 * (2.0 / PI).sqrt() * (8.0 * ej * ec).sqrt() * ratio.powf(0.25) * (-ratio.sqrt()).exp())
}
