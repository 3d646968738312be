//! Effective models distilled from exact spectra: current matrix elements and
//! the two-level fluxon (two-cell), and the qutrit coupled to two transmon
//! qubits (three-cell).

use std::f64::consts::PI;

use crate::circuit::CircuitParams;
use crate::grid::{PhaseGrid1D, Site, Spectrum, StateLabel};
use crate::semiclassics::find_extrema;
use crate::{Error, Result};

/// Largest `|Φ_Δ − Φ₀|` for which the linearized bias is trusted (`Φ₀`).
pub const LINEAR_WINDOW: f64 = 0.1;

/// Matrix elements of the junction current `Î = (π − φ)/2π` (units `Φ₀/L`)
/// between the two lowest states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurrentElements {
    pub i00: f64,
    pub i11: f64,
    pub i01: f64,
}

/// `⟨i|Î|j⟩` for the two lowest states of a one-variable spectrum on `g`.
pub fn current_elements(s: &Spectrum, g: &PhaseGrid1D) -> Result<CurrentElements> {
    if s.len() < 2 {
        return Err(Error::MissingStates(format!("need two states, got {}", s.len())));
    }
    if s.states.iter().take(2).any(|v| v.len() != g.n) {
        return Err(Error::InvalidArgument("state length does not match the grid".into()));
    }
    let element = |a: &[f64], b: &[f64]| -> f64 {
        (0..g.n).map(|i| a[i] * b[i] * (PI - g.point(i)) * g.trapezoid_weight(i)).sum::<f64>() / (2.0 * PI)
    };
    Ok(CurrentElements {
        i00: element(&s.states[0], &s.states[0]),
        i11: element(&s.states[1], &s.states[1]),
        i01: element(&s.states[0], &s.states[1]),
    })
}

/// Current carried by a fluxon sitting at the bottom of the left well,
/// `(π − φ_min)/2π`: the value `|I₀₀|` approaches deep in a well.
pub fn saturation_current(p: &CircuitParams, phi_delta: f64) -> Result<f64> {
    let w = find_extrema(p, phi_delta)?;
    Ok((PI - w.phi_min_left) / (2.0 * PI))
}

/// `H = (Δ/2)σˣ + (ε/2)σᶻ` near the degeneracy flux `Φ₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelModel {
    /// Tunneling splitting at `Φ₀` (GHz).
    pub delta: f64,
    /// Bias (GHz), zero exactly at `Φ₀`.
    pub epsilon: f64,
    /// `Φ_Δ − Φ₀`.
    pub flux_offset: f64,
    pub phi_delta_ref: f64,
}

impl TwoLevelModel {
    /// `√(Δ² + ε²)`.
    pub fn gap(&self) -> f64 {
        self.delta.hypot(self.epsilon)
    }

    /// Lower and upper eigenvalues, centred on zero.
    pub fn energies(&self) -> [f64; 2] {
        let h = 0.5 * self.gap();
        [-h, h]
    }
}

/// Two-level model at `phi_delta` from the splitting `delta` and the current
/// element `i01` at `Φ₀`.
///
/// The flux derivative of the potential is `4π²E_L·Î`, so a flux offset
/// `δΦ` couples the degenerate doublet through `4π²E_L i01 δΦ`. In the
/// localized basis that coupling is the half-bias, giving
/// `ε = 8π² E_L |i01| δΦ`.
pub fn two_level_fit(p: &CircuitParams, phi_delta: f64, delta: f64, i01: f64) -> Result<TwoLevelModel> {
    p.check()?;
    let offset = phi_delta - 1.0;
    if !(offset.abs() <= LINEAR_WINDOW + 1e-12) {
        return Err(Error::OutsideLinearWindow { offset, window: LINEAR_WINDOW });
    }
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!("splitting must be non-negative, got {delta}")));
    }
    Ok(TwoLevelModel {
        delta,
        epsilon: 8.0 * PI * PI * p.el * i01.abs() * offset,
        flux_offset: offset,
        phi_delta_ref: 1.0,
    })
}

/// Qutrit `{L, C, R}` dispersively coupled to plasma-mode qubits `f` and `m`.
///
/// `jz_f` is the full upward shift of the `f` transition when the fluxon is
/// in `R`, `jz_m` that of the `m` transition when it is in `L`. In
/// excitation-number form the model energies are
/// `E(λ,k,ℓ) = ε_λ + k(ω_pf + jz_f[λ=R]) + ℓ(ω_pm + jz_m[λ=L])`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QutritQubitModel {
    pub omega_pf: f64,
    pub omega_pm: f64,
    pub eps_l: f64,
    pub eps_c: f64,
    pub eps_r: f64,
    pub jz_f: f64,
    pub jz_m: f64,
    /// Transverse couplings implied by `jz = 2g²/ω_p`.
    pub g_f: f64,
    pub g_m: f64,
    /// `|λ,0,0⟩ → |λ,1,0⟩` frequencies in the order L, C, R.
    pub transitions_f: [f64; 3],
    /// `|λ,0,0⟩ → |λ,0,1⟩` frequencies in the order L, C, R.
    pub transitions_m: [f64; 3],
}

const SITES: [Site; 3] = [Site::Left, Site::Center, Site::Right];

impl QutritQubitModel {
    fn from_parts(eps: [f64; 3], tf: [f64; 3], tm: [f64; 3]) -> Self {
        let omega_pf = 0.5 * (tf[0] + tf[1]);
        let omega_pm = 0.5 * (tm[1] + tm[2]);
        let jz_f = tf[2] - tf[0];
        let jz_m = tm[0] - tm[1];
        let g = |jz: f64, w: f64| (0.5 * jz.abs() * w).sqrt();
        QutritQubitModel {
            omega_pf,
            omega_pm,
            eps_l: eps[0],
            eps_c: eps[1],
            eps_r: eps[2],
            jz_f,
            jz_m,
            g_f: g(jz_f, omega_pf),
            g_m: g(jz_m, omega_pm),
            transitions_f: tf,
            transitions_m: tm,
        }
    }

    /// Model energy of `|λ,k,ℓ⟩`.
    pub fn energy(&self, label: StateLabel) -> f64 {
        let eps = match label.site {
            Site::Left => self.eps_l,
            Site::Center => self.eps_c,
            Site::Right => self.eps_r,
            Site::Empty => f64::NAN,
        };
        let wf = self.omega_pf + if label.site == Site::Right { self.jz_f } else { 0.0 };
        let wm = self.omega_pm + if label.site == Site::Left { self.jz_m } else { 0.0 };
        eps + f64::from(label.k) * wf + f64::from(label.l) * wm
    }

    /// Second-order Richardson combination of two models extracted on grids
    /// with `h` and `h/2`.
    pub fn richardson(coarse: &Self, fine: &Self) -> Self {
        let r = |c: f64, f: f64| f + (f - c) / 3.0;
        let r3 = |c: [f64; 3], f: [f64; 3]| [r(c[0], f[0]), r(c[1], f[1]), r(c[2], f[2])];
        Self::from_parts(
            r3([coarse.eps_l, coarse.eps_c, coarse.eps_r], [fine.eps_l, fine.eps_c, fine.eps_r]),
            r3(coarse.transitions_f, fine.transitions_f),
            r3(coarse.transitions_m, fine.transitions_m),
        )
    }
}

/// Reads the nine `|λ,k,ℓ⟩` (`k + ℓ ≤ 1`) energies off a labeled two-variable
/// spectrum.
pub fn extract_qutrit_qubit(s: &Spectrum) -> Result<QutritQubitModel> {
    let mut missing = Vec::new();
    let mut get = |site: Site, k: u8, l: u8| {
        let label = StateLabel::new(site, k, l);
        s.energy_of(label).unwrap_or_else(|| {
            missing.push(label.to_string());
            f64::NAN
        })
    };
    let mut eps = [0.0; 3];
    let mut tf = [0.0; 3];
    let mut tm = [0.0; 3];
    for (x, site) in SITES.into_iter().enumerate() {
        eps[x] = get(site, 0, 0);
        tf[x] = get(site, 1, 0) - eps[x];
        tm[x] = get(site, 0, 1) - eps[x];
    }
    if !missing.is_empty() {
        return Err(Error::MissingStates(missing.join(", ")));
    }
    Ok(QutritQubitModel::from_parts(eps, tf, tm))
}

/// Closed-form dispersive estimates for both junctions (GHz).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersiveEstimate {
    pub omega_pf: f64,
    pub omega_pm: f64,
    pub g_f: f64,
    pub g_m: f64,
    pub jz_f: f64,
    pub jz_m: f64,
}

/// `ω_p = √(8E_J E_C)`, `g = 2πE_L √(ω_p/(2E_J))`, `jz = 2g²/ω_p`.
///
/// Order-of-magnitude only; these do not reproduce the exact shifts from
/// [`extract_qutrit_qubit`].
pub fn dispersive_estimate(p: &CircuitParams) -> DispersiveEstimate {
    let one = |ej: f64| {
        let w = (8.0 * ej * p.ec).sqrt();
        let g = 2.0 * PI * p.el * (w / (2.0 * ej)).sqrt();
        (w, g, 2.0 * g * g / w)
    };
    let (omega_pf, g_f, jz_f) = one(p.ejf);
    let (omega_pm, g_m, jz_m) = one(p.ejm);
    DispersiveEstimate { omega_pf, omega_pm, g_f, g_m, jz_f, jz_m }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(jz_f: f64, jz_m: f64) -> Spectrum {
        let (wf, wm) = (8.46, 8.90);
        let eps = [12.0, 11.98, 11.99];
        let mut energies = Vec::new();
        let mut labels = Vec::new();
        for (x, site) in SITES.into_iter().enumerate() {
            for (k, l) in [(0u8, 0u8), (1, 0), (0, 1)] {
                let f = wf + if site == Site::Right { jz_f } else { 0.0 };
                let m = wm + if site == Site::Left { jz_m } else { 0.0 };
                energies.push(eps[x] + f64::from(k) * f + f64::from(l) * m);
                labels.push(Some(StateLabel::new(site, k, l)));
            }
        }
        let n = energies.len();
        Spectrum { energies, states: vec![vec![]; n], cell: 1.0, residuals: vec![0.0; n], labels }
    }

    #[test]
    fn extraction_round_trip() {
        let s = synthetic(0.0073, 0.0061);
        let m = extract_qutrit_qubit(&s).unwrap();
        assert!((m.jz_f - 0.0073).abs() < 1e-12 && (m.jz_m - 0.0061).abs() < 1e-12);
        for (e, l) in s.energies.iter().zip(&s.labels) {
            assert!((m.energy(l.unwrap()) - e).abs() < 1e-12);
        }
        assert!((2.0 * m.g_f * m.g_f / m.omega_pf - m.jz_f).abs() < 1e-12);
    }

    #[test]
    fn gauge_invariance() {
        let s = synthetic(0.0073, 0.0061);
        let a = extract_qutrit_qubit(&s).unwrap();
        let b = extract_qutrit_qubit(&s.shifted(3.7)).unwrap();
        assert!((a.jz_f - b.jz_f).abs() < 1e-12 && (a.jz_m - b.jz_m).abs() < 1e-12);
        assert!((b.eps_l - a.eps_l - 3.7).abs() < 1e-12);
    }

    #[test]
    fn missing_states_are_named() {
        let mut s = synthetic(0.0073, 0.0061);
        s.labels[4] = None;
        match extract_qutrit_qubit(&s) {
            Err(Error::MissingStates(m)) => assert!(m.contains("|C,1,0⟩"), "{m}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn richardson_removes_quadratic_error() {
        let exact = extract_qutrit_qubit(&synthetic(0.0073, 0.0061)).unwrap();
        let coarse = extract_qutrit_qubit(&synthetic(0.0073 - 4e-4, 0.0061 - 4e-4)).unwrap();
        let fine = extract_qutrit_qubit(&synthetic(0.0073 - 1e-4, 0.0061 - 1e-4)).unwrap();
        let r = QutritQubitModel::richardson(&coarse, &fine);
        assert!((r.jz_f - exact.jz_f).abs() < 1e-12 && (r.jz_m - exact.jz_m).abs() < 1e-12);
    }

    #[test]
    fn two_level_limits() {
        let p = CircuitParams::two_cell(2.0, 0.5, 0.15).unwrap();
        let m = two_level_fit(&p, 1.0, 0.146, 0.4).unwrap();
        assert_eq!(m.epsilon, 0.0);
        assert_eq!(m.gap(), 0.146);
        let far = two_level_fit(&p, 1.1, 1e-6, 0.4).unwrap();
        assert!((far.gap() - far.epsilon.abs()).abs() < 1e-9);
        assert!(matches!(two_level_fit(&p, 1.2, 0.1, 0.4), Err(Error::OutsideLinearWindow { .. })));
    }

    #[test]
    fn symmetric_state_carries_no_current() {
        let g = PhaseGrid1D::new(-2.0 * PI, 4.0 * PI, 301).unwrap();
        let psi: Vec<f64> = g.points().map(|x| (-(x - PI).powi(2)).exp()).collect();
        let odd: Vec<f64> = g.points().map(|x| (x - PI) * (-(x - PI).powi(2)).exp()).collect();
        let s = Spectrum {
            energies: vec![0.0, 1.0],
            states: vec![psi, odd],
            cell: g.spacing(),
            residuals: vec![0.0; 2],
            labels: vec![None; 2],
        };
        let c = current_elements(&s, &g).unwrap();
        assert!(c.i00.abs() < 1e-12 && c.i11.abs() < 1e-12);
    }

    #[test]
    fn estimate_scales_with_inductive_energy_squared() {
        let a = dispersive_estimate(&CircuitParams::new(20.0, 22.0, 0.5, 0.15).unwrap());
        let b = dispersive_estimate(&CircuitParams::new(20.0, 22.0, 0.5, 0.30).unwrap());
        assert!((b.jz_f / a.jz_f - 4.0).abs() < 1e-12);
        assert!(a.g_f < a.omega_pf && a.g_m < a.omega_pm);
    }
}
