//! Finite-difference discretization of the phase Schrödinger problems and
//! their lowest eigenpairs.
//!
//! Both problems use Dirichlet conditions on a truncated domain: the inductive
//! parabola confines the wavefunction, so the phase axis is not periodic. The
//! kinetic term `4E_C n̂²` with `n̂ = −i∂/∂φ` becomes `−4E_C` times the second
//! central difference. One-variable problems are solved directly as symmetric
//! tridiagonal matrices; two-variable problems use shift-invert Lanczos on
//! the 5-point operator.

mod classify;
mod converge;
mod one_d;
pub mod sparse;
pub mod tridiag;
mod two_d;

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use classify::{classify_state, find_wells_2d, Site, StateLabel, WellSite};
pub use converge::{converge, richardson, Convergence};
pub use one_d::{discretize_1d, discretize_potential_1d, resolution_floor, spectrum_1d, spectrum_1d_potential};
pub use two_d::{discretize_2d, spectrum_2d, spectrum_2d_potential, SolverOptions};

/// Uniform grid on `[phi_min, phi_max]` with `n` points including both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseGrid1D {
    pub phi_min: f64,
    pub phi_max: f64,
    pub n: usize,
}

impl PhaseGrid1D {
    pub fn new(phi_min: f64, phi_max: f64, n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGrid(format!("need at least 3 points, got {n}")));
        }
        if !(phi_min.is_finite() && phi_max.is_finite() && phi_min < phi_max) {
            return Err(Error::InvalidGrid(format!("empty or non-finite range [{phi_min}, {phi_max}]")));
        }
        Ok(PhaseGrid1D { phi_min, phi_max, n })
    }

    /// Default two-cell domain `[−2π, 4π]` with 2001 points.
    pub fn default_two_cell() -> Self {
        PhaseGrid1D { phi_min: -2.0 * PI, phi_max: 4.0 * PI, n: 2001 }
    }

    /// `centre ± half_width` with `n` points.
    pub fn centred(centre: f64, half_width: f64, n: usize) -> Result<Self> {
        Self::new(centre - half_width, centre + half_width, n)
    }

    pub fn spacing(&self) -> f64 {
        (self.phi_max - self.phi_min) / (self.n - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.phi_max
        } else {
            self.phi_min + self.spacing() * i as f64
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.point(i))
    }

    /// Same domain with twice as many intervals.
    pub fn refined(&self) -> Self {
        PhaseGrid1D { n: 2 * (self.n - 1) + 1, ..*self }
    }

    /// Same domain with `n` points.
    pub fn with_points(&self, n: usize) -> Result<Self> {
        Self::new(self.phi_min, self.phi_max, n)
    }

    /// Index of the grid point closest to `phi`, clamped to the grid.
    pub fn nearest(&self, phi: f64) -> usize {
        let t = ((phi - self.phi_min) / self.spacing()).round();
        t.clamp(0.0, (self.n - 1) as f64) as usize
    }

    /// Trapezoidal weights.
    pub fn trapezoid_weight(&self, i: usize) -> f64 {
        if i == 0 || i + 1 == self.n {
            0.5 * self.spacing()
        } else {
            self.spacing()
        }
    }
}

/// Product grid over `(φ_f, φ_m)`. Point `(i, j)` is stored at `j * f.n + i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseGrid2D {
    pub f: PhaseGrid1D,
    pub m: PhaseGrid1D,
}

impl PhaseGrid2D {
    pub fn new(f: PhaseGrid1D, m: PhaseGrid1D) -> Self {
        PhaseGrid2D { f, m }
    }

    /// Each axis spans its flux-dependent parabola vertex `πΦ_Δ ± 3π`, which
    /// is `[−2π, 4π]` for `φ_f` at `Φ_Δf = Φ₀`.
    pub fn around_vertices(flux: &crate::FluxConfig, n: usize) -> Result<Self> {
        Ok(PhaseGrid2D {
            f: PhaseGrid1D::centred(PI * flux.delta_f(), 3.0 * PI, n)?,
            m: PhaseGrid1D::centred(PI * flux.delta_m(), 3.0 * PI, n)?,
        })
    }

    pub fn len(&self) -> usize {
        self.f.n * self.m.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.f.n + i
    }

    pub fn cell_area(&self) -> f64 {
        self.f.spacing() * self.m.spacing()
    }

    pub fn refined(&self) -> Self {
        PhaseGrid2D { f: self.f.refined(), m: self.m.refined() }
    }

    pub fn with_points(&self, n: usize) -> Result<Self> {
        Ok(PhaseGrid2D { f: self.f.with_points(n)?, m: self.m.with_points(n)? })
    }
}

/// Eigenpairs of one discretized problem, ascending in energy.
///
/// `states[i]` holds amplitudes on every grid point (zero on the Dirichlet
/// boundary), normalized so that `Σ ψ² · cell = 1`; with zero boundary values
/// this is the trapezoidal norm.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub energies: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// Quadrature weight of one interior point (`h` or `h_f h_m`).
    pub cell: f64,
    /// `‖Hψ − Eψ‖` for Euclidean-unit `ψ`, in GHz.
    pub residuals: Vec<f64>,
    /// Per-state `|λ, k, ℓ⟩` label; `None` when unclassified.
    pub labels: Vec<Option<StateLabel>>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// `E_j − E_i`.
    pub fn gap(&self, i: usize, j: usize) -> f64 {
        self.energies[j] - self.energies[i]
    }

    /// Quadrature inner product `⟨ψ_i|ψ_j⟩`.
    pub fn overlap(&self, i: usize, j: usize) -> f64 {
        tridiag::dot(&self.states[i], &self.states[j]) * self.cell
    }

    pub fn find(&self, label: StateLabel) -> Option<usize> {
        self.labels.iter().position(|l| *l == Some(label))
    }

    pub fn energy_of(&self, label: StateLabel) -> Option<f64> {
        self.find(label).map(|i| self.energies[i])
    }

    /// Adds `offset` to every energy (gauge shift).
    pub fn shifted(&self, offset: f64) -> Spectrum {
        let mut s = self.clone();
        s.energies.iter_mut().for_each(|e| *e += offset);
        s
    }
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.energies.iter().enumerate() {
            match self.labels.get(i).copied().flatten() {
                Some(l) => writeln!(f, "{i:3} {e:14.9} GHz  {l}")?,
                None => writeln!(f, "{i:3} {e:14.9} GHz")?,
            }
        }
        Ok(())
    }
}
