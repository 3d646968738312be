use super::classify::{classify_state, find_wells_2d};
use super::sparse::{lowest_eigenpairs, Operator2d};
use super::{PhaseGrid2D, Spectrum};
use crate::circuit::{potential_2d, CircuitParams, FluxConfig};
use crate::{Error, Result};

/// Knobs for the two-variable eigensolver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Relative Ritz residual bound for the inverted operator.
    pub tol: f64,
    pub max_iter: usize,
    /// Largest tolerated `max|ψ|` on the ring next to the boundary, relative
    /// to the peak of the state. Only labeled states are checked.
    pub boundary_ratio: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { tol: 1e-11, max_iter: 400, boundary_ratio: 1e-3 }
    }
}

/// 5-point operator `−4E_C(δ_f² + δ_m²) + V` on the interior of `g`.
pub fn discretize_2d<V: Fn(f64, f64) -> f64>(ec: f64, g: &PhaseGrid2D, v: V) -> Operator2d {
    let (hf, hm) = (g.f.spacing(), g.m.spacing());
    let cf = 4.0 * ec / (hf * hf);
    let cm = 4.0 * ec / (hm * hm);
    let (nf, nm) = (g.f.n - 2, g.m.n - 2);
    let mut diag = Vec::with_capacity(nf * nm);
    for j in 1..=nm {
        let b = g.m.point(j);
        for i in 1..=nf {
            diag.push(v(g.f.point(i), b) + 2.0 * (cf + cm));
        }
    }
    Operator2d { nf, nm, diag, cf, cm }
}

/// Lowest `k` eigenpairs of a two-variable problem, unlabeled.
pub fn spectrum_2d_potential<V: Fn(f64, f64) -> f64>(
    ec: f64,
    g: &PhaseGrid2D,
    k: usize,
    v: V,
    opts: &SolverOptions,
) -> Result<Spectrum> {
    if k == 0 || k > g.f.n.min(g.m.n) {
        return Err(Error::InvalidArgument(format!("level count {k} out of range for this grid")));
    }
    let op = discretize_2d(ec, g, v);
    let vmin = op.diag.iter().fold(f64::INFINITY, |a, &d| a.min(d)) - 2.0 * (op.cf + op.cm);
    let eig = lowest_eigenpairs(&op, k, vmin - 0.5, opts.tol, opts.max_iter)?;
    let scale = 1.0 / g.cell_area().sqrt();
    let states = eig
        .vectors
        .iter()
        .map(|x| {
            let mut full = vec![0.0; g.len()];
            for j in 0..op.nm {
                for i in 0..op.nf {
                    full[g.index(i + 1, j + 1)] = x[j * op.nf + i] * scale;
                }
            }
            full
        })
        .collect();
    Ok(Spectrum { energies: eig.values, states, cell: g.cell_area(), residuals: eig.residuals, labels: vec![None; k] })
}

/// Lowest `k` levels of the three-cell SQUID, each labeled `|λ, k, ℓ⟩` where
/// the state is localized in one fluxon well with at most one node per axis.
///
/// States that sit in a multi-fluxon well, straddle two wells or carry more
/// nodes stay unlabeled. Labeled states must decay before the grid edge.
pub fn spectrum_2d(p: &CircuitParams, flux: &FluxConfig, k: usize, g: &PhaseGrid2D) -> Result<Spectrum> {
    let opts = SolverOptions::default();
    let mut s = spectrum_2d_potential(p.ec, g, k, |a, b| potential_2d(p, flux, a, b), &opts)?;
    let wells = find_wells_2d(p, flux, g);
    for (idx, psi) in s.states.iter().enumerate() {
        let label = classify_state(g, psi, &wells).ok().flatten();
        if label.is_some() {
            let ratio = boundary_ratio(g, psi);
            if ratio > opts.boundary_ratio {
                return Err(Error::BoundaryAmplitude { state: idx, ratio });
            }
        }
        s.labels[idx] = label;
    }
    Ok(s)
}

fn boundary_ratio(g: &PhaseGrid2D, psi: &[f64]) -> f64 {
    let (nf, nm) = (g.f.n, g.m.n);
    let peak = psi.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut edge = 0.0f64;
    for j in 1..nm - 1 {
        for i in 1..nf - 1 {
            if i == 1 || j == 1 || i == nf - 2 || j == nm - 2 {
                edge = edge.max(psi[g.index(i, j)].abs());
            }
        }
    }
    edge / peak
}
