use super::tridiag::SymTridiagonal;
use super::{PhaseGrid1D, Spectrum};
use crate::circuit::{potential_1d, CircuitParams};
use crate::{Error, Result};

/// Tridiagonal operator `−4E_C δ² + V` on the interior points of `g`.
pub fn discretize_potential_1d<V: Fn(f64) -> f64>(ec: f64, g: &PhaseGrid1D, v: V) -> SymTridiagonal {
    let h = g.spacing();
    let c = 4.0 * ec / (h * h);
    let m = g.n - 2;
    let diag = (1..=m).map(|i| v(g.point(i)) + 2.0 * c).collect();
    SymTridiagonal::new(diag, vec![-c; m.saturating_sub(1)])
}

/// Two-cell Hamiltonian on `g`, Dirichlet at both ends.
pub fn discretize_1d(p: &CircuitParams, phi_delta: f64, g: &PhaseGrid1D) -> SymTridiagonal {
    discretize_potential_1d(p.ec, g, |phi| potential_1d(p, phi_delta, phi))
}

/// Lowest `k` eigenpairs of `−4E_C ∂² + V` on `g`.
///
/// Fails with [`Error::GridTooNarrow`] when the potential at either boundary
/// does not exceed the highest returned level.
pub fn spectrum_1d_potential<V: Fn(f64) -> f64>(ec: f64, g: &PhaseGrid1D, k: usize, v: V) -> Result<Spectrum> {
    if k == 0 || k > g.n / 4 {
        return Err(Error::InvalidArgument(format!("level count {k} must be in 1..={}", g.n / 4)));
    }
    let t = discretize_potential_1d(ec, g, &v);
    let (energies, vectors) = t.eigenpairs(0..k);
    let boundary = v(g.phi_min).min(v(g.phi_max));
    let top = energies[k - 1];
    if boundary <= top {
        return Err(Error::GridTooNarrow { boundary, level: top });
    }
    let mut residuals = Vec::with_capacity(k);
    let mut y = vec![0.0; t.len()];
    for (e, x) in energies.iter().zip(&vectors) {
        t.matvec(x, &mut y);
        residuals.push(y.iter().zip(x).map(|(a, b)| (a - e * b).powi(2)).sum::<f64>().sqrt());
    }
    let h = g.spacing();
    let scale = 1.0 / h.sqrt();
    let states = vectors
        .into_iter()
        .map(|x| {
            let mut full = Vec::with_capacity(g.n);
            full.push(0.0);
            full.extend(x.iter().map(|v| v * scale));
            full.push(0.0);
            full
        })
        .collect();
    Ok(Spectrum { energies, states, cell: h, residuals, labels: vec![None; k] })
}

/// Lowest `k` levels of the two-cell SQUID at flux difference `phi_delta`.
pub fn spectrum_1d(p: &CircuitParams, phi_delta: f64, k: usize, g: &PhaseGrid1D) -> Result<Spectrum> {
    spectrum_1d_potential(p.ec, g, k, |phi| potential_1d(p, phi_delta, phi))
}

/// Smallest level splitting the tridiagonal solver resolves on `g` (GHz):
/// a thousand ulps of the operator norm.
pub fn resolution_floor(ec: f64, g: &PhaseGrid1D) -> f64 {
    let h = g.spacing();
    1e3 * f64::EPSILON * 8.0 * ec / (h * h)
}
