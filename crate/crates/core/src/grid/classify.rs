use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::PhaseGrid2D;
use crate::circuit::{loop_phase_drops, potential_2d, potential_2d_gradient, potential_2d_hessian};
use crate::circuit::{CircuitParams, FluxConfig};
use crate::{Error, Result};

/// Cell holding the fluxon. `Empty` is the fluxon-free well.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Site {
    Left,
    Center,
    Right,
    Empty,
}

impl Site {
    pub fn symbol(self) -> char {
        match self {
            Site::Left => 'L',
            Site::Center => 'C',
            Site::Right => 'R',
            Site::Empty => '0',
        }
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// `|λ, k, ℓ⟩`: fluxon site plus node counts along `φ_f` and `φ_m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StateLabel {
    pub site: Site,
    pub k: u8,
    pub l: u8,
}

impl StateLabel {
    pub fn new(site: Site, k: u8, l: u8) -> Self {
        StateLabel { site, k, l }
    }
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{},{},{}⟩", self.site, self.k, self.l)
    }
}

/// Local minimum of the two-variable potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellSite {
    /// `None` for wells holding more than one fluxon or antifluxon.
    pub site: Option<Site>,
    pub phi_f: f64,
    pub phi_m: f64,
    pub energy: f64,
}

/// Site of the well at `(a, b)` from the loops whose phase drop exceeds π.
fn site_of(flux: &FluxConfig, a: f64, b: f64) -> Option<Site> {
    let d = loop_phase_drops(flux, a, b);
    let big: Vec<usize> = (0..3).filter(|&i| d[i].abs() > PI).collect();
    match big.as_slice() {
        [] => Some(Site::Empty),
        [0] => Some(Site::Left),
        [1] => Some(Site::Center),
        [2] => Some(Site::Right),
        _ => None,
    }
}

/// All local minima of the potential inside `g`, refined by Newton steps.
pub fn find_wells_2d(p: &CircuitParams, flux: &FluxConfig, g: &PhaseGrid2D) -> Vec<WellSite> {
    let (nf, nm) = (g.f.n, g.m.n);
    let u: Vec<f64> = (0..nm)
        .flat_map(|j| (0..nf).map(move |i| (i, j)))
        .map(|(i, j)| potential_2d(p, flux, g.f.point(i), g.m.point(j)))
        .collect();
    let mut wells: Vec<WellSite> = Vec::new();
    for j in 1..nm - 1 {
        for i in 1..nf - 1 {
            let c = u[g.index(i, j)];
            let lower = (-1i64..=1)
                .flat_map(|dj| (-1i64..=1).map(move |di| (di, dj)))
                .filter(|&d| d != (0, 0))
                .all(|(di, dj)| u[g.index((i as i64 + di) as usize, (j as i64 + dj) as usize)] > c);
            if !lower {
                continue;
            }
            let (mut a, mut b) = (g.f.point(i), g.m.point(j));
            for _ in 0..50 {
                let [ga, gb] = potential_2d_gradient(p, flux, a, b);
                let [[haa, hab], [_, hbb]] = potential_2d_hessian(p, a, b);
                let det = haa * hbb - hab * hab;
                if det <= 0.0 || haa <= 0.0 {
                    break;
                }
                let da = (hbb * ga - hab * gb) / det;
                let db = (haa * gb - hab * ga) / det;
                a -= da;
                b -= db;
                if da.abs().max(db.abs()) < 1e-14 {
                    break;
                }
            }
            if wells.iter().any(|w| (w.phi_f - a).hypot(w.phi_m - b) < 1e-6) {
                continue;
            }
            wells.push(WellSite { site: site_of(flux, a, b), phi_f: a, phi_m: b, energy: potential_2d(p, flux, a, b) });
        }
    }
    wells.sort_by(|x, y| x.energy.total_cmp(&y.energy));
    wells
}

/// Labels one eigenstate on `g` by the well nearest its density centroid and
/// the sign changes of `ψ` along each axis through that well.
///
/// Returns `Ok(None)` for states in a multi-fluxon well or with more than one
/// node along either axis, and an error when the centroid is farther than half
/// the smallest inter-well distance from every well.
pub fn classify_state(g: &PhaseGrid2D, psi: &[f64], wells: &[WellSite]) -> Result<Option<StateLabel>> {
    if wells.is_empty() {
        return Err(Error::MissingStates("no potential wells on the grid".into()));
    }
    let (nf, nm) = (g.f.n, g.m.n);
    let (mut sw, mut sa, mut sb) = (0.0, 0.0, 0.0);
    for j in 0..nm {
        let b = g.m.point(j);
        for i in 0..nf {
            let w = psi[g.index(i, j)].powi(2);
            sw += w;
            sa += w * g.f.point(i);
            sb += w * b;
        }
    }
    let (ca, cb) = (sa / sw, sb / sw);

    let mut spacing = f64::INFINITY;
    for (x, w) in wells.iter().enumerate() {
        for v in &wells[x + 1..] {
            spacing = spacing.min((w.phi_f - v.phi_f).hypot(w.phi_m - v.phi_m));
        }
    }
    let limit = if spacing.is_finite() { 0.5 * spacing } else { PI };
    let (well, distance) = wells
        .iter()
        .map(|w| (w, (w.phi_f - ca).hypot(w.phi_m - cb)))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("non-empty");
    if distance > limit {
        return Err(Error::AmbiguousClassification { distance, limit });
    }
    let Some(site) = well.site else { return Ok(None) };

    let (hf, hm) = (g.f.spacing(), g.m.spacing());
    let (i0, j0) = (g.f.nearest(well.phi_f), g.m.nearest(well.phi_m));
    let rf = (limit / hf).ceil() as usize;
    let rm = (limit / hm).ceil() as usize;
    let irange = i0.saturating_sub(rf)..=(i0 + rf).min(nf - 1);
    let jrange = j0.saturating_sub(rm)..=(j0 + rm).min(nm - 1);
    let peak = jrange
        .clone()
        .flat_map(|j| irange.clone().map(move |i| (i, j)))
        .map(|(i, j)| psi[g.index(i, j)].abs())
        .fold(0.0f64, f64::max);
    let floor = 0.05 * peak;

    let row_weight = |j: usize| irange.clone().map(|i| psi[g.index(i, j)].powi(2)).sum::<f64>();
    let col_weight = |i: usize| jrange.clone().map(|j| psi[g.index(i, j)].powi(2)).sum::<f64>();
    let best_row = jrange.clone().max_by(|&x, &y| row_weight(x).total_cmp(&row_weight(y))).expect("window");
    let best_col = irange.clone().max_by(|&x, &y| col_weight(x).total_cmp(&col_weight(y))).expect("window");
    let k = sign_changes(irange.clone().map(|i| psi[g.index(i, best_row)]), floor);
    let l = sign_changes(jrange.clone().map(|j| psi[g.index(best_col, j)]), floor);
    if k > 1 || l > 1 {
        return Ok(None);
    }
    Ok(Some(StateLabel::new(site, k as u8, l as u8)))
}

fn sign_changes(samples: impl Iterator<Item = f64>, floor: f64) -> usize {
    let mut last = 0.0f64;
    let mut count = 0;
    for v in samples.filter(|v| v.abs() >= floor) {
        if last != 0.0 && v.signum() != last {
            count += 1;
        }
        last = v.signum();
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::PhaseGrid1D;

    fn fig8() -> (CircuitParams, FluxConfig) {
        (CircuitParams::new(20.0, 22.0, 0.5, 0.15).unwrap(), FluxConfig::trapped_fluxon(1.0))
    }

    #[test]
    fn fluxon_wells_at_degeneracy() {
        let (p, f) = fig8();
        let g = PhaseGrid2D::around_vertices(&f, 121).unwrap();
        let wells = find_wells_2d(&p, &f, &g);
        let at = |s: Site| wells.iter().find(|w| w.site == Some(s)).copied().unwrap();
        let c = at(Site::Center);
        let l = at(Site::Left);
        let r = at(Site::Right);
        assert!(c.phi_f.abs() < 0.2 && c.phi_m.abs() < 0.2);
        assert!((l.phi_f - 2.0 * PI).abs() < 0.5 && l.phi_m.abs() < 0.5);
        assert!(r.phi_f.abs() < 0.5 && (r.phi_m + 2.0 * PI).abs() < 0.5);
        // Each refined minimum has zero gradient.
        for w in &wells {
            let [ga, gb] = potential_2d_gradient(&p, &f, w.phi_f, w.phi_m);
            assert!(ga.abs() < 1e-9 && gb.abs() < 1e-9);
        }
        assert!(wells.iter().any(|w| w.site.is_none()));
    }

    #[test]
    fn sign_change_counting_ignores_tails() {
        assert_eq!(sign_changes([1.0, 2.0, 1.0].into_iter(), 0.1), 0);
        assert_eq!(sign_changes([1e-3, -1e-3, 1.0, -1.0, -0.5].into_iter(), 0.1), 1);
        assert_eq!(sign_changes([1.0, -1.0, 1.0].into_iter(), 0.1), 2);
    }

    #[test]
    fn synthetic_states_are_labeled() {
        let (p, f) = fig8();
        let g = PhaseGrid2D::around_vertices(&f, 121).unwrap();
        let wells = find_wells_2d(&p, &f, &g);
        let l = wells.iter().find(|w| w.site == Some(Site::Left)).unwrap();
        let gauss = |k: bool, m: bool| -> Vec<f64> {
            let mut psi = vec![0.0; g.len()];
            for j in 0..g.m.n {
                for i in 0..g.f.n {
                    let x = g.f.point(i) - l.phi_f;
                    let y = g.m.point(j) - l.phi_m;
                    let mut v = (-(x * x + y * y) / 0.5).exp();
                    if k {
                        v *= x;
                    }
                    if m {
                        v *= y;
                    }
                    psi[g.index(i, j)] = v;
                }
            }
            psi
        };
        let label = |k, m| classify_state(&g, &gauss(k, m), &wells).unwrap();
        assert_eq!(label(false, false), Some(StateLabel::new(Site::Left, 0, 0)));
        assert_eq!(label(true, false), Some(StateLabel::new(Site::Left, 1, 0)));
        assert_eq!(label(false, true), Some(StateLabel::new(Site::Left, 0, 1)));
    }

    #[test]
    fn straddling_state_is_ambiguous() {
        let ax = PhaseGrid1D::centred(0.0, 6.0, 61).unwrap();
        let g = PhaseGrid2D::new(ax, ax);
        let wells = [
            WellSite { site: Some(Site::Left), phi_f: -3.0, phi_m: 0.0, energy: 0.0 },
            WellSite { site: Some(Site::Right), phi_f: 3.0, phi_m: 0.0, energy: 0.0 },
            WellSite { site: Some(Site::Center), phi_f: 0.0, phi_m: -5.5, energy: 0.0 },
        ];
        let psi: Vec<f64> = (0..g.len())
            .map(|x| {
                let (i, j) = (x % g.f.n, x / g.f.n);
                let (a, b) = (g.f.point(i), g.m.point(j));
                (-(a - 3.0).powi(2) - (b - 3.0).powi(2)).exp() + (-(a + 3.0).powi(2) - (b - 3.0).powi(2)).exp()
            })
            .collect();
        assert!(matches!(classify_state(&g, &psi, &wells), Err(Error::AmbiguousClassification { .. })));
    }
}
