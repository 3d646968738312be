//! Per-mode sweeps. Rows are computed in parallel and collected in sweep
//! order, so the thread count never changes the output.

use fluxsim_core::grid::resolution_floor;
use fluxsim_core::units::MHZ_PER_GHZ;
use fluxsim_core::{
    asymptotic_splitting, beats, current_elements, extract_qutrit_qubit, ramsey_fringe, run_protocol,
    saturation_current, spectrum_1d, spectrum_2d, two_level_fit, wkb_splitting, CircuitParams, Error, FluxConfig,
    Initial, Position, ProtocolScenario, QutritQubitModel, RamseyCalibration, Site, Spectrum, StateLabel,
};
use rayon::prelude::*;

use crate::setup::{Mode, SweepSpec};
use crate::table::{Table, Value};

/// A finished sweep and how many of its rows failed outright.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub table: Table,
    pub failed_rows: usize,
}

impl SweepOutput {
    pub fn all_failed(&self) -> bool {
        !self.table.rows.is_empty() && self.failed_rows == self.table.rows.len()
    }
}

/// Short machine-readable status for a row that hit `e`.
pub fn status_code(e: &Error) -> &'static str {
    match e {
        Error::NonPositiveEnergy { .. } => "non-positive-energy",
        Error::InvalidGrid(_) => "invalid-grid",
        Error::InvalidArgument(_) => "invalid-argument",
        Error::GridTooNarrow { .. } | Error::BoundaryAmplitude { .. } => "grid-too-narrow",
        Error::NoConvergence { .. } | Error::NotConverging { .. } => "no-convergence",
        Error::AmbiguousClassification { .. } => "ambiguous-classification",
        Error::NoDoubleWell { .. } => "no-double-well",
        Error::NotAWell { .. } => "not-a-well",
        Error::LevelAboveBarrier { .. } => "level-above-barrier",
        Error::AsymmetricWells { .. } => "asymmetric-wells",
        Error::InvalidBeta(_) => "invalid-beta",
        Error::OutsideLinearWindow { .. } => "outside-linear-window",
        Error::MissingStates(_) => "missing-states",
        Error::NoCommensurateDelay { .. } => "no-commensurate-delay",
    }
}

struct Row {
    values: Vec<Value>,
    failed: bool,
}

impl Row {
    fn ok(mut values: Vec<Value>, status: &str) -> Row {
        values.push(status.into());
        Row { values, failed: false }
    }

    fn failed(x: f64, width: usize, status: &str) -> Row {
        let mut values = vec![Value::Num(x)];
        values.resize(width - 1, Value::Num(f64::NAN));
        values.push(status.into());
        Row { values, failed: true }
    }
}

fn nums(xs: impl IntoIterator<Item = f64>) -> Vec<Value> {
    xs.into_iter().map(Value::Num).collect()
}

/// Runs the sweep described by `spec` on the current rayon pool.
pub fn run(spec: &SweepSpec) -> anyhow::Result<SweepOutput> {
    spec.check()?;
    let mut out = match spec.mode {
        Mode::Spectrum1d => spectrum1d(spec)?,
        Mode::Spectrum2d => spectrum2d(spec)?,
        Mode::Beta => beta(spec)?,
        Mode::Current => current(spec)?,
        Mode::WkbCompare => wkb_compare(spec)?,
        Mode::Beats => beats_trace(spec)?,
        Mode::Ramsey => ramsey(spec)?,
        Mode::Protocol => protocol(spec)?,
    };
    let t = &mut out.table;
    t.meta("mode", spec.mode);
    t.meta("preset", spec.preset.map_or("none", |p| p.name()));
    t.meta("config", serde_json::to_string(&spec.config)?);
    t.meta("levels", spec.levels);
    t.meta("version", env!("CARGO_PKG_VERSION"));
    Ok(out)
}

fn collect(columns: Vec<String>, points: &[f64], row: impl Fn(f64) -> Row + Sync) -> SweepOutput {
    let rows: Vec<Row> = points.par_iter().map(|&x| row(x)).collect();
    let mut table = Table::new(columns);
    let failed_rows = rows.iter().filter(|r| r.failed).count();
    for r in rows {
        table.push(r.values);
    }
    SweepOutput { table, failed_rows }
}

fn spectrum1d(spec: &SweepSpec) -> anyhow::Result<SweepOutput> {
    let p = spec.params()?;
    let g = spec.grid_1d()?;
    let k = spec.levels;
    let mut cols = vec!["phi_delta".to_owned()];
    cols.extend((0..k).map(|i| format!("e{i}")));
    cols.extend(["gap01".into(), "status".into()]);
    let width = cols.len();
    Ok(collect(cols, &spec.points(), |x| match spectrum_1d(&p, x, k, &g) {
        Ok(s) => {
            let gap = if k >= 2 { s.gap(0, 1) } else { f64::NAN };
            Row::ok(nums(std::iter::once(x).chain(s.energies).chain([gap])), "ok")
        }
        Err(e) => Row::failed(x, width, status_code(&e)),
    }))
}

fn current(spec: &SweepSpec) -> anyhow::Result<SweepOutput> {
    let p = spec.params()?;
    let g = spec.grid_1d()?;
    let cols = ["phi_delta", "i00", "i11", "i01", "saturation", "status"].map(String::from).to_vec();
    let width = cols.len();
    let mut out = collect(cols, &spec.points(), |x| {
        let c = spectrum_1d(&p, x, 2, &g).and_then(|s| current_elements(&s, &g));
        match c {
            Ok(c) => {
                // The sign of i01 follows the arbitrary eigenvector phases.
                let sat = saturation_current(&p, x).unwrap_or(f64::NAN);
                Row::ok(nums([x, c.i00, c.i11, c.i01.abs(), sat]), "ok")
            }
            Err(e) => Row::failed(x, width, status_code(&e)),
        }
    });
    out.table.meta("current_unit", "flux quantum per inductance");
    Ok(out)
}

/// Numeric splitting at `Φ_Δ = Φ₀`, or the reason it is unavailable.
fn numeric_splitting(p: &CircuitParams, spec: &SweepSpec) -> std::result::Result<f64, &'static str> {
    let g = spec.grid_1d().map_err(|_| "invalid-grid")?;
    let s = spectrum_1d(p, 1.0, 2, &g).map_err(|e| status_code(&e))?;
    let d = s.gap(0, 1);
    if d < resolution_floor(p.ec, &g) {
        return Err("unresolved");
    }
    Ok(d)
}

struct Splittings {
    values: [f64; 3],
    issues: Vec<String>,
}

fn splittings(p: &CircuitParams, spec: &SweepSpec) -> Splittings {
    let mut issues = Vec::new();
    let mut take = |name: &str, r: std::result::Result<f64, &str>| {
        r.unwrap_or_else(|code| {
            issues.push(format!("{name}:{code}"));
            f64::NAN
        })
    };
    let numeric = take("numeric", numeric_splitting(p, spec));
    let wkb = take("wkb", wkb_splitting(p, 1.0).map_err(|e| status_code(&e)));
    let asym = take("asymptotic", asymptotic_splitting(p).map_err(|e| status_code(&e)));
    Splittings { values: [numeric, wkb, asym], issues }
}

fn status_of(issues: &[String]) -> String {
    if issues.is_empty() {
        "ok".into()
    } else {
        issues.join(";")
    }
}

fn beta(spec: &SweepSpec) -> anyhow::Result<SweepOutput> {
    let c = &spec.config;
    let (ec, el) = (c.ec_ghz.unwrap_or(f64::NAN), c.el_ghz.unwrap_or(f64::NAN));
    let cols =
        ["beta", "ejf_ghz", "delta_numeric", "delta_wkb", "delta_asymptotic", "status"].map(String::from).to_vec();
    let width = cols.len();
    let out = collect(cols, &spec.points(), |b| {
        let p = match CircuitParams::two_cell(b * el, ec, el) {
            Ok(p) => p,
            Err(e) => return Row::failed(b, width, status_code(&e)),
        };
        let s = splittings(&p, spec);
        let failed = s.values.iter().all(|v| v.is_nan());
        let mut row = Row::ok(nums([b, p.ejf].into_iter().chain(s.values)), &status_of(&s.issues));
        row.failed = failed;
        row
    });
    Ok(out)
}

fn wkb_compare(spec: &SweepSpec) -> anyhow::Result<SweepOutput> {
    let c = &spec.config;
    let (ec, el) = (c.ec_ghz.unwrap_or(f64::NAN), c.el_ghz.unwrap_or(f64::NAN));
    let cols = [
        "ejf_ghz",
        "beta",
        "delta_numeric",
        "delta_wkb",
        "delta_asymptotic",
        "ln_ratio_wkb",
        "ln_ratio_asymptotic",
        "status",
    ]
    .map(String::from)
    .to_vec();
    let width = cols.len();
    Ok(collect(cols, &spec.points(), |ej| {
        let p = match CircuitParams::two_cell(ej, ec, el) {
            Ok(p) => p,
            Err(e) => return Row::failed(ej, width, status_code(&e)),
        };
        let s = splittings(&p, spec);
        let [n, w, a] = s.values;
        let mut row = Row::ok(nums([ej, p.beta_f(), n, w, a, (w / n).ln(), (a / n).ln()]), &status_of(&s.issues));
        row.failed = n.is_nan();
        row
    }))
}

/// Two-level model at the configured flux, from the spectrum at `Φ₀`.
fn two_level(spec: &SweepSpec) -> fluxsim_core::Result<fluxsim_core::TwoLevelModel> {
    let p = spec.params().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let g = spec.grid_1d().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let s = spectrum_1d(&p, 1.0, 2, &g)?;
    let c = current_elements(&s, &g)?;
    two_level_fit(&p, spec.config.flux().delta_f(), s.gap(0, 1), c.i01)
}

fn beats_trace(spec: &SweepSpec) -> anyhow::Result<SweepOutput> {
    let c = &spec.config;
    let (start, stop, steps) = (c.sweep_start.unwrap(), c.sweep_stop.unwrap(), c.sweep_steps.unwrap());
    if start != 0.0 || steps < 2 || !(stop > 0.0) {
        anyhow::bail!("beats sweep must start at 0 ns and span a positive time with at least two steps");
    }
    let cols = ["t_ns", "p_left", "p_right", "status"].map(String::from).to_vec();
    let mut table = Table::new(cols);
    let m = two_level(spec).and_then(|m| beats(&m, stop, stop / (steps - 1) as f64, Initial::Left).map(|t| (m, t)));
    let failed_rows = match m {
        Ok((m, t)) => {
            table.meta("delta_ghz", m.delta);
            table.meta("epsilon_ghz", m.epsilon);
            table.meta("flux_offset", m.flux_offset);
            for i in 0..t.times.len() {
                table.push(vec![t.times[i].into(), t.p_left[i].into(), t.p_right[i].into(), "ok".into()]);
            }
            0
        }
        Err(e) => {
            for x in spec.points() {
                table.push(vec![x.into(), f64::NAN.into(), f64::NAN.into(), status_code(&e).into()]);
            }
            steps
        }
    };
    Ok(SweepOutput { table, failed_rows })
}

const LABELS: [(Site, u8, u8); 9] = [
    (Site::Left, 0, 0),
    (Site::Center, 0, 0),
    (Site::Right, 0, 0),
    (Site::Left, 1, 0),
    (Site::Center, 1, 0),
    (Site::Right, 1, 0),
    (Site::Left, 0, 1),
    (Site::Center, 0, 1),
    (Site::Right, 0, 1),
];

/// Fluxes with `Φ₁ + Φ₂` and `Φ_m` held and `Φ₂ − Φ₁ = delta_f`.
pub fn flux_at(base: &FluxConfig, delta_f: f64) -> FluxConfig {
    let sigma = base.phi1 + base.phi2;
    FluxConfig::new(0.5 * (sigma - delta_f), 0.5 * (sigma + delta_f), base.phim)
}

fn spectrum2d(spec: &SweepSpec) -> anyhow::Result<SweepOutput> {
    let p = spec.params()?;
    let base = spec.config.flux();
    let k = spec.levels;
    let mut cols = vec!["phi_delta_f".to_owned()];
    cols.extend((0..k).map(|i| format!("e{i}")));
    for (site, kf, km) in LABELS {
        cols.push(format!("e_{}{kf}{km}", site.symbol()));
    }
    for q in ["f", "m"] {
        for site in ["L", "C", "R"] {
            cols.push(format!("t_{q}_{site}"));
        }
    }
    cols.extend(["jz_f_mhz".into(), "jz_m_mhz".into(), "status".into()]);
    let width = cols.len();
    Ok(collect(cols, &spec.points(), |x| {
        let flux = flux_at(&base, x);
        let s = spec
            .grid_2d(&flux)
            .map_err(|e| Error::InvalidArgument(e.to_string()))
            .and_then(|g| spectrum_2d(&p, &flux, k, &g));
        let s = match s {
            Ok(s) => s,
            Err(e) => return Row::failed(x, width, status_code(&e)),
        };
        let mut v = nums(std::iter::once(x).chain(s.energies.iter().copied()));
        v.extend(nums(LABELS.map(|(site, a, b)| s.energy_of(StateLabel::new(site, a, b)).unwrap_or(f64::NAN))));
        match extract_qutrit_qubit(&s) {
            Ok(m) => {
                v.extend(nums(m.transitions_f.into_iter().chain(m.transitions_m)));
                v.extend(nums([m.jz_f * MHZ_PER_GHZ, m.jz_m * MHZ_PER_GHZ]));
                Row::ok(v, "ok")
            }
            Err(e) => {
                v.resize(width - 1, Value::Num(f64::NAN));
                Row::ok(v, status_code(&e))
            }
        }
    }))
}

/// Dispersive model at the configured flux: Richardson combination of the
/// configured 2D grid and the grid with twice its spacing.
pub fn three_cell_model(
    p: &CircuitParams,
    flux: &FluxConfig,
    n: usize,
    levels: usize,
) -> anyhow::Result<QutritQubitModel> {
    let solve = |n: usize| -> anyhow::Result<QutritQubitModel> {
        let g = fluxsim_core::PhaseGrid2D::around_vertices(flux, n)?;
        let s: Spectrum = spectrum_2d(p, flux, levels, &g)?;
        Ok(extract_qutrit_qubit(&s)?)
    };
    let (coarse, fine) = rayon::join(|| solve(n.div_ceil(2)), || solve(n));
    Ok(QutritQubitModel::richardson(&coarse?, &fine?))
}

/// Dispersive shifts (GHz) from the override or the three-cell solve.
fn shifts(spec: &SweepSpec, table: &mut Table) -> std::result::Result<(f64, f64), String> {
    let (jf, jm) = match spec.jz_override {
        Some(j) => {
            table.meta("jz_source", "override");
            j
        }
        None => {
            let p = spec.params().map_err(|e| e.to_string())?;
            let n = spec.config.grid2d_n.unwrap_or(201);
            let m = three_cell_model(&p, &spec.config.flux(), n, spec.levels)
                .map_err(|e| e.downcast_ref::<Error>().map_or("invalid-argument", status_code).to_owned())?;
            table.meta("jz_source", format!("richardson n={} and n={n}", n.div_ceil(2)));
            (m.jz_f, m.jz_m)
        }
    };
    table.meta("jz_f_mhz", jf * MHZ_PER_GHZ);
    table.meta("jz_m_mhz", jm * MHZ_PER_GHZ);
    Ok((jf, jm))
}

fn ramsey(spec: &SweepSpec) -> anyhow::Result<SweepOutput> {
    let cols = ["dt_ns", "p1_f_shifted", "p1_f_unshifted", "p1_m_shifted", "p1_m_unshifted", "status"]
        .map(String::from)
        .to_vec();
    let mut table = Table::new(cols);
    let delays = spec.points();
    let cal = shifts(spec, &mut table)
        .and_then(|(jf, jm)| RamseyCalibration::at_double_shift(jf, jm).map_err(|e| status_code(&e).to_owned()));
    let failed_rows = match cal {
        Ok(c) => {
            table.meta("detuning_f_ghz", c.f.detuning);
            table.meta("detuning_m_ghz", c.m.detuning);
            table.meta("delay_f_ns", c.f.delay);
            table.meta("delay_m_ns", c.m.delay);
            let fringes = [
                ramsey_fringe(c.f.detuning, c.f.jz, true, &delays),
                ramsey_fringe(c.f.detuning, c.f.jz, false, &delays),
                ramsey_fringe(c.m.detuning, c.m.jz, true, &delays),
                ramsey_fringe(c.m.detuning, c.m.jz, false, &delays),
            ];
            for (i, &t) in delays.iter().enumerate() {
                let mut row = nums(std::iter::once(t).chain(fringes.iter().map(|f| f[i])));
                row.push("ok".into());
                table.push(row);
            }
            0
        }
        Err(code) => {
            for &t in &delays {
                let mut row = nums([t, f64::NAN, f64::NAN, f64::NAN, f64::NAN]);
                row.push(code.clone().into());
                table.push(row);
            }
            delays.len()
        }
    };
    Ok(SweepOutput { table, failed_rows })
}

fn protocol(spec: &SweepSpec) -> anyhow::Result<SweepOutput> {
    let cols = [
        "truth",
        "shots",
        "n_f0m0",
        "n_f0m1",
        "n_f1m0",
        "n_f1m1",
        "decoded_L",
        "decoded_C",
        "decoded_R",
        "decoded_invalid",
        "accuracy",
        "status",
    ]
    .map(String::from)
    .to_vec();
    let width = cols.len();
    let mut table = Table::new(cols);
    table.meta("shots", spec.shots);
    table.meta("seed", spec.seed);
    table.meta("flip_noise", spec.noise);
    let cal = shifts(spec, &mut table)
        .and_then(|(jf, jm)| RamseyCalibration::at_double_shift(jf, jm).map_err(|e| status_code(&e).to_owned()));
    let mut failed_rows = 0;
    for (i, truth) in Position::CELLS.into_iter().enumerate() {
        let outcome = cal.clone().and_then(|c| {
            let sc = ProtocolScenario { calibration: c, flip_noise: spec.noise };
            run_protocol(&sc, truth, spec.shots, spec.seed.wrapping_add(i as u64))
                .map_err(|e| status_code(&e).to_owned())
        });
        let mut row = vec![Value::Text(truth.to_string())];
        match outcome {
            Ok(o) => {
                row.push((o.shots as f64).into());
                row.extend(o.histogram.iter().chain(&o.decoded).map(|&n| Value::Num(n as f64)));
                row.push(o.accuracy().into());
                row.push("ok".into());
            }
            Err(code) => {
                row.resize(width - 1, Value::Num(f64::NAN));
                row.push(code.into());
                failed_rows += 1;
            }
        }
        table.push(row);
    }
    Ok(SweepOutput { table, failed_rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flux_at_keeps_sum_and_middle() {
        let f = flux_at(&FluxConfig::new(0.0, 1.0, 0.25), 0.9);
        assert!((f.phi1 + f.phi2 - 1.0).abs() < 1e-15);
        assert!((f.delta_f() - 0.9).abs() < 1e-15);
        assert_eq!(f.phim, 0.25);
    }

    #[test]
    fn failed_row_shape() {
        let r = Row::failed(1.5, 4, "x");
        assert_eq!(r.values.len(), 4);
        assert!(r.failed);
        assert_eq!(r.values[3], Value::Text("x".into()));
    }
}
