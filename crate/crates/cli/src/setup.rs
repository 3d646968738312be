//! Run specification: mode, presets and the resolved configuration.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use anyhow::{bail, Context};
use clap::ValueEnum;
use fluxsim_core::{CircuitConfig, CircuitParams, FluxConfig, PhaseGrid1D, PhaseGrid2D};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Two-cell levels versus flux difference.
    Spectrum1d,
    /// Three-cell labeled levels and dispersive shifts versus flux difference.
    Spectrum2d,
    /// Numeric, WKB and asymptotic splittings versus β.
    Beta,
    /// Current matrix elements versus flux difference.
    Current,
    /// Semiclassical-to-numeric splitting ratios versus E_J.
    WkbCompare,
    /// Two-level quantum beats in time.
    Beats,
    /// Ramsey fringes of both readout qubits versus delay.
    Ramsey,
    /// Seeded shots of the position readout for each cell.
    Protocol,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Spectrum1d => "spectrum1d",
            Mode::Spectrum2d => "spectrum2d",
            Mode::Beta => "beta",
            Mode::Current => "current",
            Mode::WkbCompare => "wkb-compare",
            Mode::Beats => "beats",
            Mode::Ramsey => "ramsey",
            Mode::Protocol => "protocol",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// Two-cell, E_J = 2 GHz, Φ_Δ ∈ [0.9, 1.1].
    Fig4,
    /// Two-cell, E_J = 15 GHz, Φ_Δ ∈ [0.9, 1.1].
    Fig5,
    /// Splitting versus β ∈ [10, 100] at E_C = 1 GHz.
    Fig6,
    /// Current elements, E_J = 2 GHz.
    Fig7a,
    /// Current elements, E_J = 15 GHz.
    Fig7b,
    /// Three-cell trapped fluxon, Φ_Δf ∈ [0.9, 1.1].
    Fig8,
    /// Three-cell without a trapped fluxon.
    Nofluxon,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
            Preset::Fig6 => "fig6",
            Preset::Fig7a => "fig7a",
            Preset::Fig7b => "fig7b",
            Preset::Fig8 => "fig8",
            Preset::Nofluxon => "nofluxon",
        }
    }

    /// Mode whose sweep axis the preset's sweep keys describe.
    pub fn default_mode(self) -> Mode {
        match self {
            Preset::Fig4 | Preset::Fig5 => Mode::Spectrum1d,
            Preset::Fig6 => Mode::Beta,
            Preset::Fig7a | Preset::Fig7b => Mode::Current,
            Preset::Fig8 | Preset::Nofluxon => Mode::Spectrum2d,
        }
    }

    /// Preset values for `mode`; sweep keys are dropped when the preset's
    /// axis means something else in that mode.
    pub fn config_for(self, mode: Mode) -> CircuitConfig {
        let mut c = self.config();
        let same_axis =
            matches!((self.default_mode(), mode), (Mode::Spectrum1d | Mode::Current, Mode::Spectrum1d | Mode::Current));
        if mode != self.default_mode() && !same_axis {
            c.sweep_start = None;
            c.sweep_stop = None;
            c.sweep_steps = None;
        }
        c
    }

    pub fn config(self) -> CircuitConfig {
        let two_cell = |ejf: f64| CircuitConfig {
            ejf_ghz: Some(ejf),
            ec_ghz: Some(0.5),
            el_ghz: Some(0.15),
            sweep_start: Some(0.9),
            sweep_stop: Some(1.1),
            sweep_steps: Some(81),
            ..CircuitConfig::default()
        };
        let three_cell = CircuitConfig {
            ejf_ghz: Some(20.0),
            ejm_ghz: Some(22.0),
            ec_ghz: Some(0.5),
            el_ghz: Some(0.15),
            ..CircuitConfig::default()
        };
        match self {
            Preset::Fig4 | Preset::Fig7a => two_cell(2.0),
            // Deep wells put outer-well levels among the lowest four; widen
            // the domain at the default spacing.
            Preset::Fig5 | Preset::Fig7b => CircuitConfig {
                grid1d_min: Some(-4.0 * PI),
                grid1d_max: Some(6.0 * PI),
                grid1d_n: Some(3335),
                ..two_cell(15.0)
            },
            Preset::Fig6 => CircuitConfig {
                ec_ghz: Some(1.0),
                el_ghz: Some(0.15),
                grid1d_min: Some(-4.0 * PI),
                grid1d_max: Some(6.0 * PI),
                grid1d_n: Some(3335),
                sweep_start: Some(10.0),
                sweep_stop: Some(100.0),
                sweep_steps: Some(91),
                ..CircuitConfig::default()
            },
            Preset::Fig8 => {
                let f = FluxConfig::trapped_fluxon(1.0);
                CircuitConfig {
                    phi1: Some(f.phi1),
                    phi2: Some(f.phi2),
                    phim: Some(f.phim),
                    sweep_start: Some(0.9),
                    sweep_stop: Some(1.1),
                    sweep_steps: Some(21),
                    ..three_cell
                }
            }
            Preset::Nofluxon => CircuitConfig {
                phi1: Some(0.0),
                phi2: Some(0.0),
                phim: Some(0.0),
                sweep_start: Some(0.0),
                sweep_stop: Some(0.0),
                sweep_steps: Some(1),
                ..three_cell
            },
        }
    }
}

/// Mode defaults applied underneath presets and config files.
fn mode_defaults(mode: Mode) -> CircuitConfig {
    let sweep = |start: f64, stop: f64, steps: usize| CircuitConfig {
        sweep_start: Some(start),
        sweep_stop: Some(stop),
        sweep_steps: Some(steps),
        ..CircuitConfig::default()
    };
    let mut c = match mode {
        Mode::Spectrum1d | Mode::Current => sweep(0.9, 1.1, 81),
        Mode::Spectrum2d => sweep(1.0, 1.0, 1),
        Mode::Beta => sweep(10.0, 100.0, 91),
        Mode::WkbCompare => sweep(1.5, 15.0, 10),
        Mode::Beats => sweep(0.0, 20.0, 401),
        Mode::Ramsey => sweep(0.0, 200.0, 401),
        Mode::Protocol => sweep(0.0, 0.0, 1),
    };
    let g = PhaseGrid1D::default_two_cell();
    c.grid1d_min = Some(g.phi_min);
    c.grid1d_max = Some(g.phi_max);
    c.grid1d_n = Some(g.n);
    c.grid2d_n = Some(201);
    c
}

/// Everything one CLI run needs.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub mode: Mode,
    pub preset: Option<Preset>,
    /// Fully resolved configuration (mode defaults, then preset, then file).
    pub config: CircuitConfig,
    pub levels: usize,
    pub shots: u64,
    pub seed: u64,
    pub noise: f64,
    /// Dispersive shifts in GHz that skip the three-cell solve.
    pub jz_override: Option<(f64, f64)>,
}

impl SweepSpec {
    pub fn new(mode: Mode, preset: Option<Preset>, file: Option<CircuitConfig>) -> anyhow::Result<Self> {
        if preset.is_none() && file.is_none() {
            bail!("either --config or --preset is required");
        }
        let mut config = mode_defaults(mode);
        if let Some(p) = preset {
            config = config.overlay(&p.config_for(mode));
        }
        if let Some(f) = &file {
            config = config.overlay(f);
        }
        let levels = match mode {
            Mode::Spectrum2d | Mode::Ramsey | Mode::Protocol => 12,
            _ => 4,
        };
        let spec = SweepSpec { mode, preset, config, levels, shots: 1000, seed: 0, noise: 0.0, jz_override: None };
        spec.check()?;
        Ok(spec)
    }

    /// Validates everything that can be checked before solving.
    pub fn check(&self) -> anyhow::Result<()> {
        let c = &self.config;
        let start = c.sweep_start.context("missing sweep_start")?;
        let stop = c.sweep_stop.context("missing sweep_stop")?;
        let steps = c.sweep_steps.context("missing sweep_steps")?;
        if steps == 0 || !start.is_finite() || !stop.is_finite() {
            bail!("sweep needs finite bounds and at least one step");
        }
        if self.levels == 0 {
            bail!("level count must be positive");
        }
        if !(0.0..=1.0).contains(&self.noise) {
            bail!("noise must lie in [0, 1]");
        }
        self.grid_1d()?;
        if matches!(self.mode, Mode::Spectrum2d | Mode::Ramsey | Mode::Protocol) {
            let n = c.grid2d_n.context("missing grid2d_n")?;
            if n < 11 || n % 2 == 0 {
                bail!("grid2d_n must be odd and at least 11, got {n}");
            }
        }
        match self.mode {
            // β sweeps set E_J per row.
            Mode::Beta => {
                let ok = c.ec_ghz.is_some() && c.el_ghz.is_some();
                if !ok {
                    bail!("beta mode needs ec_ghz and el_ghz");
                }
                CircuitParams::two_cell(1.0, c.ec_ghz.unwrap(), c.el_ghz.unwrap())?;
            }
            Mode::WkbCompare => {
                CircuitParams::two_cell(1.0, c.ec_ghz.context("missing ec_ghz")?, c.el_ghz.context("missing el_ghz")?)?;
            }
            _ => {
                c.params()?;
            }
        }
        Ok(())
    }

    pub fn params(&self) -> anyhow::Result<CircuitParams> {
        Ok(self.config.params()?)
    }

    pub fn grid_1d(&self) -> anyhow::Result<PhaseGrid1D> {
        let c = &self.config;
        Ok(PhaseGrid1D::new(
            c.grid1d_min.context("missing grid1d_min")?,
            c.grid1d_max.context("missing grid1d_max")?,
            c.grid1d_n.context("missing grid1d_n")?,
        )?)
    }

    pub fn grid_2d(&self, flux: &FluxConfig) -> anyhow::Result<PhaseGrid2D> {
        Ok(PhaseGrid2D::around_vertices(flux, self.config.grid2d_n.context("missing grid2d_n")?)?)
    }

    /// Sweep points from `sweep_start` to `sweep_stop` inclusive.
    pub fn points(&self) -> Vec<f64> {
        let c = &self.config;
        linspace(c.sweep_start.unwrap_or(0.0), c.sweep_stop.unwrap_or(0.0), c.sweep_steps.unwrap_or(1))
    }
}

/// `n` evenly spaced points; both ends exact, a single point is `start`.
pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![start],
        _ => (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                start * (1.0 - t) + stop * t
            })
            .collect(),
    }
}

/// Reads a flat JSON config file.
pub fn read_config(path: &Path) -> anyhow::Result<CircuitConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}
