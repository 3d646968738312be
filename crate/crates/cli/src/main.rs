use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::error::ErrorKind;
use clap::Parser;
use fluxsim_cli::{read_config, run, write_with_manifest, Format, Mode, Preset, SweepSpec};

/// Fluxon simulator sweeps.
///
/// Exit status: 0 on success, 1 on a configuration or I/O error, 2 when the
/// solver failed on every row.
#[derive(Debug, Parser)]
#[command(name = "fluxsim", version)]
struct Cli {
    mode: Mode,
    /// Flat JSON configuration; overrides the preset key by key.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// Output file; a manifest.json with its SHA-256 is written next to it.
    /// Without it the table goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Number of levels to solve for.
    #[arg(long)]
    levels: Option<usize>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Shots per cell in protocol mode.
    #[arg(long, default_value_t = 1000)]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Bit-flip probability per readout in protocol mode.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    /// Dispersive shifts in MHz for ramsey/protocol, skipping the 2D solve.
    #[arg(long, num_args = 2, value_names = ["JZ_F", "JZ_M"])]
    jz_mhz: Option<Vec<f64>>,
}

fn build(cli: &Cli) -> anyhow::Result<SweepSpec> {
    let file = cli.config.as_deref().map(read_config).transpose()?;
    let mut spec = SweepSpec::new(cli.mode, cli.preset, file)?;
    if let Some(k) = cli.levels {
        spec.levels = k;
    }
    spec.shots = cli.shots;
    spec.seed = cli.seed;
    spec.noise = cli.noise;
    spec.jz_override = cli.jz_mhz.as_ref().map(|j| (j[0] / 1e3, j[1] / 1e3));
    spec.check()?;
    Ok(spec)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("fluxsim: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn execute(cli: &Cli) -> anyhow::Result<ExitCode> {
    let spec = build(cli)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().context("starting worker pool")?;
    let out = pool.install(|| run(&spec))?;
    let text = out.table.render(cli.format)?;
    match &cli.out {
        Some(path) => {
            write_with_manifest(path, &text)?;
        }
        None => print!("{text}"),
    }
    if out.failed_rows > 0 {
        eprintln!("fluxsim: {} of {} rows failed", out.failed_rows, out.table.rows.len());
    }
    Ok(if out.all_failed() { ExitCode::from(2) } else { ExitCode::SUCCESS })
}
