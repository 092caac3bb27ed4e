//! The `cqed` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 numerical failure (including a
//! failed audit row).

pub mod config;
pub mod figures;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

pub use config::ScenarioConfig;
pub use figures::{audit_table, run_figure, run_rb87, FigureId, Rb87Summary, Table};

use crate::oracle::run_audit;
use crate::{Error, Execution, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "CQED_THREADS";

#[derive(Debug, Parser)]
#[command(name = "cqed", version, about = "Heralded atom-atom entanglement by photon state swapping")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Regenerate a figure as CSV (and optionally SVG).
    Fig(FigArgs),
    /// Run the ⁸⁷Rb scenario and print its summary.
    Rb87(Rb87Args),
    /// Compare closed forms with the ODE oracles on random draws.
    Audit(AuditArgs),
}

#[derive(Debug, clap::Args)]
pub struct GridArgs {
    /// Frequency grid nodes (odd).
    #[arg(long)]
    pub grid_points: Option<usize>,
    /// Grid half-width in multiples of the emitter FWHM.
    #[arg(long)]
    pub grid_width: Option<f64>,
    /// Scenario file (TOML).
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct FigArgs {
    #[arg(long, value_enum)]
    pub id: FigureId,
    /// Output directory; CSV goes to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write an SVG next to the CSV.
    #[arg(long)]
    pub svg: bool,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, clap::Args)]
pub struct Rb87Args {
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, clap::Args)]
pub struct AuditArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn load_config(args: &GridArgs, default: ScenarioConfig) -> Result<ScenarioConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            ScenarioConfig::from_toml_str(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        }
        None => default,
    };
    if let Some(n) = args.grid_points {
        cfg.grid.points = n;
    }
    if let Some(w) = args.grid_width {
        cfg.grid.width_factor = w;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
}

fn plot_series(id: FigureId) -> Option<(&'static str, &'static [&'static str])> {
    match id {
        FigureId::Fig2 => Some(("g1", &["p_cav", "fwhm"])),
        FigureId::Fig3 => Some(("gamma1", &["p_cav", "fwhm"])),
        FigureId::Fig4 => Some(("t_in_2_over_kappa2", &["fidelity"])),
        FigureId::Fig5 => Some(("gamma1", &["fidelity_gamma2_0", "fidelity_gamma2_1"])),
        FigureId::Fig6 => Some(("gamma1", &["p_gamma2_0", "p_gamma2_1"])),
        FigureId::Rb87 | FigureId::Audit => None,
    }
}

fn fig(args: &FigArgs, exec: Execution, out: &mut dyn Write) -> Result<i32> {
    let mut cfg = load_config(&args.grid, args.id.default_config())?;
    let svg = args.svg || cfg.output.svg;
    let dir = args.out.clone().or(cfg.output.dir.take());
    let table = run_figure(args.id, &cfg, exec)?;
    let csv = table.to_csv()?;
    let failed = args.id == FigureId::Audit && table.rows.iter().any(|r| r.last().is_some_and(|p| p != "true"));
    match dir {
        Some(dir) => {
            std::fs::create_dir_all(&dir).map_err(|e| Error::Config(format!("{}: {e}", dir.display())))?;
            let path = dir.join(format!("{}.csv", args.id.name()));
            write_file(&path, &csv)?;
            writeln!(out, "wrote {}", path.display())?;
            if let (true, Some((x, ys))) = (svg, plot_series(args.id)) {
                if let Some(doc) = svg::render(&table, x, ys) {
                    let path = dir.join(format!("{}.svg", args.id.name()));
                    write_file(&path, &doc)?;
                    writeln!(out, "wrote {}", path.display())?;
                }
            }
        }
        None => out.write_all(csv.as_bytes())?,
    }
    Ok(if failed { EXIT_NUMERICAL } else { EXIT_OK })
}

fn audit(args: &AuditArgs, exec: Execution, out: &mut dyn Write) -> Result<i32> {
    let rows = run_audit(args.seed, args.n, exec)?;
    let csv = audit_table(&rows, args.seed).to_csv()?;
    match &args.out {
        Some(path) => write_file(path, &csv)?,
        None => out.write_all(csv.as_bytes())?,
    }
    Ok(if rows.iter().all(|r| r.pass) { EXIT_OK } else { EXIT_NUMERICAL })
}

fn thread_limit() -> Result<()> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => {
                crate::exec::set_thread_limit(n);
                Ok(())
            }
            _ => Err(Error::Config(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        },
        Err(_) => Ok(()),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code. Normal output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = thread_limit().and_then(|()| {
        let exec = Execution::default();
        match &cli.command {
            Command::Fig(a) => fig(a, exec, out),
            Command::Rb87(a) => {
                let cfg = load_config(&a.grid, ScenarioConfig::rubidium())?;
                let s = run_rb87(&cfg, exec)?;
                out.write_all(s.report().as_bytes())?;
                Ok(EXIT_OK)
            }
            Command::Audit(a) => audit(a, exec, out),
        }
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_usage() {
                EXIT_USAGE
            } else {
                EXIT_NUMERICAL
            }
        }
    }
}
