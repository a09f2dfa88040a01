use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use warpspec::experiments::{run, ExperimentConfig, ExperimentId, Overrides};
use warpspec::{Error, Result};

/// First Dirichlet eigenvalues of geodesic balls in rotationally symmetric manifolds.
#[derive(Debug, Parser)]
#[command(name = "warpspec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Golden eigenvalues of model balls.
    Sanity(Options),
    /// Bound sandwich along the collapsing capped-cylinder family.
    Family(Options),
    /// Unit balls on shrinking spheres.
    SphereFamily(Options),
    /// Curvature audit of the collapsing family.
    Curvature(Options),
    /// C⁰ estimate and strictness with numerical Busemann functions.
    Busemann(Options),
    /// Isoperimetric eigenvalue bound and asymptotic volume ratio.
    Kristaly(Options),
}

#[derive(Debug, Args)]
struct Options {
    /// JSON config; missing keys take the experiment's defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    i_min: Option<u32>,
    #[arg(long)]
    i_max: Option<u32>,
    /// Manifold dimension.
    #[arg(long)]
    n: Option<usize>,
    /// Finite-difference cells, a power of two ≥ 64.
    #[arg(long)]
    mesh: Option<usize>,
    /// Distance-lattice resolution per axis.
    #[arg(long)]
    grid: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Command {
    fn split(&self) -> (ExperimentId, &Options) {
        match self {
            Command::Sanity(o) => (ExperimentId::Sanity, o),
            Command::Family(o) => (ExperimentId::Family, o),
            Command::SphereFamily(o) => (ExperimentId::SphereFamily, o),
            Command::Curvature(o) => (ExperimentId::Curvature, o),
            Command::Busemann(o) => (ExperimentId::Busemann, o),
            Command::Kristaly(o) => (ExperimentId::Kristaly, o),
        }
    }
}

fn configure(id: ExperimentId, o: &Options) -> Result<ExperimentConfig> {
    let base = match &o.config {
        Some(path) => ExperimentConfig::from_file(id, path)?,
        None => ExperimentConfig::defaults(id),
    };
    let cfg = base.apply(&Overrides {
        i_min: o.i_min,
        i_max: o.i_max,
        dim: o.n,
        mesh: o.mesh,
        grid: o.grid,
        out: o.out.clone(),
    });
    cfg.validate()?;
    Ok(cfg)
}

fn execute(cli: &Cli) -> Result<bool> {
    let (id, options) = cli.command.split();
    let cfg = configure(id, options)?;
    let report = run(&cfg)?;
    let (csv, summary) = report.write()?;
    for row in report.rows.iter().filter(|r| !r.pass) {
        eprintln!("FAIL {} {}", id, row.case);
    }
    for (name, ok) in report.checks.iter().filter(|c| !c.1) {
        eprintln!("FAIL {id} check: {name} = {ok}");
    }
    println!("{} {} ({} rows, {:.2} s): {}, {}", if report.pass() { "PASS" } else { "FAIL" }, id, report.rows.len(), report.wall_seconds, csv.display(), summary.display());
    Ok(report.pass())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Io(_) => 2,
                ref other => other.exit_code(),
            };
            ExitCode::from(code as u8)
        }
    }
}
