use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use stokes_core::catalog::DEFAULT_DELTA;
use stokes_core::cli::{self, ExitStatus, Format, MeshConfig, RunConfig};
use stokes_core::QuadratureSpec;

#[derive(Parser)]
#[command(
    name = "stokes",
    version,
    about = "Verify Green/Stokes identities on parametric surfaces"
)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario or `all` and write a report.
    Run {
        scenario: String,
        #[arg(long, default_value_t = DEFAULT_DELTA, allow_negative_numbers = true)]
        delta: f64,
        /// Gauss-Legendre points per panel.
        #[arg(long)]
        order: Option<usize>,
        /// Panels per 1D integral; 2D axes use half as many.
        #[arg(long)]
        panels: Option<usize>,
        /// Override every scenario tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Export a triangulated surface.
    Mesh {
        /// `moebius` or `spanning`.
        surface: String,
        #[arg(long, default_value_t = DEFAULT_DELTA, allow_negative_numbers = true)]
        delta: f64,
        #[arg(long, default_value_t = 64)]
        nu: usize,
        #[arg(long, default_value_t = 8)]
        nv: usize,
        #[arg(long, default_value_t = 1.0)]
        z_stretch: f64,
        #[arg(short, long)]
        output: PathBuf,
    },
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match args.command {
        Command::Run {
            scenario,
            delta,
            order,
            panels,
            tol,
            format,
            output,
        } => {
            let format: Format = match format.parse() {
                Ok(f) => f,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            let mut quadrature = QuadratureSpec::default();
            if let Some(o) = order {
                quadrature.order = o;
            }
            if let Some(n) = panels {
                quadrature.panels_1d = n;
                quadrature.panels_2d = (n / 2).max(1);
            }
            let config = RunConfig {
                scenario,
                delta,
                quadrature,
                tolerance: tol,
                output,
                format,
            };
            let (status, result) = cli::run(&config);
            match result {
                Ok(records) => {
                    for r in records.iter().filter(|r| !r.pass) {
                        eprintln!(
                            "FAIL {}: {}",
                            r.name,
                            r.error.as_deref().unwrap_or("sides disagree")
                        );
                    }
                }
                Err(e) => eprintln!("error: {e}"),
            }
            ExitCode::from(status as u8)
        }
        Command::Mesh {
            surface,
            delta,
            nu,
            nv,
            z_stretch,
            output,
        } => {
            let config = MeshConfig {
                surface,
                delta,
                nu,
                nv,
                z_stretch,
                output,
            };
            match cli::export_mesh(&config) {
                Ok(_) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(ExitStatus::Usage as u8)
                }
            }
        }
    }
}
