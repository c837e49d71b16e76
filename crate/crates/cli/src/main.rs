use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hetbell::moments::parse_rational;
use hetbell::{Rational, RationalDist, Route};
use hetbell_cli::commands::{GridOverrides, cmd_dobinski, cmd_poly, cmd_table, cmd_verify};
use hetbell_cli::config::{default_grid, parse_grid};
use hetbell_cli::{CliError, Family, Format, OutputRecord, Payload, PolyKind};

/// Exact heterogeneous Stirling numbers, Bell polynomials and identity checks.
#[derive(Debug, Parser)]
#[command(name = "hetbell", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rows 0..=nmax of a triangle.
    Table {
        #[arg(value_enum)]
        family: Family,
        #[arg(long)]
        nmax: usize,
        /// Keep only columns k <= this.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value = "0", value_parser = rational)]
        lambda: Rational,
        #[arg(long, value_parser = dist)]
        dist: Option<RationalDist>,
        /// Route for prob_hetero: direct, stirling or bell.
        #[arg(long, default_value = "direct")]
        route: Route,
    },
    /// Coefficients of one polynomial.
    Poly {
        #[arg(value_enum)]
        kind: PolyKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "0", value_parser = rational)]
        lambda: Rational,
        #[arg(long, value_parser = dist)]
        dist: Option<RationalDist>,
    },
    /// Check identities over a parameter grid. Exits 1 if any check fails.
    Verify {
        /// Identity tags such as T2.18, or `all`.
        #[arg(default_value = "all")]
        ids: Vec<String>,
        /// Grid file; defaults to the built-in grid.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Cap n (and k) in every grid.
        #[arg(long)]
        nmax: Option<usize>,
        /// Use only this λ in grids that sweep λ.
        #[arg(long, value_parser = rational)]
        lambda: Option<Rational>,
        /// Use only this distribution in grids that take one.
        #[arg(long, value_parser = dist)]
        dist: Option<RationalDist>,
    },
    /// Truncated Dobiński series against the exact value.
    Dobinski {
        #[arg(long, value_parser = dist)]
        dist: RationalDist,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "0", value_parser = rational)]
        lambda: Rational,
        #[arg(long, value_parser = rational)]
        x: Rational,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn dist(s: &str) -> Result<RationalDist, String> {
    s.parse().map_err(|e: hetbell::Error| e.to_string())
}

fn run(cli: Cli) -> Result<OutputRecord, CliError> {
    match cli.command {
        Command::Table { family, nmax, k, lambda, dist, route } => {
            cmd_table(family, nmax, k, &lambda, dist.as_ref(), route)
        }
        Command::Poly { kind, n, lambda, dist } => cmd_poly(kind, n, &lambda, dist.as_ref()),
        Command::Verify { ids, config, nmax, lambda, dist } => {
            let grid = match config {
                Some(path) => parse_grid(&std::fs::read_to_string(path)?)?,
                None => default_grid(),
            };
            cmd_verify(&ids, &grid, &GridOverrides { n_max: nmax, lambda, dist })
        }
        Command::Dobinski { dist, n, lambda, x, tol } => cmd_dobinski(&dist, n, &lambda, &x, tol),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (format, out) = (cli.format, cli.out.clone());
    let record = match run(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let text = match record.render(format) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let written = match &out {
        Some(path) => std::fs::write(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if let Payload::Verify { summary, .. } = &record.payload {
        eprintln!(
            "{} checks: {} passed, {} failed, {} errors",
            summary.total, summary.passed, summary.failed, summary.errors
        );
        if !summary.all_passed() {
            return ExitCode::from(1);
        }
    }
    ExitCode::SUCCESS
}
