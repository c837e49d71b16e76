use serde::Deserialize;

use hetbell::moments::parse_rational;
use hetbell::verify::{GridSpec, IdentityId};
use hetbell::{Rational, RationalDist};

use crate::CliError;

/// The grid shipped with the binary.
pub const DEFAULT_GRID: &str = include_str!("../config/verify_grid.toml");

pub const SUPPORTED_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridFile {
    version: u32,
    #[serde(default)]
    grid: Vec<GridEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridEntry {
    id: String,
    #[serde(default)]
    dists: Vec<String>,
    n_max: usize,
    k_max: Option<usize>,
    #[serde(default)]
    lambdas: Vec<String>,
    #[serde(default)]
    alt_lambdas: Vec<String>,
    #[serde(default)]
    points: Vec<String>,
}

fn rationals(xs: &[String]) -> Result<Vec<Rational>, CliError> {
    Ok(xs.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?)
}

pub fn parse_grid(text: &str) -> Result<Vec<GridSpec>, CliError> {
    let file: GridFile = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    if file.version != SUPPORTED_VERSION {
        return Err(CliError::Config(format!(
            "unsupported grid version {} (expected {SUPPORTED_VERSION})",
            file.version
        )));
    }
    file.grid
        .iter()
        .map(|g| {
            Ok(GridSpec {
                id: g.id.parse::<IdentityId>()?,
                dists: g
                    .dists
                    .iter()
                    .map(|d| d.parse::<RationalDist>())
                    .collect::<Result<_, _>>()?,
                n_max: g.n_max,
                k_max: g.k_max,
                lambdas: rationals(&g.lambdas)?,
                alt_lambdas: rationals(&g.alt_lambdas)?,
                points: rationals(&g.points)?,
            })
        })
        .collect()
}

pub fn default_grid() -> Vec<GridSpec> {
    parse_grid(DEFAULT_GRID).expect("shipped grid parses")
}
