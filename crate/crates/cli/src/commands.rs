use std::collections::BTreeMap;

use hetbell::comb::{self, bell_poly, lah_bell_poly};
use hetbell::hetero::{
    self, dobinski_eval, hetero_bell_poly, hetero_stirling_row, prob_hetero_bell_poly, prob_hetero_row,
};
use hetbell::verify::{GridSpec, IdentityId, run_cases};
use hetbell::{Rational, RationalDist, Route, Scalar};

use crate::CliError;
use crate::output::{DobinskiRecord, Exact, OutputRecord, Payload, ReportRecord, SummaryRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Family {
    Stirling2,
    Stirling1u,
    Lah,
    DegStirling1,
    Hetero,
    ProbStirling2,
    ProbLah,
    ProbHetero,
}

impl Family {
    pub fn tag(self) -> &'static str {
        match self {
            Family::Stirling2 => "stirling2",
            Family::Stirling1u => "stirling1u",
            Family::Lah => "lah",
            Family::DegStirling1 => "deg_stirling1",
            Family::Hetero => "hetero",
            Family::ProbStirling2 => "prob_stirling2",
            Family::ProbLah => "prob_lah",
            Family::ProbHetero => "prob_hetero",
        }
    }

    fn uses_lambda(self) -> bool {
        matches!(self, Family::DegStirling1 | Family::Hetero | Family::ProbHetero)
    }

    fn needs_dist(self) -> bool {
        matches!(self, Family::ProbStirling2 | Family::ProbLah | Family::ProbHetero)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum PolyKind {
    Bell,
    Lahbell,
    HeteroBell,
    ProbHeteroBell,
}

impl PolyKind {
    pub fn tag(self) -> &'static str {
        match self {
            PolyKind::Bell => "bell",
            PolyKind::Lahbell => "lahbell",
            PolyKind::HeteroBell => "hetero_bell",
            PolyKind::ProbHeteroBell => "prob_hetero_bell",
        }
    }
}

fn exact_row(row: Vec<Rational>) -> Vec<Exact> {
    row.into_iter().map(Exact).collect()
}

fn require_dist<'a>(dist: Option<&'a RationalDist>, what: &str) -> Result<&'a RationalDist, CliError> {
    dist.ok_or_else(|| CliError::MissingDistribution(what.to_string()))
}

struct Echo {
    command: String,
    params: BTreeMap<String, String>,
}

impl Echo {
    fn new(command: impl Into<String>) -> Self {
        Self { command: command.into(), params: BTreeMap::new() }
    }

    fn param(mut self, key: &str, value: impl ToString) -> Self {
        let value = value.to_string();
        self.command.push_str(&format!(" --{} {value}", key.replace('_', "-")));
        self.params.insert(key.to_string(), value);
        self
    }

    fn finish(self, payload: Payload) -> OutputRecord {
        OutputRecord { command: self.command, params: self.params, payload }
    }
}

/// Rows `0..=n_max` of a triangle. `k_max` truncates every row to
/// `k ≤ k_max`; `route` only matters for `prob_hetero`.
pub fn cmd_table(
    family: Family,
    n_max: usize,
    k_max: Option<usize>,
    lambda: &Rational,
    dist: Option<&RationalDist>,
    route: Route,
) -> Result<OutputRecord, CliError> {
    let mut echo = Echo::new(format!("table {}", family.tag())).param("nmax", n_max);
    if let Some(k) = k_max {
        echo = echo.param("k", k);
    }
    if family.uses_lambda() {
        echo = echo.param("lambda", lambda);
    }
    let cache = if family.needs_dist() {
        let d = require_dist(dist, family.tag())?;
        echo = echo.param("dist", d);
        Some(d.moments())
    } else {
        None
    };
    if family == Family::ProbHetero {
        echo = echo.param("route", route);
    }

    let mut rows: Vec<Vec<Rational>> = match family {
        Family::DegStirling1 => comb::deg_stirling1_table(n_max, lambda),
        _ => (0..=n_max)
            .map(|n| -> Result<Vec<Rational>, CliError> {
                let ks = 0..=n;
                Ok(match family {
                    Family::Stirling2 => ks.map(|k| comb::stirling2(n, k)).collect(),
                    Family::Stirling1u => ks.map(|k| comb::stirling1u(n, k)).collect(),
                    Family::Lah => ks.map(|k| comb::lah(n, k)).collect(),
                    Family::Hetero => hetero_stirling_row(n, lambda),
                    Family::ProbStirling2 => {
                        let m = cache.as_ref().expect("dist checked");
                        ks.map(|k| hetero::prob_stirling2(m, n, k)).collect::<Result<_, _>>()?
                    }
                    Family::ProbLah => {
                        let m = cache.as_ref().expect("dist checked");
                        ks.map(|k| hetero::prob_lah(m, n, k)).collect::<Result<_, _>>()?
                    }
                    Family::ProbHetero => prob_hetero_row(cache.as_ref().expect("dist checked"), n, lambda, route)?,
                    Family::DegStirling1 => unreachable!(),
                })
            })
            .collect::<Result<_, _>>()?,
    };
    for (n, row) in rows.iter_mut().enumerate() {
        row.resize(n + 1, Rational::from_i64(0));
        if let Some(k) = k_max {
            row.truncate(k + 1);
        }
    }
    Ok(echo.finish(Payload::Table { rows: rows.into_iter().map(exact_row).collect() }))
}

/// Coefficients of one polynomial of degree `n`.
pub fn cmd_poly(
    kind: PolyKind,
    n: usize,
    lambda: &Rational,
    dist: Option<&RationalDist>,
) -> Result<OutputRecord, CliError> {
    let mut echo = Echo::new(format!("poly {}", kind.tag())).param("n", n);
    let poly = match kind {
        PolyKind::Bell => bell_poly(n),
        PolyKind::Lahbell => lah_bell_poly(n),
        PolyKind::HeteroBell => {
            echo = echo.param("lambda", lambda);
            hetero_bell_poly(n, lambda)
        }
        PolyKind::ProbHeteroBell => {
            let d = require_dist(dist, kind.tag())?;
            echo = echo.param("lambda", lambda).param("dist", d);
            prob_hetero_bell_poly(&d.moments(), n, lambda)?
        }
    };
    Ok(echo.finish(Payload::Poly { coeffs: exact_row(poly.into_coeffs()) }))
}

/// Overrides applied to every selected grid before expansion.
#[derive(Debug, Clone, Default)]
pub struct GridOverrides {
    /// Caps `n_max` (and `k_max`).
    pub n_max: Option<usize>,
    /// Replaces the λ list of grids that sweep λ.
    pub lambda: Option<Rational>,
    /// Replaces the distribution list of grids that use one.
    pub dist: Option<RationalDist>,
}

/// Resolves `ids` ("all" or identity tags) against `grid`.
pub fn select_grids(ids: &[String], grid: &[GridSpec]) -> Result<Vec<GridSpec>, CliError> {
    let wanted: Vec<IdentityId> = if ids.is_empty() || ids.iter().any(|s| s.eq_ignore_ascii_case("all")) {
        IdentityId::ALL.to_vec()
    } else {
        ids.iter().map(|s| s.parse()).collect::<Result<_, _>>()?
    };
    let mut out = Vec::new();
    for id in IdentityId::ALL.into_iter().filter(|id| wanted.contains(id)) {
        let found: Vec<_> = grid.iter().filter(|g| g.id == id).cloned().collect();
        if found.is_empty() && ids.iter().all(|s| !s.eq_ignore_ascii_case("all")) {
            return Err(CliError::Config(format!("no grid configured for {id}")));
        }
        out.extend(found);
    }
    Ok(out)
}

/// Runs every selected grid. Reports come out sorted by identity, then in
/// grid order.
pub fn cmd_verify(ids: &[String], grid: &[GridSpec], overrides: &GridOverrides) -> Result<OutputRecord, CliError> {
    let mut echo = Echo::new(format!("verify {}", if ids.is_empty() { "all".to_string() } else { ids.join(" ") }));
    if let Some(n) = overrides.n_max {
        echo = echo.param("nmax", n);
    }
    if let Some(l) = &overrides.lambda {
        echo = echo.param("lambda", l);
    }
    if let Some(d) = &overrides.dist {
        echo = echo.param("dist", d);
    }
    let cases: Vec<_> = select_grids(ids, grid)?
        .into_iter()
        .flat_map(|mut g| {
            if let Some(n) = overrides.n_max {
                g.n_max = g.n_max.min(n);
                g.k_max = Some(g.k_max.unwrap_or(n).min(n));
            }
            if let (Some(l), false) = (&overrides.lambda, g.lambdas.is_empty()) {
                g.lambdas = vec![l.clone()];
            }
            if let (Some(d), false) = (&overrides.dist, g.dists.is_empty()) {
                g.dists = vec![d.clone()];
            }
            g.expand()
        })
        .collect();
    let reports: Vec<ReportRecord> = run_cases(&cases)
        .into_iter()
        .zip(&cases)
        .map(|(res, (id, params))| match res {
            Ok(rep) => ReportRecord::from_report(&rep),
            Err(e) => {
                let mut rec = ReportRecord::from_report(&hetbell::verify::IdentityReport {
                    id: *id,
                    params: params.clone(),
                    lhs: Vec::new(),
                    rhs: Vec::new(),
                    pass: false,
                    note: None,
                });
                rec.error = Some(e.to_string());
                rec
            }
        })
        .collect();
    let summary = SummaryRecord::of(&reports);
    Ok(echo.finish(Payload::Verify { reports, summary }))
}

/// Truncated Dobiński series for `H_{n,λ}^Y(x)` next to the exact value.
pub fn cmd_dobinski(
    dist: &RationalDist,
    n: usize,
    lambda: &Rational,
    x: &Rational,
    rel_tol: f64,
) -> Result<OutputRecord, CliError> {
    if !(rel_tol > 0.0 && rel_tol.is_finite()) {
        return Err(CliError::Usage(format!("--tol must be a positive number, got {rel_tol}")));
    }
    let echo = Echo::new("dobinski")
        .param("dist", dist)
        .param("n", n)
        .param("lambda", lambda)
        .param("x", x)
        .param("tol", format!("{rel_tol:e}"));
    let m = dist.moments();
    let approx = dobinski_eval(&m, n, lambda, x, rel_tol)?;
    let exact = prob_hetero_bell_poly(&m, n, lambda)?.eval(x);
    let exact_f = exact.to_f64_lossy();
    let err = (approx.value - exact_f).abs();
    let rel_error = if exact_f == 0.0 { err } else { err / exact_f.abs() };
    Ok(echo.finish(Payload::Dobinski(DobinskiRecord {
        value: format!("{:e}", approx.value),
        terms: approx.terms,
        tail_bound: format!("{:e}", approx.tail_bound),
        exact: Exact(exact),
        exact_decimal: format!("{exact_f:e}"),
        rel_error: format!("{rel_error:e}"),
        rel_tol: format!("{rel_tol:e}"),
    })))
}
