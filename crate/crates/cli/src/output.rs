//! Wire formats. Exact values travel as `num/den` strings (plain integers
//! when the denominator is 1); Dobiński results are decimal strings next
//! to their tolerance.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use hetbell::moments::parse_rational;
use hetbell::verify::{IdentityReport, Quantity, Summary};
use hetbell::{Rational, Result as CoreResult};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    Csv,
    #[default]
    Json,
}

/// A rational that serializes as its exact string form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exact(pub Rational);

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Exact {
    type Err = hetbell::Error;

    fn from_str(s: &str) -> CoreResult<Self> {
        parse_rational(s).map(Exact)
    }
}

impl From<Rational> for Exact {
    fn from(r: Rational) -> Self {
        Exact(r)
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    /// The command line that produced this record, minus output flags.
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub payload: Payload,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    /// Rows `0..=n_max`; row `n` holds `k = 0..=n` (or fewer with `--k`).
    Table { rows: Vec<Vec<Exact>> },
    /// Coefficients in increasing degree.
    Poly { coeffs: Vec<Exact> },
    Verify { reports: Vec<ReportRecord>, summary: SummaryRecord },
    Dobinski(DobinskiRecord),
}

/// A number, or a polynomial as its coefficient list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WireQuantity {
    Number(Exact),
    Poly(Vec<Exact>),
}

impl From<&Quantity> for WireQuantity {
    fn from(q: &Quantity) -> Self {
        match q {
            Quantity::Number(r) => WireQuantity::Number(Exact(r.clone())),
            Quantity::Poly(p) => WireQuantity::Poly(p.coeffs().iter().cloned().map(Exact).collect()),
        }
    }
}

impl fmt::Display for WireQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WireQuantity::Number(r) => write!(f, "{r}"),
            WireQuantity::Poly(cs) => write!(f, "[{}]", join(cs, ",")),
        }
    }
}

impl FromStr for WireQuantity {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let s = s.trim();
        match s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            Some("") => Ok(WireQuantity::Poly(Vec::new())),
            Some(inner) => Ok(WireQuantity::Poly(
                inner.split(',').map(str::parse).collect::<CoreResult<_>>()?,
            )),
            None => Ok(WireQuantity::Number(s.parse()?)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub id: String,
    pub dist: Option<String>,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub lambda: Exact,
    pub alt_lambdas: Vec<Exact>,
    pub points: Vec<Exact>,
    pub pass: bool,
    pub lhs: Vec<WireQuantity>,
    pub rhs: Vec<WireQuantity>,
    pub note: Option<String>,
    /// Set when the check could not be evaluated at all.
    pub error: Option<String>,
}

impl ReportRecord {
    pub fn from_report(rep: &IdentityReport) -> Self {
        let p = &rep.params;
        Self {
            id: rep.id.tag().to_string(),
            dist: p.dist.as_ref().map(ToString::to_string),
            n: p.n,
            k: p.k,
            m: p.m,
            lambda: Exact(p.lambda.clone()),
            alt_lambdas: p.alt_lambdas.iter().cloned().map(Exact).collect(),
            points: p.points.iter().cloned().map(Exact).collect(),
            pass: rep.pass,
            lhs: rep.lhs.iter().map(Into::into).collect(),
            rhs: rep.rhs.iter().map(Into::into).collect(),
            note: rep.note.clone(),
            error: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryRecord {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
}

impl From<&Summary> for SummaryRecord {
    fn from(s: &Summary) -> Self {
        Self { total: s.total, passed: s.passed, failed: s.failed, errors: s.errors }
    }
}

impl SummaryRecord {
    pub fn of(reports: &[ReportRecord]) -> Self {
        let errors = reports.iter().filter(|r| r.error.is_some()).count();
        let passed = reports.iter().filter(|r| r.pass).count();
        Self { total: reports.len(), passed, failed: reports.len() - passed - errors, errors }
    }

    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DobinskiRecord {
    /// Truncated series value.
    pub value: String,
    /// Number of series terms summed.
    pub terms: usize,
    /// Bound on the discarded tail.
    pub tail_bound: String,
    /// Exact polynomial value at `x`.
    pub exact: Exact,
    pub exact_decimal: String,
    /// `|value - exact| / |exact|`, or the absolute error when `exact` is 0.
    pub rel_error: String,
    pub rel_tol: String,
}

const DOBINSKI_FIELDS: [&str; 7] =
    ["value", "terms", "tail_bound", "exact", "exact_decimal", "rel_error", "rel_tol"];

fn join<T: fmt::Display>(xs: &[T], sep: &str) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

fn split_list<T: FromStr>(s: &str) -> Result<Vec<T>, T::Err> {
    if s.is_empty() { Ok(Vec::new()) } else { s.split(',').map(str::parse).collect() }
}

fn split_quantities(s: &str) -> Result<Vec<WireQuantity>, CliError> {
    if s.is_empty() { Ok(Vec::new()) } else { s.split(';').map(str::parse).collect() }
}

fn opt(s: &str) -> Option<String> {
    (!s.is_empty()).then(|| s.to_string())
}

fn bad(msg: impl fmt::Display) -> CliError {
    CliError::Output(msg.to_string())
}

impl OutputRecord {
    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => serde_json::to_string_pretty(self).map_err(bad).map(|s| s + "\n"),
            Format::Csv => self.to_csv(),
        }
    }

    pub fn parse(text: &str, format: Format) -> Result<Self, CliError> {
        match format {
            Format::Json => serde_json::from_str(text).map_err(bad),
            Format::Csv => Self::from_csv(text),
        }
    }

    /// Long-format CSV: a `#` preamble carrying the command and parameters,
    /// then one header and one row per value.
    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut out = format!("# command: {}\n", self.command);
        for (k, v) in &self.params {
            if k.contains(['=', '\n']) || v.contains('\n') {
                return Err(bad(format!("parameter {k:?} cannot be written to CSV")));
            }
            out.push_str(&format!("# {k}={v}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| bad(e);
        match &self.payload {
            Payload::Table { rows } => {
                w.write_record(["n", "k", "value"]).map_err(io)?;
                for (n, row) in rows.iter().enumerate() {
                    for (k, v) in row.iter().enumerate() {
                        w.write_record([n.to_string(), k.to_string(), v.to_string()]).map_err(io)?;
                    }
                }
            }
            Payload::Poly { coeffs } => {
                w.write_record(["power", "coeff"]).map_err(io)?;
                for (i, c) in coeffs.iter().enumerate() {
                    w.write_record([i.to_string(), c.to_string()]).map_err(io)?;
                }
            }
            Payload::Verify { reports, .. } => {
                w.write_record([
                    "id", "dist", "n", "k", "m", "lambda", "alt_lambdas", "points", "pass", "lhs",
                    "rhs", "note", "error",
                ])
                .map_err(io)?;
                for r in reports {
                    w.write_record([
                        r.id.clone(),
                        r.dist.clone().unwrap_or_default(),
                        r.n.to_string(),
                        r.k.to_string(),
                        r.m.to_string(),
                        r.lambda.to_string(),
                        join(&r.alt_lambdas, ","),
                        join(&r.points, ","),
                        r.pass.to_string(),
                        join(&r.lhs, ";"),
                        join(&r.rhs, ";"),
                        r.note.clone().unwrap_or_default(),
                        r.error.clone().unwrap_or_default(),
                    ])
                    .map_err(io)?;
                }
            }
            Payload::Dobinski(d) => {
                w.write_record(["field", "value"]).map_err(io)?;
                let values = [
                    d.value.clone(),
                    d.terms.to_string(),
                    d.tail_bound.clone(),
                    d.exact.to_string(),
                    d.exact_decimal.clone(),
                    d.rel_error.clone(),
                    d.rel_tol.clone(),
                ];
                for (f, v) in DOBINSKI_FIELDS.iter().zip(values) {
                    w.write_record([f.to_string(), v]).map_err(io)?;
                }
            }
        }
        let body = w.into_inner().map_err(bad)?;
        out.push_str(&String::from_utf8(body).map_err(bad)?);
        Ok(out)
    }

    pub fn from_csv(text: &str) -> Result<Self, CliError> {
        let mut command = None;
        let mut params = BTreeMap::new();
        let mut body = String::new();
        let mut in_preamble = true;
        for line in text.split_inclusive('\n') {
            // quoted fields may hold newlines, so `#` lines only count before the header
            match line.strip_prefix("# ").filter(|_| in_preamble) {
                Some(rest) => {
                    let rest = rest.trim_end_matches(['\n', '\r']);
                    if let Some(c) = rest.strip_prefix("command: ") {
                        command = Some(c.to_string());
                    } else {
                        let (k, v) = rest.split_once('=').ok_or_else(|| bad(format!("bad preamble line {rest:?}")))?;
                        params.insert(k.to_string(), v.to_string());
                    }
                }
                None => {
                    in_preamble = false;
                    body.push_str(line);
                }
            }
        }
        let command = command.ok_or_else(|| bad("missing `# command:` line"))?;
        let mut r = csv::ReaderBuilder::new().from_reader(body.as_bytes());
        let header: Vec<String> = r.headers().map_err(bad)?.iter().map(str::to_string).collect();
        let records: Vec<csv::StringRecord> = r.records().collect::<Result<_, _>>().map_err(bad)?;
        let num = |s: &str| s.parse::<usize>().map_err(bad);
        let payload = match header.first().map(String::as_str) {
            Some("n") => {
                let mut rows: Vec<Vec<Exact>> = Vec::new();
                for rec in &records {
                    let (n, k) = (num(&rec[0])?, num(&rec[1])?);
                    if n >= rows.len() {
                        rows.resize(n + 1, Vec::new());
                    }
                    if k != rows[n].len() {
                        return Err(bad(format!("table entry ({n},{k}) out of order")));
                    }
                    rows[n].push(rec[2].parse()?);
                }
                Payload::Table { rows }
            }
            Some("power") => Payload::Poly {
                coeffs: records.iter().map(|rec| rec[1].parse()).collect::<CoreResult<_>>()?,
            },
            Some("id") => {
                let reports = records
                    .iter()
                    .map(|rec| {
                        Ok(ReportRecord {
                            id: rec[0].to_string(),
                            dist: opt(&rec[1]),
                            n: num(&rec[2])?,
                            k: num(&rec[3])?,
                            m: num(&rec[4])?,
                            lambda: rec[5].parse()?,
                            alt_lambdas: split_list(&rec[6])?,
                            points: split_list(&rec[7])?,
                            pass: rec[8].parse().map_err(bad)?,
                            lhs: split_quantities(&rec[9])?,
                            rhs: split_quantities(&rec[10])?,
                            note: opt(&rec[11]),
                            error: opt(&rec[12]),
                        })
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                let summary = SummaryRecord::of(&reports);
                Payload::Verify { reports, summary }
            }
            Some("field") => {
                let map: BTreeMap<&str, &str> = records.iter().map(|rec| (rec.get(0).unwrap_or(""), rec.get(1).unwrap_or(""))).collect();
                let get = |f: &str| map.get(f).map(|s| s.to_string()).ok_or_else(|| bad(format!("missing field {f}")));
                Payload::Dobinski(DobinskiRecord {
                    value: get("value")?,
                    terms: num(&get("terms")?)?,
                    tail_bound: get("tail_bound")?,
                    exact: get("exact")?.parse()?,
                    exact_decimal: get("exact_decimal")?,
                    rel_error: get("rel_error")?,
                    rel_tol: get("rel_tol")?,
                })
            }
            _ => return Err(bad("unrecognised CSV header")),
        };
        Ok(OutputRecord { command, params, payload })
    }
}
