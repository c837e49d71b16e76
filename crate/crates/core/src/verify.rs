//! Exact machine verification of the identities relating the heterogeneous
//! families. Each identity is evaluated along two independent computation
//! paths and the results are compared for exact equality.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::arith::{binomial, deg_rising_factorial, factorial};
use crate::comb::{
    bell_poly, deg_stirling1_table, lah, lah_bell_poly, partial_bell, stirling1u, stirling2,
};
use crate::error::{Error, Result};
use crate::hetero::{
    Route, hetero_bell_poly, hetero_derivative, hetero_first_derivative, hetero_stirling,
    prob_hetero_bell_poly, prob_hetero_bell_recurrence, prob_hetero_row, prob_hetero_stirling,
    prob_lah, prob_stirling2,
};
use crate::iid::two_index_rhs;
use crate::moments::{Distribution, MomentCache};
use crate::poly::Polynomial;
use crate::scalar::{Scalar, pow, sign};
use crate::series;
use crate::{Rational, RationalDist, RationalPoly};

/// Identities the verifier knows how to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    /// Alternating-sum form against the defining generating function.
    T2_1,
    /// Stirling-transform form.
    T2_2,
    /// Probabilistic Lah numbers via `{l,k}_Y [n,l]`.
    T2_3,
    /// Probabilistic Lah numbers via degenerate first-kind numbers, any λ.
    T2_4,
    /// Polynomial against the exponential generating function.
    T2_5,
    /// Recurrence in `n`.
    T2_7,
    /// Two-index expansion through i.i.d. expectations.
    T2_8,
    /// Polynomial via partial Bell polynomials of degenerate moments.
    T2_9,
    /// Addition formula.
    T2_10,
    /// Binomial-basis expansion with heterogeneous Bell numbers.
    T2_11,
    /// Partial Bell polynomial of `(j+1) H_{j,λ}^Y(x)`.
    T2_12,
    /// Partial Bell polynomial of `H_{j,λ}^Y(x)`.
    T2_13,
    /// Derivatives in `x`.
    T2_14,
    /// Partial Bell route for the numbers.
    T2_15,
    /// Poisson: moments of partial sums are heterogeneous Bell values.
    T2_16,
    /// Poisson: expansion in Bell polynomials.
    T2_17,
    /// Bernoulli: numbers and polynomials in closed form.
    T2_18,
    /// Power-sum lemma for degenerate rising factorials.
    L2_19,
    /// Bernoulli: moments of partial sums.
    T2_20,
    /// λ = 0 and λ = 1 specializations.
    Limits,
}

impl IdentityId {
    pub const ALL: [IdentityId; 20] = [
        IdentityId::T2_1,
        IdentityId::T2_2,
        IdentityId::T2_3,
        IdentityId::T2_4,
        IdentityId::T2_5,
        IdentityId::T2_7,
        IdentityId::T2_8,
        IdentityId::T2_9,
        IdentityId::T2_10,
        IdentityId::T2_11,
        IdentityId::T2_12,
        IdentityId::T2_13,
        IdentityId::T2_14,
        IdentityId::T2_15,
        IdentityId::T2_16,
        IdentityId::T2_17,
        IdentityId::T2_18,
        IdentityId::L2_19,
        IdentityId::T2_20,
        IdentityId::Limits,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            IdentityId::T2_1 => "T2.1",
            IdentityId::T2_2 => "T2.2",
            IdentityId::T2_3 => "T2.3",
            IdentityId::T2_4 => "T2.4",
            IdentityId::T2_5 => "T2.5",
            IdentityId::T2_7 => "T2.7",
            IdentityId::T2_8 => "T2.8",
            IdentityId::T2_9 => "T2.9",
            IdentityId::T2_10 => "T2.10",
            IdentityId::T2_11 => "T2.11",
            IdentityId::T2_12 => "T2.12",
            IdentityId::T2_13 => "T2.13",
            IdentityId::T2_14 => "T2.14",
            IdentityId::T2_15 => "T2.15",
            IdentityId::T2_16 => "T2.16",
            IdentityId::T2_17 => "T2.17",
            IdentityId::T2_18 => "T2.18",
            IdentityId::L2_19 => "L2.19",
            IdentityId::T2_20 => "T2.20",
            IdentityId::Limits => "LIMITS",
        }
    }

    /// How the `k`/`m` index is swept when expanding a grid.
    fn index_sweep(self) -> IndexSweep {
        use IdentityId::*;
        match self {
            T2_1 | T2_2 | T2_3 | T2_4 | T2_12 | T2_13 | T2_15 => IndexSweep::UpToN,
            T2_14 => IndexSweep::OneToN,
            T2_16 | T2_20 => IndexSweep::Free { from: 0 },
            L2_19 => IndexSweep::Free { from: 1 },
            T2_8 => IndexSweep::SplitTotal,
            T2_5 | T2_7 | T2_9 | T2_10 | T2_11 | T2_17 | T2_18 | Limits => IndexSweep::None,
        }
    }

    fn min_n(self) -> usize {
        match self {
            IdentityId::L2_19 | IdentityId::T2_14 => 1,
            _ => 0,
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.trim().to_ascii_uppercase();
        IdentityId::ALL
            .into_iter()
            .find(|id| id.tag() == upper)
            .ok_or_else(|| Error::UnknownIdentity(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum IndexSweep {
    None,
    UpToN,
    OneToN,
    Free { from: usize },
    SplitTotal,
}

/// Parameters of a single identity check. Fields an identity does not use
/// are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    pub dist: Option<RationalDist>,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub lambda: Rational,
    /// Further λ values, for identities whose right side must not depend
    /// on λ.
    pub alt_lambdas: Vec<Rational>,
    /// Sample points for identities checked by evaluation.
    pub points: Vec<Rational>,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            dist: None,
            n: 0,
            k: 0,
            m: 0,
            lambda: Rational::from_i64(0),
            alt_lambdas: Vec::new(),
            points: Vec::new(),
        }
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(d) = &self.dist {
            write!(f, "dist={d} ")?;
        }
        write!(f, "n={} k={} m={} lambda={}", self.n, self.k, self.m, self.lambda)?;
        if !self.alt_lambdas.is_empty() {
            write!(f, " alt_lambdas={}", join(&self.alt_lambdas))?;
        }
        if !self.points.is_empty() {
            write!(f, " points={}", join(&self.points))?;
        }
        Ok(())
    }
}

fn join(xs: &[Rational]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// One side's value in a report.
#[derive(Debug, Clone, PartialEq)]
pub enum Quantity {
    Number(Rational),
    Poly(RationalPoly),
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Number(r) => write!(f, "{r}"),
            Quantity::Poly(p) => write!(f, "[{}]", join(p.coeffs())),
        }
    }
}

impl From<Rational> for Quantity {
    fn from(r: Rational) -> Self {
        Quantity::Number(r)
    }
}

impl From<RationalPoly> for Quantity {
    fn from(p: RationalPoly) -> Self {
        Quantity::Poly(p)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub id: IdentityId,
    pub params: Params,
    pub lhs: Vec<Quantity>,
    pub rhs: Vec<Quantity>,
    /// True iff every left value equals the matching right value exactly.
    pub pass: bool,
    pub note: Option<String>,
}

impl IdentityReport {
    fn new(id: IdentityId, params: &Params, lhs: Vec<Quantity>, rhs: Vec<Quantity>) -> Self {
        let pass = lhs.len() == rhs.len() && lhs == rhs;
        Self { id, params: params.clone(), lhs, rhs, pass, note: None }
    }
}

// Collects paired left/right values.
struct Sides {
    lhs: Vec<Quantity>,
    rhs: Vec<Quantity>,
}

impl Sides {
    fn new() -> Self {
        Self { lhs: Vec::new(), rhs: Vec::new() }
    }

    fn push(&mut self, l: impl Into<Quantity>, r: impl Into<Quantity>) {
        self.lhs.push(l.into());
        self.rhs.push(r.into());
    }

    fn report(self, id: IdentityId, params: &Params) -> IdentityReport {
        IdentityReport::new(id, params, self.lhs, self.rhs)
    }
}

const MIN_SAMPLE_POINTS: usize = 3;

fn need_dist(id: IdentityId, p: &Params) -> Result<&RationalDist> {
    p.dist.as_ref().ok_or(Error::MissingParameter { id: id.to_string(), name: "dist" })
}

fn need_points(id: IdentityId, p: &Params) -> Result<()> {
    let mut distinct = p.points.clone();
    distinct.sort();
    distinct.dedup();
    if distinct.len() < MIN_SAMPLE_POINTS {
        return Err(Error::MissingParameter { id: id.to_string(), name: "points" });
    }
    Ok(())
}

fn poisson_rate(id: IdentityId, d: &RationalDist) -> Result<Rational> {
    match d {
        Distribution::Poisson(a) => Ok(a.clone()),
        other => Err(Error::InvalidDistribution(format!("{id} needs a Poisson law, got {other}"))),
    }
}

fn bernoulli_p(id: IdentityId, d: &RationalDist) -> Result<Rational> {
    match d {
        Distribution::Bernoulli(p) => Ok(p.clone()),
        other => Err(Error::InvalidDistribution(format!("{id} needs a Bernoulli law, got {other}"))),
    }
}

/// Ordinary coefficients of `E[e_λ^{-Y}(-t)] - 1 = Σ_{j≥1} E[⟨Y⟩_{j,λ}] t^j/j!`.
fn deg_mgf_minus_one(m: &MomentCache<Rational>, order: usize, lambda: &Rational) -> Result<Vec<Rational>> {
    let mut egf = vec![Rational::from_i64(0)];
    egf.extend(m.deg_rising_moments(order, lambda)?);
    Ok(series::egf_to_ogf(&egf))
}

/// `x^k (x)_k`-free expansion of `C(x,k)·k! = Σ_l (-1)^{k-l} [k,l] x^l`.
fn falling_factorial_poly(k: usize) -> RationalPoly {
    Polynomial::from_coeffs(
        (0..=k)
            .map(|l| sign::<Rational>(k - l) * stirling1u::<Rational>(k, l))
            .collect(),
    )
}

/// Checks one identity at one parameter point.
pub fn verify_identity(id: IdentityId, p: &Params) -> Result<IdentityReport> {
    let (n, k, lam) = (p.n, p.k, &p.lambda);
    let moments = p.dist.as_ref().map(Distribution::moments);
    let mc = || -> Result<&MomentCache<Rational>> {
        need_dist(id, p)?;
        Ok(moments.as_ref().expect("checked"))
    };
    let mut s = Sides::new();
    match id {
        IdentityId::T2_1 => {
            let m = mc()?;
            let table = series::egf_power_table(&deg_mgf_minus_one(m, n, lam)?, n);
            let from_series = table[n].get(k).cloned().unwrap_or_else(|| Rational::from_i64(0));
            s.push(prob_hetero_stirling(m, n, k, lam, Route::Direct)?, from_series);
        }
        IdentityId::T2_2 => {
            let m = mc()?;
            s.push(
                prob_hetero_stirling(m, n, k, lam, Route::Direct)?,
                prob_hetero_stirling(m, n, k, lam, Route::ViaStirlingTransform)?,
            );
        }
        IdentityId::T2_3 => {
            let m = mc()?;
            let rhs = (k..=n).try_fold(Rational::from_i64(0), |acc, l| {
                Ok::<_, Error>(acc + prob_stirling2(m, l, k)? * stirling1u::<Rational>(n, l))
            })?;
            s.push(prob_lah(m, n, k)?, rhs);
        }
        IdentityId::T2_4 => {
            let m = mc()?;
            let lah_y = prob_lah(m, n, k)?;
            for l in std::iter::once(lam).chain(&p.alt_lambdas) {
                let deg1 = deg_stirling1_table(n, l);
                let mut rhs = Rational::from_i64(0);
                for j in k..=n {
                    rhs += prob_hetero_stirling(m, j, k, l, Route::Direct)? * deg1[n][j].clone();
                }
                s.push(lah_y.clone(), rhs);
            }
        }
        IdentityId::T2_5 => {
            let m = mc()?;
            let table = series::egf_power_table(&deg_mgf_minus_one(m, n, lam)?, n);
            s.push(prob_hetero_bell_poly(m, n, lam)?, Polynomial::from_coeffs(table[n].clone()));
        }
        IdentityId::T2_7 => {
            let m = mc()?;
            let rec = prob_hetero_bell_recurrence(m, n, lam)?;
            s.push(rec[n].clone(), prob_hetero_bell_poly(m, n, lam)?);
        }
        IdentityId::T2_8 => {
            need_points(id, p)?;
            let m = mc()?;
            let h = prob_hetero_bell_poly(m, n + p.m, lam)?;
            for t in &p.points {
                s.push(h.eval(t), two_index_rhs(m, n, p.m, t, lam)?);
            }
            let mut report = s.report(id, p);
            if !report.pass {
                report.note = Some(
                    "two-index expansion mismatch: the shifted argument must read ⟨S_j + nλ⟩ \
                     and the inner sum must run over compositions with every l_i >= 1"
                        .into(),
                );
            }
            return Ok(report);
        }
        IdentityId::T2_9 => {
            let m = mc()?;
            let xs = m.deg_rising_moments(n, lam)?;
            let rhs = Polynomial::from_coeffs(
                (0..=n).map(|k| partial_bell(n, k, &xs)).collect::<Result<Vec<_>>>()?,
            );
            s.push(prob_hetero_bell_poly(m, n, lam)?, rhs);
        }
        IdentityId::T2_10 => {
            need_points(id, p)?;
            let m = mc()?;
            let polys = (0..=n)
                .map(|j| prob_hetero_bell_poly(m, j, lam))
                .collect::<Result<Vec<_>>>()?;
            for y in &p.points {
                let conv: RationalPoly = (0..=n)
                    .map(|j| polys[j].scale(&(binomial::<Rational>(n, j) * polys[n - j].eval(y))))
                    .sum();
                let shifted = polys[n].shift(y);
                for x in &p.points {
                    s.push(shifted.eval(x), conv.eval(x));
                }
                s.push(shifted, conv);
            }
        }
        IdentityId::T2_11 => {
            let m = mc()?;
            let numbers = (1..=n)
                .map(|j| Ok(prob_hetero_bell_poly(m, j, lam)?.eval(&Rational::from_i64(1))))
                .collect::<Result<Vec<_>>>()?;
            let mut rhs = Polynomial::zero();
            for j in 0..=n {
                let b = partial_bell(n, j, &numbers)?;
                rhs = &rhs + &falling_factorial_poly(j).scale(&b);
            }
            s.push(prob_hetero_bell_poly(m, n, lam)?, rhs);
        }
        IdentityId::T2_12 => {
            need_points(id, p)?;
            let m = mc()?;
            let polys = (0..=n - k.min(n))
                .map(|j| prob_hetero_bell_poly(m, j, lam))
                .collect::<Result<Vec<_>>>()?;
            let inner = prob_hetero_row(m, n - k.min(n), lam, Route::Direct)?;
            for x in &p.points {
                let lhs = if k > n {
                    Rational::from_i64(0)
                } else {
                    let sum = inner.iter().enumerate().fold(Rational::from_i64(0), |acc, (j, h)| {
                        acc + pow(&(Rational::from_usize(k) * x.clone()), j) * h.clone()
                    });
                    binomial::<Rational>(n, k) * sum
                };
                let args: Vec<Rational> = polys
                    .iter()
                    .enumerate()
                    .map(|(j, h)| Rational::from_usize(j + 1) * h.eval(x))
                    .collect();
                s.push(lhs, partial_bell(n, k, &args)?);
            }
        }
        IdentityId::T2_13 => {
            need_points(id, p)?;
            let m = mc()?;
            let polys = (1..=n)
                .map(|j| prob_hetero_bell_poly(m, j, lam))
                .collect::<Result<Vec<_>>>()?;
            let row = prob_hetero_row(m, n, lam, Route::Direct)?;
            for x in &p.points {
                let args: Vec<Rational> = polys.iter().map(|h| h.eval(x)).collect();
                let rhs = (k..=n).fold(Rational::from_i64(0), |acc, j| {
                    acc + stirling2::<Rational>(j, k) * row[j].clone() * pow(x, j)
                });
                s.push(partial_bell(n, k, &args)?, rhs);
            }
        }
        IdentityId::T2_14 => {
            let m = mc()?;
            let h = prob_hetero_bell_poly(m, n, lam)?;
            s.push(hetero_derivative(m, n, lam, k)?, h.nth_derivative(k));
            if k == 1 {
                s.push(hetero_first_derivative(m, n, lam)?, h.derivative());
            }
        }
        IdentityId::T2_15 => {
            let m = mc()?;
            s.push(
                prob_hetero_stirling(m, n, k, lam, Route::Direct)?,
                prob_hetero_stirling(m, n, k, lam, Route::ViaPartialBell)?,
            );
        }
        IdentityId::T2_16 => {
            let m = mc()?;
            let alpha = poisson_rate(id, m.distribution())?;
            s.push(
                m.sum_deg_rising_moment(k, n, lam)?,
                hetero_bell_poly(n, lam).eval(&(Rational::from_usize(k) * alpha)),
            );
        }
        IdentityId::T2_17 => {
            let m = mc()?;
            let alpha = poisson_rate(id, m.distribution())?;
            let rhs: RationalPoly = (0..=n)
                .map(|j| bell_poly::<Rational>(j).scale(&(hetero_stirling(n, j, lam) * pow(&alpha, j))))
                .sum();
            s.push(prob_hetero_bell_poly(m, n, lam)?, rhs);
        }
        IdentityId::T2_18 => {
            let m = mc()?;
            let prob = bernoulli_p(id, m.distribution())?;
            let row = prob_hetero_row(m, n, lam, Route::Direct)?;
            for (j, h) in row.iter().enumerate() {
                s.push(h.clone(), pow(&prob, j) * hetero_stirling(n, j, lam));
            }
            s.push(Polynomial::from_coeffs(row), hetero_bell_poly(n, lam).scale_arg(&prob));
        }
        IdentityId::L2_19 => {
            let lhs = (1..=k).fold(Rational::from_i64(0), |acc, j| {
                acc + deg_rising_factorial(&Rational::from_usize(j), n, lam)
            });
            let rhs = (1..=n).fold(Rational::from_i64(0), |acc, l| {
                acc + hetero_stirling(n, l, lam) * factorial::<Rational>(l) * binomial::<Rational>(k + 1, l + 1)
            });
            s.push(lhs, rhs);
        }
        IdentityId::T2_20 => {
            let m = mc()?;
            let prob = bernoulli_p(id, m.distribution())?;
            let rhs = (0..=n).fold(Rational::from_i64(0), |acc, j| {
                acc + binomial::<Rational>(k, j) * pow(&prob, j) * factorial::<Rational>(j) * hetero_stirling(n, j, lam)
            });
            s.push(m.sum_deg_rising_moment(k, n, lam)?, rhs);
        }
        IdentityId::Limits => {
            let (zero, one) = (Rational::from_i64(0), Rational::from_i64(1));
            for j in 0..=n {
                s.push(hetero_stirling(n, j, &zero), stirling2::<Rational>(n, j));
                s.push(hetero_stirling(n, j, &one), lah::<Rational>(n, j));
            }
            s.push(hetero_bell_poly(n, &zero), bell_poly::<Rational>(n));
            s.push(hetero_bell_poly(n, &one), lah_bell_poly::<Rational>(n));
            if let Some(m) = &moments {
                let phi_y = Polynomial::from_coeffs(
                    (0..=n).map(|j| prob_stirling2(m, n, j)).collect::<Result<Vec<_>>>()?,
                );
                let lb_y = Polynomial::from_coeffs(
                    (0..=n).map(|j| prob_lah(m, n, j)).collect::<Result<Vec<_>>>()?,
                );
                s.push(prob_hetero_bell_poly(m, n, &zero)?, phi_y);
                s.push(prob_hetero_bell_poly(m, n, &one)?, lb_y);
            }
        }
    }
    Ok(s.report(id, p))
}

/// A parameter grid for one identity.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub id: IdentityId,
    /// Empty means "no distribution".
    pub dists: Vec<RationalDist>,
    pub n_max: usize,
    /// Upper bound for the secondary index; defaults to `n_max`.
    pub k_max: Option<usize>,
    pub lambdas: Vec<Rational>,
    pub alt_lambdas: Vec<Rational>,
    pub points: Vec<Rational>,
}

impl GridSpec {
    /// All parameter points, in deterministic order.
    pub fn expand(&self) -> Vec<(IdentityId, Params)> {
        let dists: Vec<Option<RationalDist>> = if self.dists.is_empty() {
            vec![None]
        } else {
            self.dists.iter().cloned().map(Some).collect()
        };
        let lambdas = if self.lambdas.is_empty() {
            vec![Rational::from_i64(0)]
        } else {
            self.lambdas.clone()
        };
        let k_max = self.k_max.unwrap_or(self.n_max);
        let mut out = Vec::new();
        for dist in &dists {
            for lambda in &lambdas {
                for n in self.id.min_n()..=self.n_max {
                    let idx: Vec<(usize, usize, usize)> = match self.id.index_sweep() {
                        IndexSweep::None => vec![(n, 0, 0)],
                        IndexSweep::UpToN => (0..=n.min(k_max)).map(|k| (n, k, 0)).collect(),
                        IndexSweep::OneToN => (1..=n.min(k_max)).map(|k| (n, k, 0)).collect(),
                        IndexSweep::Free { from } => (from..=k_max).map(|k| (n, k, 0)).collect(),
                        IndexSweep::SplitTotal => (0..=n).map(|a| (a, 0, n - a)).collect(),
                    };
                    for (n, k, m) in idx {
                        out.push((
                            self.id,
                            Params {
                                dist: dist.clone(),
                                n,
                                k,
                                m,
                                lambda: lambda.clone(),
                                alt_lambdas: self.alt_lambdas.clone(),
                                points: self.points.clone(),
                            },
                        ));
                    }
                }
            }
        }
        out
    }
}

/// Runs every case, in parallel, returning results in input order.
pub fn run_cases(cases: &[(IdentityId, Params)]) -> Vec<Result<IdentityReport>> {
    cases.par_iter().map(|(id, p)| verify_identity(*id, p)).collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
}

impl Summary {
    pub fn of(results: &[Result<IdentityReport>]) -> Self {
        let mut s = Summary { total: results.len(), ..Default::default() };
        for r in results {
            match r {
                Ok(rep) if rep.pass => s.passed += 1,
                Ok(_) => s.failed += 1,
                Err(_) => s.errors += 1,
            }
        }
        s
    }

    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }
}
