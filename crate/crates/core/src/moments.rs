//! Random variables described by their raw moments, and the moments of
//! partial sums of i.i.d. copies.
//!
//! Only the moment sequence of a distribution is ever used. For
//! [`Distribution::MomentList`] the caller is responsible for the sequence
//! actually belonging to a distribution with a moment generating function;
//! that growth condition is not finitely checkable and is not checked.

use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use crate::arith::{binomial, deg_rising_poly};
use crate::comb::stirling2;
use crate::error::{Error, Result};
use crate::scalar::{Scalar, pow};
use crate::Rational;

#[derive(Debug, Clone, PartialEq)]
pub enum Distribution<T> {
    Bernoulli(T),
    Poisson(T),
    Constant(T),
    /// `(value, probability)` pairs.
    FiniteSupport(Vec<(T, T)>),
    /// `mu[n] = E[Y^n]`, with `mu[0] = 1`.
    MomentList(Vec<T>),
}

impl<T: Scalar> Distribution<T> {
    pub fn bernoulli(p: T) -> Result<Self> {
        if p < T::zero() || p > T::one() {
            return Err(Error::InvalidDistribution(format!("bernoulli p={p} outside [0,1]")));
        }
        Ok(Self::Bernoulli(p))
    }

    pub fn poisson(alpha: T) -> Result<Self> {
        if alpha <= T::zero() {
            return Err(Error::InvalidDistribution(format!("poisson alpha={alpha} not positive")));
        }
        Ok(Self::Poisson(alpha))
    }

    pub fn constant(c: T) -> Self {
        Self::Constant(c)
    }

    pub fn finite(pairs: Vec<(T, T)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidDistribution("finite support is empty".into()));
        }
        if let Some((_, p)) = pairs.iter().find(|(_, p)| *p < T::zero()) {
            return Err(Error::InvalidDistribution(format!("negative probability {p}")));
        }
        let total = pairs.iter().fold(T::zero(), |acc, (_, p)| acc + p.clone());
        if total != T::one() {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}")));
        }
        Ok(Self::FiniteSupport(pairs))
    }

    pub fn moment_list(mu: Vec<T>) -> Result<Self> {
        if mu.first() != Some(&T::one()) {
            return Err(Error::InvalidDistribution("moment list must start with 1".into()));
        }
        Ok(Self::MomentList(mu))
    }

    /// `E[Y^n]`.
    pub fn raw_moment(&self, n: usize) -> Result<T> {
        Ok(match self {
            Self::Bernoulli(p) => {
                if n == 0 { T::one() } else { p.clone() }
            }
            // Touchard expansion Σ_k {n,k} α^k.
            Self::Poisson(alpha) => (0..=n).fold(T::zero(), |acc, k| {
                acc + stirling2::<T>(n, k) * pow(alpha, k)
            }),
            Self::Constant(c) => pow(c, n),
            Self::FiniteSupport(pairs) => pairs
                .iter()
                .fold(T::zero(), |acc, (v, p)| acc + p.clone() * pow(v, n)),
            Self::MomentList(mu) => mu
                .get(n)
                .cloned()
                .ok_or(Error::MomentUnavailable { order: n, available: mu.len() })?,
        })
    }

    /// Smallest `B` with `|Y| ≤ B` almost surely, if the support is bounded
    /// and known.
    pub fn support_bound(&self) -> Option<T> {
        match self {
            Self::Bernoulli(_) => Some(T::one()),
            Self::Constant(c) => Some(c.abs_value()),
            Self::FiniteSupport(pairs) => Some(
                pairs
                    .iter()
                    .filter(|(_, p)| !p.is_zero())
                    .map(|(v, _)| v.abs_value())
                    .fold(T::zero(), |m, v| if v > m { v } else { m }),
            ),
            Self::Poisson(_) | Self::MomentList(_) => None,
        }
    }

    pub fn moments(&self) -> MomentCache<T> {
        MomentCache::new(self.clone())
    }
}

impl<T: Scalar> fmt::Display for Distribution<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Bernoulli(p) => write!(f, "bernoulli:{p}"),
            Self::Poisson(a) => write!(f, "poisson:{a}"),
            Self::Constant(c) => write!(f, "const:{c}"),
            Self::FiniteSupport(pairs) => {
                write!(f, "finite:")?;
                for (i, (v, p)) in pairs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}:{p}")?;
                }
                Ok(())
            }
            Self::MomentList(mu) => {
                write!(f, "moments:")?;
                for (i, m) in mu.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{m}")?;
                }
                Ok(())
            }
        }
    }
}

/// Parses `a/b`, `a` or `-a/b`; the denominator must be nonzero.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("malformed rational `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: num_bigint::BigInt = num.parse().map_err(|_| bad())?;
    let den: num_bigint::BigInt = den.parse().map_err(|_| bad())?;
    if den == num_bigint::BigInt::ZERO {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(Rational::new(num, den))
}

impl FromStr for Distribution<Rational> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, body) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("distribution `{s}` lacks `kind:`")))?;
        match kind {
            "bernoulli" => Self::bernoulli(parse_rational(body)?),
            "poisson" => Self::poisson(parse_rational(body)?),
            "const" => Ok(Self::constant(parse_rational(body)?)),
            "finite" => {
                let pairs = body
                    .split(',')
                    .map(|pair| {
                        let (v, p) = pair
                            .split_once(':')
                            .ok_or_else(|| Error::Parse(format!("finite entry `{pair}` lacks `:`")))?;
                        Ok((parse_rational(v)?, parse_rational(p)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::finite(pairs)
            }
            "moments" => Self::moment_list(
                body.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?,
            ),
            other => Err(Error::Parse(format!("unknown distribution kind `{other}`"))),
        }
    }
}

/// Memo of `E[S_k^n]` for one distribution, where `S_k = Y_1 + ... + Y_k`.
///
/// Internally synchronized; every query is pure from the caller's side.
#[derive(Debug)]
pub struct MomentCache<T> {
    dist: Distribution<T>,
    raw: RwLock<Vec<T>>,
    // sums[k][n] = E[S_k^n]; every row has the same length.
    sums: RwLock<Vec<Vec<T>>>,
}

impl<T: Scalar> MomentCache<T> {
    pub fn new(dist: Distribution<T>) -> Self {
        Self { dist, raw: RwLock::new(Vec::new()), sums: RwLock::new(Vec::new()) }
    }

    pub fn distribution(&self) -> &Distribution<T> {
        &self.dist
    }

    pub fn raw_moment(&self, n: usize) -> Result<T> {
        if let Some(m) = self.raw.read().unwrap().get(n) {
            return Ok(m.clone());
        }
        let mut raw = self.raw.write().unwrap();
        while raw.len() <= n {
            let next = self.dist.raw_moment(raw.len())?;
            raw.push(next);
        }
        Ok(raw[n].clone())
    }

    /// `E[S_k^n]` via `E[S_k^n] = Σ_i C(n,i) E[Y^i] E[S_{k-1}^{n-i}]`.
    pub fn sum_raw_moment(&self, k: usize, n: usize) -> Result<T> {
        {
            let sums = self.sums.read().unwrap();
            if let Some(v) = sums.get(k).and_then(|row| row.get(n)) {
                return Ok(v.clone());
            }
        }
        let mut sums = self.sums.write().unwrap();
        let width = sums.first().map_or(0, Vec::len).max(n + 1);
        let mu: Vec<T> = (0..width).map(|i| self.raw_moment(i)).collect::<Result<_>>()?;
        if sums.first().is_none_or(|row| row.len() < width) {
            // widen: rebuild every stored row to the new order
            let rows = sums.len().max(k + 1);
            *sums = Self::build_rows(&mu, rows);
        }
        while sums.len() <= k {
            let next = Self::convolve(&mu, sums.last().unwrap());
            sums.push(next);
        }
        Ok(sums[k][n].clone())
    }

    fn build_rows(mu: &[T], rows: usize) -> Vec<Vec<T>> {
        let mut s0 = vec![T::zero(); mu.len()];
        s0[0] = T::one();
        let mut out = vec![s0];
        while out.len() < rows {
            let next = Self::convolve(mu, out.last().unwrap());
            out.push(next);
        }
        out
    }

    fn convolve(mu: &[T], prev: &[T]) -> Vec<T> {
        (0..mu.len())
            .map(|n| {
                (0..=n).fold(T::zero(), |acc, i| {
                    acc + binomial::<T>(n, i) * mu[i].clone() * prev[n - i].clone()
                })
            })
            .collect()
    }

    /// `E[⟨Y⟩_{n,λ}]`.
    pub fn deg_rising_moment(&self, n: usize, lambda: &T) -> Result<T> {
        self.sum_deg_rising_moment(1, n, lambda)
    }

    /// `E[⟨S_k⟩_{n,λ}]`, expanding `⟨x⟩_{n,λ}` in powers of `x`.
    pub fn sum_deg_rising_moment(&self, k: usize, n: usize, lambda: &T) -> Result<T> {
        deg_rising_poly(n, lambda)
            .coeffs()
            .iter()
            .enumerate()
            .try_fold(T::zero(), |acc, (l, c)| {
                Ok(acc + c.clone() * self.sum_raw_moment(k, l)?)
            })
    }

    /// `[E[⟨Y⟩_{1,λ}], ..., E[⟨Y⟩_{n,λ}]]`, the argument sequence of the
    /// partial Bell polynomials.
    pub fn deg_rising_moments(&self, n: usize, lambda: &T) -> Result<Vec<T>> {
        (1..=n).map(|m| self.deg_rising_moment(m, lambda)).collect()
    }
}

impl<T: Scalar> Clone for MomentCache<T> {
    fn clone(&self) -> Self {
        Self::new(self.dist.clone())
    }
}
