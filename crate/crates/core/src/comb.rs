//! Classical and degenerate combinatorial triangles, partial and complete
//! Bell polynomials, and the Bell / Lah-Bell polynomial families.

use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{binomial_int, factorial_int};
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::Scalar;
use crate::series;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `{n, k}`, set partitions into `k` blocks.
    Stirling2,
    /// `[n, k]`, permutations with `k` cycles.
    Stirling1Unsigned,
    /// `L(n, k)`, partitions into `k` linearly ordered blocks.
    Lah,
}

/// Lazily grown, process-wide lower-triangular table of integer entries.
///
/// Rows are only ever appended, so a value once returned never changes.
pub struct Triangle {
    family: Family,
    rows: RwLock<Vec<Vec<BigInt>>>,
}

impl Triangle {
    pub const fn new(family: Family) -> Self {
        Self { family, rows: RwLock::new(Vec::new()) }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn get(&self, n: usize, k: usize) -> BigInt {
        if k > n {
            return BigInt::zero();
        }
        self.ensure(n);
        self.rows.read().unwrap()[n][k].clone()
    }

    /// Row `n` as `n + 1` entries `(n, 0), ..., (n, n)`.
    pub fn row(&self, n: usize) -> Vec<BigInt> {
        self.ensure(n);
        self.rows.read().unwrap()[n].clone()
    }

    fn ensure(&self, n: usize) {
        if self.rows.read().unwrap().len() > n {
            return;
        }
        let mut rows = self.rows.write().unwrap();
        while rows.len() <= n {
            let next = self.next_row(&rows);
            rows.push(next);
        }
    }

    fn next_row(&self, rows: &[Vec<BigInt>]) -> Vec<BigInt> {
        let n = rows.len();
        match self.family {
            // Alternating sum: {n,k} = (1/k!) Σ_j C(k,j) (-1)^{k-j} j^n.
            Family::Stirling2 => (0..=n)
                .map(|k| {
                    let sum = (0..=k).fold(BigInt::zero(), |acc, j| {
                        let term = binomial_int(k, j) * BigInt::from(j).pow(n as u32);
                        if (k - j) % 2 == 0 { acc + term } else { acc - term }
                    });
                    sum / factorial_int(k)
                })
                .collect(),
            // [n,k] = [n-1,k-1] + (n-1)[n-1,k].
            Family::Stirling1Unsigned => {
                if n == 0 {
                    return vec![BigInt::one()];
                }
                let prev = &rows[n - 1];
                (0..=n)
                    .map(|k| {
                        let left = if k == 0 { BigInt::zero() } else { prev[k - 1].clone() };
                        let right = prev.get(k).cloned().unwrap_or_default();
                        left + right * BigInt::from(n - 1)
                    })
                    .collect()
            }
            Family::Lah => (0..=n)
                .map(|k| match (n, k) {
                    (0, 0) => BigInt::one(),
                    (_, 0) => BigInt::zero(),
                    _ => factorial_int(n) / factorial_int(k) * binomial_int(n - 1, k - 1),
                })
                .collect(),
        }
    }
}

static STIRLING2: Triangle = Triangle::new(Family::Stirling2);
static STIRLING1U: Triangle = Triangle::new(Family::Stirling1Unsigned);
static LAH: Triangle = Triangle::new(Family::Lah);

pub fn triangle(family: Family) -> &'static Triangle {
    match family {
        Family::Stirling2 => &STIRLING2,
        Family::Stirling1Unsigned => &STIRLING1U,
        Family::Lah => &LAH,
    }
}

pub fn stirling2<T: Scalar>(n: usize, k: usize) -> T {
    T::from_bigint(&STIRLING2.get(n, k))
}

pub fn stirling1u<T: Scalar>(n: usize, k: usize) -> T {
    T::from_bigint(&STIRLING1U.get(n, k))
}

pub fn stirling1u_row(n: usize) -> Vec<BigInt> {
    STIRLING1U.row(n)
}

pub fn lah<T: Scalar>(n: usize, k: usize) -> T {
    T::from_bigint(&LAH.get(n, k))
}

/// Exponential-generating coefficient of `t^m/m!` in
/// `-log_λ(1-t) = (1 - (1-t)^λ)/λ`.
///
/// Termwise this is `(-1)^{m+1} C(λ, m) m!/λ`; the factor `λ` is cancelled
/// against the first factor of `C(λ, m)`, leaving `(1-λ)(2-λ)...(m-1-λ)`,
/// which is regular at `λ = 0`.
pub fn neg_deg_log_egf_coeff<T: Scalar>(m: usize, lambda: &T) -> T {
    if m == 0 {
        return T::zero();
    }
    (1..m).fold(T::one(), |acc, i| acc * (T::from_usize(i) - lambda.clone()))
}

/// Degenerate unsigned Stirling numbers of the first kind, rows `0..=n_max`.
pub fn deg_stirling1_table<T: Scalar>(n_max: usize, lambda: &T) -> Vec<Vec<T>> {
    let egf: Vec<T> = (0..=n_max).map(|m| neg_deg_log_egf_coeff(m, lambda)).collect();
    series::egf_power_table(&series::egf_to_ogf(&egf), n_max)
}

pub fn deg_stirling1<T: Scalar>(n: usize, k: usize, lambda: &T) -> T {
    if k > n {
        return T::zero();
    }
    deg_stirling1_table(n, lambda)[n][k].clone()
}

/// Partial Bell polynomial `B_{n,k}(x_1, ..., x_{n-k+1})`, with `xs[i]`
/// holding `x_{i+1}`.
pub fn partial_bell<T: Scalar>(n: usize, k: usize, xs: &[T]) -> Result<T> {
    if k > n {
        return Ok(T::zero());
    }
    if k == 0 {
        return Ok(if n == 0 { T::one() } else { T::zero() });
    }
    let width = n - k + 1;
    if xs.len() < width {
        return Err(Error::InsufficientSequence { needed: width, got: xs.len() });
    }
    let mut acc = T::zero();
    let mut mult = vec![0usize; width + 1];
    bell_dfs(width, k, n, xs, &mut mult, &mut acc, n);
    Ok(acc)
}

// Chooses the multiplicity of block size `size`, largest size first, with
// `blocks` blocks and `total` elements still to place.
fn bell_dfs<T: Scalar>(
    size: usize,
    blocks: usize,
    total: usize,
    xs: &[T],
    mult: &mut [usize],
    acc: &mut T,
    n: usize,
) {
    if size == 1 {
        if total != blocks {
            return;
        }
        mult[1] = blocks;
        let mut denom = BigInt::one();
        let mut prod = T::one();
        for (i, &l) in mult.iter().enumerate().skip(1) {
            if l == 0 {
                continue;
            }
            denom *= factorial_int(l) * factorial_int(i).pow(l as u32);
            prod = prod * crate::scalar::pow(&xs[i - 1], l);
        }
        let count = factorial_int(n) / denom;
        *acc = acc.clone() + T::from_bigint(&count) * prod;
        mult[1] = 0;
        return;
    }
    let max_here = (total.saturating_sub(blocks)) / (size - 1);
    for l in 0..=max_here.min(blocks) {
        let (b, t) = (blocks - l, total - l * size);
        // every remaining block needs between 1 and size-1 elements
        if t < b || t > b * (size - 1) {
            continue;
        }
        mult[size] = l;
        bell_dfs(size - 1, b, t, xs, mult, acc, n);
    }
    mult[size] = 0;
}

/// Complete Bell polynomial `B_n(x_1, ..., x_n)`.
pub fn complete_bell<T: Scalar>(n: usize, xs: &[T]) -> Result<T> {
    if xs.len() < n {
        return Err(Error::InsufficientSequence { needed: n, got: xs.len() });
    }
    (0..=n).try_fold(T::zero(), |acc, k| Ok(acc + partial_bell(n, k, xs)?))
}

/// Bell (Touchard) polynomial `φ_n(x) = Σ_k {n,k} x^k`.
pub fn bell_poly<T: Scalar>(n: usize) -> Polynomial<T> {
    Polynomial::from_coeffs(STIRLING2.row(n).iter().map(T::from_bigint).collect())
}

/// Lah-Bell polynomial `LB_n(x) = Σ_k L(n,k) x^k`.
pub fn lah_bell_poly<T: Scalar>(n: usize) -> Polynomial<T> {
    Polynomial::from_coeffs(LAH.row(n).iter().map(T::from_bigint).collect())
}
