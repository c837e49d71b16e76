//! Heterogeneous Stirling numbers and Bell polynomials, deterministic and
//! probabilistic.
//!
//! The probabilistic numbers `H_λ^Y(n,k)` can be computed three ways (see
//! [`Route`]); all three are exact and must agree. `Direct` is the default.

use std::fmt;
use std::str::FromStr;

use crate::arith::{binomial, deg_rising_factorial, factorial};
use crate::comb::{partial_bell, stirling1u};
use crate::error::{Error, Result};
use crate::moments::MomentCache;
use crate::poly::Polynomial;
use crate::scalar::{Scalar, pow, sign};

/// `H_λ(n,k) = (1/k!) Σ_j C(k,j) (-1)^{k-j} ⟨j⟩_{n,λ}`.
pub fn hetero_stirling<T: Scalar>(n: usize, k: usize, lambda: &T) -> T {
    if k > n {
        return T::zero();
    }
    let sum = (0..=k).fold(T::zero(), |acc, j| {
        acc + binomial::<T>(k, j)
            * sign::<T>(k - j)
            * deg_rising_factorial(&T::from_usize(j), n, lambda)
    });
    sum / factorial::<T>(k)
}

pub fn hetero_stirling_row<T: Scalar>(n: usize, lambda: &T) -> Vec<T> {
    let rising: Vec<T> = (0..=n)
        .map(|j| deg_rising_factorial(&T::from_usize(j), n, lambda))
        .collect();
    (0..=n)
        .map(|k| kth_difference(k, |j| Ok(rising[j].clone())).expect("infallible"))
        .collect()
}

/// `H_{n,λ}(x) = Σ_k H_λ(n,k) x^k`.
pub fn hetero_bell_poly<T: Scalar>(n: usize, lambda: &T) -> Polynomial<T> {
    Polynomial::from_coeffs(hetero_stirling_row(n, lambda))
}

// (1/k!) Σ_j C(k,j) (-1)^{k-j} f(j)
fn kth_difference<T: Scalar>(k: usize, mut f: impl FnMut(usize) -> Result<T>) -> Result<T> {
    let mut sum = T::zero();
    for j in 0..=k {
        sum = sum + binomial::<T>(k, j) * sign::<T>(k - j) * f(j)?;
    }
    Ok(sum / factorial::<T>(k))
}

/// Probabilistic Stirling numbers of the second kind `{n,k}_Y`.
pub fn prob_stirling2<T: Scalar>(m: &MomentCache<T>, n: usize, k: usize) -> Result<T> {
    kth_difference(k, |l| m.sum_raw_moment(l, n))
}

/// Probabilistic Lah numbers `L^Y(n,k)`.
pub fn prob_lah<T: Scalar>(m: &MomentCache<T>, n: usize, k: usize) -> Result<T> {
    kth_difference(k, |l| m.sum_deg_rising_moment(l, n, &T::one()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Route {
    /// Alternating sum over `E[⟨S_j⟩_{n,λ}]`.
    #[default]
    Direct,
    /// `Σ_l {l,k}_Y [n,l] λ^{n-l}`.
    ViaStirlingTransform,
    /// `B_{n,k}(E[⟨Y⟩_{1,λ}], E[⟨Y⟩_{2,λ}], ...)`.
    ViaPartialBell,
}

impl Route {
    pub const ALL: [Route; 3] = [Route::Direct, Route::ViaStirlingTransform, Route::ViaPartialBell];
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Direct => "direct",
            Route::ViaStirlingTransform => "stirling",
            Route::ViaPartialBell => "bell",
        })
    }
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Route::Direct),
            "stirling" => Ok(Route::ViaStirlingTransform),
            "bell" => Ok(Route::ViaPartialBell),
            _ => Err(Error::Parse(format!("unknown route `{s}`"))),
        }
    }
}

/// Probabilistic heterogeneous Stirling number `H_λ^Y(n,k)`.
pub fn prob_hetero_stirling<T: Scalar>(
    m: &MomentCache<T>,
    n: usize,
    k: usize,
    lambda: &T,
    route: Route,
) -> Result<T> {
    match route {
        Route::Direct => kth_difference(k, |j| m.sum_deg_rising_moment(j, n, lambda)),
        Route::ViaStirlingTransform => (k..=n).try_fold(T::zero(), |acc, l| {
            Ok(acc + prob_stirling2(m, l, k)? * stirling1u::<T>(n, l) * pow(lambda, n - l))
        }),
        Route::ViaPartialBell => {
            if k > n {
                return Ok(T::zero());
            }
            let width = if k == 0 { 0 } else { n - k + 1 };
            partial_bell(n, k, &m.deg_rising_moments(width, lambda)?)
        }
    }
}

/// Row `n` of `H_λ^Y`, entries `k = 0..=n`.
pub fn prob_hetero_row<T: Scalar>(
    m: &MomentCache<T>,
    n: usize,
    lambda: &T,
    route: Route,
) -> Result<Vec<T>> {
    if route == Route::Direct {
        let expectations: Vec<T> = (0..=n)
            .map(|j| m.sum_deg_rising_moment(j, n, lambda))
            .collect::<Result<_>>()?;
        return (0..=n)
            .map(|k| kth_difference(k, |j| Ok(expectations[j].clone())))
            .collect();
    }
    (0..=n).map(|k| prob_hetero_stirling(m, n, k, lambda, route)).collect()
}

/// `H_{n,λ}^Y(x) = Σ_k H_λ^Y(n,k) x^k`, using the direct route.
pub fn prob_hetero_bell_poly<T: Scalar>(m: &MomentCache<T>, n: usize, lambda: &T) -> Result<Polynomial<T>> {
    prob_hetero_bell_poly_via(m, n, lambda, Route::Direct)
}

pub fn prob_hetero_bell_poly_via<T: Scalar>(
    m: &MomentCache<T>,
    n: usize,
    lambda: &T,
    route: Route,
) -> Result<Polynomial<T>> {
    Ok(Polynomial::from_coeffs(prob_hetero_row(m, n, lambda, route)?))
}

/// `[H_{0,λ}^Y, ..., H_{n_max,λ}^Y]` built only from
/// `H_{n+1} = x Σ_k C(n,k) E[⟨Y⟩_{k+1,λ}] H_{n-k}` with `H_0 = 1`.
pub fn prob_hetero_bell_recurrence<T: Scalar>(
    m: &MomentCache<T>,
    n_max: usize,
    lambda: &T,
) -> Result<Vec<Polynomial<T>>> {
    let moments = m.deg_rising_moments(n_max, lambda)?;
    let mut out = vec![Polynomial::one()];
    for n in 0..n_max {
        let inner: Polynomial<T> = (0..=n)
            .map(|k| out[n - k].scale(&(binomial::<T>(n, k) * moments[k].clone())))
            .sum();
        out.push(&inner * &Polynomial::x());
    }
    Ok(out)
}

/// `(d/dx)^k H_{n,λ}^Y(x) = k! Σ_{j=0}^{n-k} C(n,j) H_{j,λ}^Y(x) H_λ^Y(n-j,k)`.
pub fn hetero_derivative<T: Scalar>(
    m: &MomentCache<T>,
    n: usize,
    lambda: &T,
    k: usize,
) -> Result<Polynomial<T>> {
    if k == 0 || k > n {
        return Err(Error::InvalidOrder { n, k });
    }
    let mut acc = Polynomial::zero();
    for j in 0..=n - k {
        let weight = binomial::<T>(n, j) * prob_hetero_stirling(m, n - j, k, lambda, Route::Direct)?;
        acc = &acc + &prob_hetero_bell_poly(m, j, lambda)?.scale(&weight);
    }
    Ok(acc.scale(&factorial::<T>(k)))
}

/// First derivative in moment form:
/// `Σ_{j=0}^{n-1} C(n,j) E[⟨Y⟩_{n-j,λ}] H_{j,λ}^Y(x)`.
pub fn hetero_first_derivative<T: Scalar>(
    m: &MomentCache<T>,
    n: usize,
    lambda: &T,
) -> Result<Polynomial<T>> {
    if n == 0 {
        return Err(Error::InvalidOrder { n, k: 1 });
    }
    let mut acc = Polynomial::zero();
    for j in 0..n {
        let weight = binomial::<T>(n, j) * m.deg_rising_moment(n - j, lambda)?;
        acc = &acc + &prob_hetero_bell_poly(m, j, lambda)?.scale(&weight);
    }
    Ok(acc)
}

/// Result of summing the Dobiński-type series for `H_{n,λ}^Y(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DobinskiApprox<T> {
    /// `e^{-x}` times the exact partial sum.
    pub value: f64,
    /// Terms `k = 0..terms` were summed.
    pub terms: usize,
    /// Upper bound on the magnitude of the discarded tail, including the
    /// `e^{-x}` factor.
    pub tail_bound: f64,
    /// The exact partial sum `Σ_{k<terms} E[⟨S_k⟩_{n,λ}] x^k/k!`.
    pub partial_sum: T,
}

const DOBINSKI_MAX_TERMS: usize = 20_000;

/// Evaluates `H_{n,λ}^Y(x) = e^{-x} Σ_k E[⟨S_k⟩_{n,λ}] x^k/k!` by truncation.
///
/// With `|Y| ≤ B`, every coefficient satisfies
/// `|E[⟨S_k⟩_{n,λ}]| ≤ b_k = (kB + (n-1)|λ|)^n`, and the majorant terms
/// `b_k x^k/k!` have a ratio that decreases in `k`. Summation stops at the
/// first `K` past the peak whose geometric tail bound falls below
/// `rel_tol/2` of the partial sum.
pub fn dobinski_eval<T: Scalar>(
    m: &MomentCache<T>,
    n: usize,
    lambda: &T,
    x: &T,
    rel_tol: f64,
) -> Result<DobinskiApprox<T>> {
    let bound = m
        .distribution()
        .support_bound()
        .ok_or_else(|| Error::UnsupportedDistribution(format!("{}", DistName(m))))?
        .to_f64_lossy();
    if *x <= T::zero() {
        return Err(Error::NonPositiveEvaluationPoint);
    }
    let xf = x.to_f64_lossy();
    let shift = n.saturating_sub(1) as f64 * lambda.to_f64_lossy().abs();
    let majorant = |k: usize| (k as f64 * bound + shift).powi(n as i32);

    let mut partial = T::zero();
    let mut x_pow_over_fact = T::one();
    // x^k/k! in floating point, for the majorant
    let mut weight = 1.0f64;
    for k in 0..DOBINSKI_MAX_TERMS {
        if k > 0 {
            x_pow_over_fact = x_pow_over_fact * x.clone() / T::from_usize(k);
            weight *= xf / k as f64;
        }
        partial = partial + m.sum_deg_rising_moment(k, n, lambda)? * x_pow_over_fact.clone();

        let j = k + 1;
        let next = majorant(j) * weight * xf / j as f64;
        let ratio = if majorant(j) > 0.0 {
            (majorant(j + 1) / majorant(j)) * xf / (j + 1) as f64
        } else {
            0.0
        };
        if ratio >= 1.0 {
            continue;
        }
        let tail = next / (1.0 - ratio);
        let magnitude = partial.to_f64_lossy().abs();
        if tail <= 0.5 * rel_tol * magnitude || tail <= f64::MIN_POSITIVE {
            let scale = (-xf).exp();
            return Ok(DobinskiApprox {
                value: partial.to_f64_lossy() * scale,
                terms: k + 1,
                tail_bound: tail * scale,
                partial_sum: partial,
            });
        }
    }
    Err(Error::TruncationLimit(DOBINSKI_MAX_TERMS))
}

struct DistName<'a, T>(&'a MomentCache<T>);

impl<T: Scalar> fmt::Display for DistName<'_, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.distribution())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comb::{bell_poly, lah, lah_bell_poly, stirling2};
    use crate::moments::Distribution;
    use crate::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn int(n: i64) -> Rational {
        r(n, 1)
    }

    fn builtins() -> Vec<Distribution<Rational>> {
        vec![
            Distribution::constant(int(1)),
            Distribution::bernoulli(r(1, 3)).unwrap(),
            Distribution::bernoulli(r(1, 2)).unwrap(),
            Distribution::poisson(int(1)).unwrap(),
            Distribution::poisson(int(2)).unwrap(),
            Distribution::finite(vec![(int(0), r(1, 2)), (int(2), r(1, 2))]).unwrap(),
        ]
    }

    #[test]
    fn hetero_stirling_examples() {
        let lam = r(2, 9);
        assert_eq!(hetero_stirling(2, 1, &lam), int(1) + lam.clone());
        assert_eq!(hetero_stirling(3, 2, &lam), int(3) + int(3) * lam.clone());
        for n in 0..10 {
            assert_eq!(hetero_stirling(n, n, &lam), int(1));
        }
        assert_eq!(hetero_stirling(2, 4, &lam), int(0));
    }

    #[test]
    fn hetero_stirling_connects_rising_and_falling_factorials() {
        // ⟨x⟩_{n,λ} = Σ_k H_λ(n,k) (x)_k, checked at several x
        for lam in [r(1, 3), int(-2), r(7, 4)] {
            for n in 0..=8 {
                for x in [r(1, 2), int(3), r(-5, 3)] {
                    let rhs = (0..=n).fold(int(0), |acc, k| {
                        acc + hetero_stirling(n, k, &lam)
                            * crate::arith::deg_falling_factorial(&x, k, &int(1))
                    });
                    assert_eq!(deg_rising_factorial(&x, n, &lam), rhs);
                }
            }
        }
    }

    #[test]
    fn hetero_limits() {
        for n in 0..=20 {
            for k in 0..=n {
                assert_eq!(hetero_stirling(n, k, &int(0)), stirling2::<Rational>(n, k));
                assert_eq!(hetero_stirling(n, k, &int(1)), lah::<Rational>(n, k));
            }
        }
        for n in 0..=15 {
            assert_eq!(hetero_bell_poly(n, &int(0)), bell_poly(n));
            assert_eq!(hetero_bell_poly(n, &int(1)), lah_bell_poly(n));
        }
    }

    #[test]
    fn hetero_bell_poly_examples() {
        let lam = r(5, 3);
        assert_eq!(hetero_bell_poly(1, &lam), Polynomial::x());
        assert_eq!(
            hetero_bell_poly(2, &lam).coeffs(),
            &[int(0), int(1) + lam.clone(), int(1)]
        );
        assert_eq!(hetero_bell_poly(0, &lam), Polynomial::one());
    }

    #[test]
    fn prob_stirling2_and_lah_examples() {
        let one = Distribution::constant(int(1)).moments();
        for n in 0..=8 {
            for k in 0..=n {
                assert_eq!(prob_stirling2(&one, n, k).unwrap(), stirling2::<Rational>(n, k));
                assert_eq!(prob_lah(&one, n, k).unwrap(), lah::<Rational>(n, k));
            }
        }
        let p = r(3, 10);
        let b = Distribution::bernoulli(p.clone()).unwrap().moments();
        assert_eq!(prob_stirling2(&b, 2, 1).unwrap(), p.clone());
        assert_eq!(prob_lah(&b, 2, 1).unwrap(), int(2) * p);
        assert_eq!(prob_lah(&b, 0, 0).unwrap(), int(1));
        for d in builtins() {
            let m = d.moments();
            for n in 0..5 {
                for k in n + 1..n + 4 {
                    assert_eq!(prob_stirling2(&m, n, k).unwrap(), int(0));
                }
            }
        }
    }

    #[test]
    fn prob_hetero_examples() {
        let lam = r(3, 4);
        let p = r(2, 5);
        let b = Distribution::bernoulli(p.clone()).unwrap().moments();
        let one = Distribution::constant(int(1)).moments();
        for route in Route::ALL {
            for n in 0..=7 {
                for k in 0..=n {
                    assert_eq!(
                        prob_hetero_stirling(&b, n, k, &lam, route).unwrap(),
                        pow(&p, k) * hetero_stirling(n, k, &lam)
                    );
                    assert_eq!(
                        prob_hetero_stirling(&one, n, k, &lam, route).unwrap(),
                        hetero_stirling(n, k, &lam)
                    );
                }
            }
        }
        let pois = Distribution::poisson(int(1)).unwrap().moments();
        assert_eq!(prob_hetero_stirling(&pois, 2, 1, &int(0), Route::Direct).unwrap(), int(2));
    }

    #[test]
    fn routes_agree() {
        for d in builtins() {
            let m = d.moments();
            for lam in [int(0), r(1, 3), int(1), r(5, 2)] {
                for n in 0..=9 {
                    let direct = prob_hetero_row(&m, n, &lam, Route::Direct).unwrap();
                    assert_eq!(direct, prob_hetero_row(&m, n, &lam, Route::ViaStirlingTransform).unwrap());
                    assert_eq!(direct, prob_hetero_row(&m, n, &lam, Route::ViaPartialBell).unwrap());
                }
            }
        }
    }

    #[test]
    fn diagonal_and_edges() {
        let lam = r(1, 3);
        for d in builtins() {
            let m = d.moments();
            assert_eq!(prob_hetero_stirling(&m, 0, 0, &lam, Route::Direct).unwrap(), int(1));
            for n in 0..=7 {
                for k in n + 1..=n + 3 {
                    assert_eq!(prob_hetero_stirling(&m, n, k, &lam, Route::Direct).unwrap(), int(0));
                }
                if n >= 1 {
                    assert_eq!(
                        prob_hetero_stirling(&m, n, 1, &lam, Route::Direct).unwrap(),
                        m.deg_rising_moment(n, &lam).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn specialization_lattice() {
        for d in builtins() {
            let m = d.moments();
            for n in 0..=10 {
                for k in 0..=n {
                    assert_eq!(
                        prob_hetero_stirling(&m, n, k, &int(0), Route::Direct).unwrap(),
                        prob_stirling2(&m, n, k).unwrap()
                    );
                    assert_eq!(
                        prob_hetero_stirling(&m, n, k, &int(1), Route::Direct).unwrap(),
                        prob_lah(&m, n, k).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn recurrence_matches_explicit() {
        let m = Distribution::bernoulli(r(1, 2)).unwrap().moments();
        let lam = r(1, 2);
        assert_eq!(prob_hetero_bell_recurrence(&m, 0, &lam).unwrap(), vec![Polynomial::one()]);
        for d in builtins() {
            let m = d.moments();
            let first = prob_hetero_bell_recurrence(&m, 1, &lam).unwrap();
            assert_eq!(first[1], Polynomial::monomial(m.raw_moment(1).unwrap(), 1));
            for lam in [int(0), r(1, 2), int(3)] {
                let rec = prob_hetero_bell_recurrence(&m, 10, &lam).unwrap();
                for (n, p) in rec.iter().enumerate() {
                    assert_eq!(*p, prob_hetero_bell_poly(&m, n, &lam).unwrap());
                }
            }
        }
    }

    #[test]
    fn derivative_examples() {
        let lam = r(2, 3);
        let p = r(1, 4);
        let b = Distribution::bernoulli(p.clone()).unwrap().moments();
        assert_eq!(
            hetero_derivative(&b, 2, &lam, 1).unwrap().coeffs(),
            &[p.clone() * (int(1) + lam.clone()), int(2) * p.clone() * p.clone()]
        );
        let one = Distribution::constant(int(1)).moments();
        assert_eq!(hetero_derivative(&one, 2, &int(0), 1).unwrap().coeffs(), &[int(1), int(2)]);
        for d in builtins() {
            let m = d.moments();
            for n in 1..=8 {
                let top = hetero_derivative(&m, n, &lam, n).unwrap();
                let lead = prob_hetero_stirling(&m, n, n, &lam, Route::Direct).unwrap();
                assert_eq!(top, Polynomial::constant(factorial::<Rational>(n) * lead).scale(&int(1)));
                let h = prob_hetero_bell_poly(&m, n, &lam).unwrap();
                for k in 1..=n {
                    assert_eq!(hetero_derivative(&m, n, &lam, k).unwrap(), h.nth_derivative(k));
                }
                assert_eq!(hetero_first_derivative(&m, n, &lam).unwrap(), h.derivative());
            }
        }
        assert_eq!(hetero_derivative(&b, 3, &lam, 0), Err(Error::InvalidOrder { n: 3, k: 0 }));
        assert_eq!(hetero_derivative(&b, 3, &lam, 4), Err(Error::InvalidOrder { n: 3, k: 4 }));
    }

    #[test]
    fn dobinski_matches_exact() {
        let cases = [
            Distribution::constant(int(1)),
            Distribution::bernoulli(r(1, 2)).unwrap(),
            Distribution::finite(vec![(int(-1), r(1, 3)), (int(2), r(2, 3))]).unwrap(),
        ];
        for d in cases {
            let m = d.moments();
            for lam in [int(0), r(1, 2), int(1)] {
                for n in 0..=6 {
                    for x in [r(1, 2), int(1), int(3)] {
                        let exact = prob_hetero_bell_poly(&m, n, &lam).unwrap().eval(&x).to_f64_lossy();
                        let approx = dobinski_eval(&m, n, &lam, &x, 1e-12).unwrap();
                        let err = (approx.value - exact).abs();
                        assert!(err <= 1e-12 * exact.abs() + 1e-300, "{d} n={n} lam={lam} x={x}: {err}");
                    }
                }
            }
        }
    }

    #[test]
    fn dobinski_examples_and_errors() {
        let one = Distribution::constant(int(1)).moments();
        let a = dobinski_eval(&one, 1, &r(1, 3), &r(5, 2), 1e-12).unwrap();
        assert!((a.value - 2.5).abs() < 1e-12 * 2.5);
        let lb = dobinski_eval(&one, 2, &int(1), &int(2), 1e-10).unwrap();
        assert!((lb.value - 8.0).abs() < 8e-10);
        let pois = Distribution::poisson(int(1)).unwrap().moments();
        assert!(matches!(
            dobinski_eval(&pois, 2, &int(1), &int(1), 1e-10),
            Err(Error::UnsupportedDistribution(_))
        ));
        assert_eq!(dobinski_eval(&one, 2, &int(1), &int(0), 1e-10), Err(Error::NonPositiveEvaluationPoint));
        // Y ≡ 0: every term vanishes for n ≥ 1
        let zero = Distribution::constant(int(0)).moments();
        assert_eq!(dobinski_eval(&zero, 3, &int(1), &int(1), 1e-12).unwrap().value, 0.0);
    }

    #[test]
    fn float_instantiation_tracks_exact() {
        let lam = 0.5f64;
        for n in 0..=10 {
            for k in 0..=n {
                let exact = hetero_stirling(n, k, &r(1, 2)).to_f64_lossy();
                let approx = hetero_stirling(n, k, &lam);
                assert!((approx - exact).abs() <= 1e-9 * exact.abs().max(1.0));
            }
        }
        let m = Distribution::<f64>::bernoulli(0.25).unwrap().moments();
        let v = prob_hetero_stirling(&m, 5, 2, &lam, Route::ViaPartialBell).unwrap();
        assert!((v - 0.0625 * hetero_stirling(5, 2, &lam)).abs() < 1e-9);
    }
}
