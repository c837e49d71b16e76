//! Binomial-type coefficients and degenerate rising factorials.

use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::One;

use crate::comb;
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::{Scalar, pow};

static FACTORIALS: RwLock<Vec<BigInt>> = RwLock::new(Vec::new());

/// `n!`, memoized for the lifetime of the process.
pub fn factorial_int(n: usize) -> BigInt {
    if let Some(f) = FACTORIALS.read().unwrap().get(n) {
        return f.clone();
    }
    let mut table = FACTORIALS.write().unwrap();
    if table.is_empty() {
        table.push(BigInt::one());
    }
    while table.len() <= n {
        let next = table.last().unwrap() * BigInt::from(table.len());
        table.push(next);
    }
    table[n].clone()
}

/// `C(n, k)`, zero for `k > n`.
pub fn binomial_int(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::ZERO;
    }
    factorial_int(n) / (factorial_int(k) * factorial_int(n - k))
}

pub fn factorial<T: Scalar>(n: usize) -> T {
    T::from_bigint(&factorial_int(n))
}

pub fn binomial<T: Scalar>(n: usize, k: usize) -> T {
    T::from_bigint(&binomial_int(n, k))
}

/// `a(a-1)...(a-m+1)/m!` for arbitrary `a`.
pub fn gen_binomial<T: Scalar>(a: &T, m: usize) -> T {
    let falling = (0..m).fold(T::one(), |acc, i| acc * (a.clone() - T::from_usize(i)));
    falling / factorial::<T>(m)
}

/// `n!/(l_1!...l_j!)`; the parts must sum to `n`.
pub fn multinomial<T: Scalar>(n: usize, parts: &[usize]) -> Result<T> {
    let sum: usize = parts.iter().sum();
    if sum != n {
        return Err(Error::PartsMismatch { n, sum });
    }
    let denom = parts
        .iter()
        .fold(BigInt::one(), |acc, &l| acc * factorial_int(l));
    Ok(T::from_bigint(&(factorial_int(n) / denom)))
}

/// `x(x+λ)(x+2λ)...(x+(n-1)λ)`; the empty product for `n = 0`.
pub fn deg_rising_factorial<T: Scalar>(x: &T, n: usize, lambda: &T) -> T {
    (0..n).fold(T::one(), |acc, i| {
        acc * (x.clone() + T::from_usize(i) * lambda.clone())
    })
}

/// `x(x-λ)...(x-(n-1)λ)`.
pub fn deg_falling_factorial<T: Scalar>(x: &T, n: usize, lambda: &T) -> T {
    deg_rising_factorial(x, n, &-lambda.clone())
}

/// `⟨x⟩_{n,λ} = Σ_l [n, l] λ^{n-l} x^l` as a polynomial in `x`.
pub fn deg_rising_poly<T: Scalar>(n: usize, lambda: &T) -> Polynomial<T> {
    let row = comb::stirling1u_row(n);
    Polynomial::from_coeffs(
        row.iter()
            .enumerate()
            .map(|(l, s)| T::from_bigint(s) * pow(lambda, n - l))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn int(n: i64) -> Rational {
        r(n, 1)
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial::<Rational>(5, 2), int(10));
        assert_eq!(binomial::<Rational>(4, 0), int(1));
        assert_eq!(binomial::<Rational>(3, 5), int(0));
        assert_eq!(binomial::<f64>(30, 15), 155117520.0);
    }

    #[test]
    fn gen_binomial_examples() {
        assert_eq!(gen_binomial(&r(1, 2), 2), r(-1, 8));
        assert_eq!(gen_binomial(&r(7, 3), 0), int(1));
        assert_eq!(gen_binomial(&int(3), 2), int(3));
        assert_eq!(gen_binomial(&int(2), 5), int(0));
    }

    #[test]
    fn multinomial_examples() {
        assert_eq!(multinomial::<Rational>(3, &[1, 2]), Ok(int(3)));
        assert_eq!(multinomial::<Rational>(4, &[2, 2]), Ok(int(6)));
        assert_eq!(multinomial::<Rational>(0, &[]), Ok(int(1)));
        assert_eq!(
            multinomial::<Rational>(4, &[1, 2]),
            Err(Error::PartsMismatch { n: 4, sum: 3 })
        );
    }

    #[test]
    fn deg_rising_factorial_examples() {
        assert_eq!(deg_rising_factorial(&int(1), 2, &r(1, 2)), r(3, 2));
        assert_eq!(deg_rising_factorial(&r(5, 7), 0, &r(1, 2)), int(1));
        assert_eq!(deg_rising_factorial(&int(2), 3, &int(1)), int(24));
        assert_eq!(deg_falling_factorial(&int(5), 3, &int(1)), int(60));
    }

    #[test]
    fn deg_rising_poly_examples() {
        let lam = r(2, 5);
        assert_eq!(deg_rising_poly(2, &lam).coeffs(), &[int(0), lam.clone(), int(1)]);
        assert_eq!(deg_rising_poly(0, &lam), Polynomial::one());
        assert_eq!(deg_rising_poly(3, &int(0)), Polynomial::monomial(int(1), 3));
    }

    #[test]
    fn deg_rising_poly_matches_product() {
        for lam in [int(0), r(1, 3), int(1), int(2)] {
            for n in 0..=12 {
                let p = deg_rising_poly(n, &lam);
                assert_eq!(p.degree(), Some(n));
                for x in [int(0), r(-7, 2), r(5, 3), int(11)] {
                    assert_eq!(p.eval(&x), deg_rising_factorial(&x, n, &lam), "n={n} lam={lam}");
                }
            }
        }
    }

    #[test]
    fn binomials_from_multinomial_and_gen_binomial() {
        for n in 0..=15 {
            for k in 0..=n {
                let b = binomial::<Rational>(n, k);
                assert_eq!(multinomial::<Rational>(n, &[k, n - k]).unwrap(), b);
                assert_eq!(gen_binomial(&Rational::from_usize(n), k), b);
            }
        }
    }

    proptest! {
        #[test]
        fn deg_rising_poly_eval_random(xn in -50i64..50, xd in 1i64..9, n in 0usize..=12, li in 0usize..4) {
            let lam = [int(0), r(1, 3), int(1), int(2)][li].clone();
            let x = r(xn, xd);
            prop_assert_eq!(deg_rising_poly(n, &lam).eval(&x), deg_rising_factorial(&x, n, &lam));
        }

        #[test]
        fn results_are_normalized(an in -30i64..30, ad in 1i64..12, m in 0usize..8) {
            let g = gen_binomial(&r(an, ad), m);
            prop_assert!(*g.denom() > 0.into());
            prop_assert_eq!(g.clone(), Rational::new(g.numer().clone(), g.denom().clone()));
        }
    }
}
