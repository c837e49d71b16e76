//! Truncated power series, used where a quantity is defined as a
//! coefficient of a power of a known series.

use crate::arith::factorial;
use crate::scalar::Scalar;

/// Product of two ordinary power series, keeping terms up to `t^order`.
pub fn mul_trunc<T: Scalar>(a: &[T], b: &[T], order: usize) -> Vec<T> {
    let mut out = vec![T::zero(); order + 1];
    for (i, x) in a.iter().enumerate().take(order + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

/// `[f^0, f^1, ..., f^k_max]`, each truncated at `t^order`.
pub fn powers_trunc<T: Scalar>(f: &[T], k_max: usize, order: usize) -> Vec<Vec<T>> {
    let mut one = vec![T::zero(); order + 1];
    one[0] = T::one();
    let mut out = vec![one];
    for _ in 0..k_max {
        let next = mul_trunc(out.last().unwrap(), f, order);
        out.push(next);
    }
    out
}

/// Converts exponential-generating coefficients `x_m` (`xs[m]` multiplies
/// `t^m/m!`) into ordinary coefficients.
pub fn egf_to_ogf<T: Scalar>(xs: &[T]) -> Vec<T> {
    xs.iter()
        .enumerate()
        .map(|(m, x)| x.clone() / factorial::<T>(m))
        .collect()
}

/// Table `a[n][k] = n!·[t^n] f(t)^k / k!` for `0 ≤ k ≤ n ≤ n_max`, where `f`
/// is given by ordinary coefficients with `f[0] = 0`.
pub fn egf_power_table<T: Scalar>(f: &[T], n_max: usize) -> Vec<Vec<T>> {
    let powers = powers_trunc(f, n_max, n_max);
    (0..=n_max)
        .map(|n| {
            (0..=n)
                .map(|k| {
                    let c = powers[k].get(n).cloned().unwrap_or_else(T::zero);
                    c * factorial::<T>(n) / factorial::<T>(k)
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn int(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn exp_minus_one_powers_give_stirling2() {
        // e^t - 1
        let f: Vec<Rational> = (0..=6)
            .map(|m| if m == 0 { int(0) } else { int(1) / factorial::<Rational>(m) })
            .collect();
        let table = egf_power_table(&f, 6);
        assert_eq!(table[4][2], int(7));
        assert_eq!(table[6][3], int(90));
        assert_eq!(table[0][0], int(1));
        assert_eq!(table[5][0], int(0));
    }

    #[test]
    fn geometric_series_square() {
        let g = vec![int(1); 5];
        assert_eq!(mul_trunc(&g, &g, 4), vec![int(1), int(2), int(3), int(4), int(5)]);
    }
}
