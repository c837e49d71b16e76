//! Polynomials in finitely many i.i.d. copies `Y_1, ..., Y_j` of a random
//! variable, and their exact expectations.

use std::collections::BTreeMap;

use crate::arith::{binomial, deg_rising_poly, multinomial};
use crate::error::{Error, Result};
use crate::hetero::prob_hetero_bell_poly;
use crate::moments::MomentCache;
use crate::poly::Polynomial;
use crate::scalar::{Scalar, pow};
use crate::arith::factorial;

/// Sparse polynomial in `arity` variables; keys are exponent vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SymPoly<T> {
    arity: usize,
    terms: BTreeMap<Vec<u32>, T>,
}

impl<T: Scalar> SymPoly<T> {
    pub fn zero(arity: usize) -> Self {
        Self { arity, terms: BTreeMap::new() }
    }

    pub fn constant(arity: usize, c: T) -> Self {
        let mut p = Self::zero(arity);
        p.add_term(vec![0; arity], c);
        p
    }

    /// The variable `Y_{i+1}`.
    pub fn var(arity: usize, i: usize) -> Self {
        let mut exps = vec![0; arity];
        exps[i] = 1;
        let mut p = Self::zero(arity);
        p.add_term(exps, T::one());
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &T)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, exps: Vec<u32>, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(existing) => {
                *existing = existing.clone() + c;
                if existing.is_zero() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    fn check_arity(&self, other: &Self) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: other.arity });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = Self::zero(self.arity);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero(self.arity);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a.clone() * c.clone());
        }
        out
    }

    /// `p(L)` for a univariate `p` and a multivariate argument `L`.
    pub fn substitute(p: &Polynomial<T>, arg: &Self) -> Self {
        let mut out = Self::zero(arg.arity);
        for c in p.coeffs().iter().rev() {
            out = out
                .mul(arg)
                .expect("same arity")
                .add(&Self::constant(arg.arity, c.clone()))
                .expect("same arity");
        }
        out
    }

    /// Evaluates with every variable set to the given values.
    pub fn eval(&self, values: &[T]) -> Result<T> {
        if values.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: values.len() });
        }
        Ok(self.terms.iter().fold(T::zero(), |acc, (e, c)| {
            let mono = e
                .iter()
                .zip(values)
                .fold(T::one(), |m, (&a, v)| m * pow(v, a as usize));
            acc + c.clone() * mono
        }))
    }

    /// `E[p(Y_1, ..., Y_j)]` for i.i.d. `Y_i`: each monomial factors into a
    /// product of raw moments.
    pub fn expect(&self, m: &MomentCache<T>) -> Result<T> {
        self.terms.iter().try_fold(T::zero(), |acc, (e, c)| {
            let mono = e
                .iter()
                .try_fold(T::one(), |p, &a| Ok::<_, Error>(p * m.raw_moment(a as usize)?))?;
            Ok(acc + c.clone() * mono)
        })
    }
}

/// `⟨Y_1 + ... + Y_j + nλ⟩_{m-k,λ} · Π_i ⟨Y_i⟩_{l_i,λ}`, fully expanded.
pub fn build_shifted_product<T: Scalar>(
    j: usize,
    n: usize,
    order: usize,
    ls: &[usize],
    lambda: &T,
) -> Result<SymPoly<T>> {
    if ls.len() != j {
        return Err(Error::ArityMismatch { expected: j, got: ls.len() });
    }
    let total: usize = ls.iter().sum();
    if total != n {
        return Err(Error::PartsMismatch { n, sum: total });
    }
    let shift = T::from_usize(n) * lambda.clone();
    let arg = (0..j).fold(SymPoly::constant(j, shift), |acc, i| {
        acc.add(&SymPoly::var(j, i)).expect("same arity")
    });
    let mut out = SymPoly::substitute(&deg_rising_poly(order, lambda), &arg);
    for (i, &l) in ls.iter().enumerate() {
        let factor = SymPoly::substitute(&deg_rising_poly(l, lambda), &SymPoly::var(j, i));
        out = out.mul(&factor)?;
    }
    Ok(out)
}

/// Same as [`build_shifted_product`] with the order written as `m - k`.
pub fn sympoly_build_two_index_term<T: Scalar>(
    j: usize,
    n: usize,
    m: usize,
    k: usize,
    ls: &[usize],
    lambda: &T,
) -> Result<SymPoly<T>> {
    build_shifted_product(j, n, m.saturating_sub(k), ls, lambda)
}

/// Compositions of `n` into exactly `parts` positive parts.
pub fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if n == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        if n < parts {
            return;
        }
        for first in 1..=n - (parts - 1) {
            prefix.push(first);
            go(n - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, parts, &mut Vec::new(), &mut out);
    out
}

/// Right-hand side of the two-index expansion of `H_{n+m,λ}^Y(t)`:
///
/// `Σ_{j=0}^n Σ_{k=0}^m C(m,k) t^j/j! Σ_{l_1+...+l_j=n, l_i≥1}
///  C(n; l_1..l_j) E[⟨S_j+nλ⟩_{m-k,λ} Π_i ⟨Y_i⟩_{l_i,λ}] H_{k,λ}^Y(t)`.
pub fn two_index_rhs<T: Scalar>(
    moments: &MomentCache<T>,
    n: usize,
    m: usize,
    t: &T,
    lambda: &T,
) -> Result<T> {
    let bell: Vec<T> = (0..=m)
        .map(|k| Ok(prob_hetero_bell_poly(moments, k, lambda)?.eval(t)))
        .collect::<Result<_>>()?;
    let mut total = T::zero();
    for j in 0..=n {
        let t_weight = pow(t, j) / factorial::<T>(j);
        for ls in compositions(n, j) {
            let multi: T = multinomial(n, &ls)?;
            for k in 0..=m {
                let e = build_shifted_product(j, n, m - k, &ls, lambda)?.expect(moments)?;
                total = total
                    + binomial::<T>(m, k) * t_weight.clone() * multi.clone() * e * bell[k].clone();
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::Distribution;
    use crate::Rational;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn int(n: i64) -> Rational {
        r(n, 1)
    }

    #[test]
    fn build_examples() {
        let lam = r(2, 5);
        let single = build_shifted_product(1, 1, 0, &[1], &lam).unwrap();
        assert_eq!(single, SymPoly::var(1, 0));

        let empty = sympoly_build_two_index_term(0, 0, 1, 0, &[], &lam).unwrap();
        assert!(empty.is_zero());

        let two = sympoly_build_two_index_term(2, 2, 1, 0, &[1, 1], &lam).unwrap();
        let (y1, y2) = (SymPoly::var(2, 0), SymPoly::var(2, 1));
        let expected = y1
            .add(&y2)
            .unwrap()
            .add(&SymPoly::constant(2, int(2) * lam.clone()))
            .unwrap()
            .mul(&y1.mul(&y2).unwrap())
            .unwrap();
        assert_eq!(two, expected);

        assert_eq!(
            build_shifted_product(2, 2, 1, &[2], &lam),
            Err(Error::ArityMismatch { expected: 2, got: 1 })
        );
    }

    #[test]
    fn expect_examples() {
        let p = r(3, 7);
        let b = Distribution::bernoulli(p.clone()).unwrap().moments();
        assert_eq!(SymPoly::var(1, 0).expect(&b).unwrap(), p.clone());
        let pois = Distribution::poisson(int(3)).unwrap().moments();
        let y1y2 = SymPoly::var(2, 0).mul(&SymPoly::var(2, 1)).unwrap();
        assert_eq!(y1y2.expect(&pois).unwrap(), int(9));
        let lam = r(1, 4);
        let term = sympoly_build_two_index_term(2, 2, 1, 0, &[1, 1], &lam).unwrap();
        assert_eq!(
            term.expect(&b).unwrap(),
            int(2) * p.clone() * p.clone() * (int(1) + lam)
        );
    }

    #[test]
    fn compositions_enumerate() {
        assert_eq!(compositions(0, 0), vec![Vec::<usize>::new()]);
        assert!(compositions(3, 0).is_empty());
        assert!(compositions(2, 3).is_empty());
        assert_eq!(compositions(3, 2), vec![vec![1, 2], vec![2, 1]]);
        // C(n-1, j-1) compositions
        for n in 1..8 {
            for j in 1..=n {
                assert_eq!(
                    compositions(n, j).len(),
                    crate::arith::binomial_int(n - 1, j - 1).try_into().unwrap()
                );
            }
        }
    }

    #[test]
    fn rhs_examples() {
        let lam = r(1, 2);
        let b = Distribution::bernoulli(r(1, 2)).unwrap().moments();
        for m in 0..=3 {
            assert_eq!(
                two_index_rhs(&b, 0, m, &r(2, 3), &lam).unwrap(),
                prob_hetero_bell_poly(&b, m, &lam).unwrap().eval(&r(2, 3))
            );
        }
        assert_eq!(
            two_index_rhs(&b, 1, 1, &int(1), &lam).unwrap(),
            prob_hetero_bell_poly(&b, 2, &lam).unwrap().eval(&int(1))
        );
        let one = Distribution::constant(int(1)).moments();
        assert_eq!(
            two_index_rhs(&one, 2, 1, &r(1, 2), &int(0)).unwrap(),
            crate::comb::bell_poly::<Rational>(3).eval(&r(1, 2))
        );
    }

    #[test]
    fn rhs_equals_bell_polynomial() {
        let dists = [
            Distribution::constant(int(1)),
            Distribution::bernoulli(r(1, 2)).unwrap(),
            Distribution::poisson(int(1)).unwrap(),
        ];
        for d in dists {
            let m = d.moments();
            for lam in [int(0), r(1, 2), int(1)] {
                for total in 0..=4 {
                    for n in 0..=total {
                        for t in [r(1, 2), int(2)] {
                            assert_eq!(
                                two_index_rhs(&m, n, total - n, &t, &lam).unwrap(),
                                prob_hetero_bell_poly(&m, total, &lam).unwrap().eval(&t),
                                "{d} n={n} m={} lam={lam} t={t}",
                                total - n
                            );
                        }
                    }
                }
            }
        }
    }

    fn arb_sympoly(arity: usize) -> impl Strategy<Value = SymPoly<Rational>> {
        prop::collection::vec((prop::collection::vec(0u32..=4, arity), -9i64..9, 1i64..4), 0..6)
            .prop_map(move |terms| {
                let mut p = SymPoly::zero(arity);
                for (e, n, d) in terms {
                    p.add_term(e, r(n, d));
                }
                p
            })
    }

    proptest! {
        #[test]
        fn expect_is_linear(a in arb_sympoly(3), b in arb_sympoly(3), cn in -5i64..5, pn in 0i64..=6) {
            let m = Distribution::bernoulli(r(pn, 6)).unwrap().moments();
            let c = int(cn);
            let combo = a.scale(&c).add(&b).unwrap();
            prop_assert_eq!(combo.expect(&m).unwrap(), c * a.expect(&m).unwrap() + b.expect(&m).unwrap());
        }

        #[test]
        fn expect_of_constant_is_substitution(a in arb_sympoly(3), cn in -4i64..4, cd in 1i64..4) {
            let c = r(cn, cd);
            let m = Distribution::constant(c.clone()).moments();
            prop_assert_eq!(a.expect(&m).unwrap(), a.eval(&[c.clone(), c.clone(), c]).unwrap());
        }

        #[test]
        fn no_zero_terms_stored(a in arb_sympoly(2), b in arb_sympoly(2)) {
            let prod = a.mul(&b).unwrap();
            let diff = a.add(&a.scale(&int(-1))).unwrap();
            prop_assert!(diff.is_zero());
            prop_assert!(prod.terms().all(|(e, c)| e.len() == 2 && *c != int(0)));
        }
    }
}
