//! The floating-point instantiations track the exact one.

use hetbell::arith::{binomial, deg_rising_factorial, factorial};
use hetbell::comb::{bell_poly, stirling2};
use hetbell::hetero::{hetero_stirling_row, prob_hetero_row};
use hetbell::{Distribution, Rational, Route, Scalar};

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn f64_hetero_rows_match_rationals() {
    for (num, den) in [(0, 1), (1, 3), (1, 1), (5, 2)] {
        let exact = Rational::new(num.into(), den.into());
        let approx = num as f64 / den as f64;
        for n in 0..=12 {
            let q = hetero_stirling_row(n, &exact);
            let f = hetero_stirling_row(n, &approx);
            for (k, (a, b)) in q.iter().zip(&f).enumerate() {
                // the alternating sum cancels terms of size Σ_j C(k,j) |⟨j⟩_{n,λ}| / k!
                let scale: f64 = (0..=k)
                    .map(|j| binomial::<f64>(k, j) * deg_rising_factorial(&(j as f64), n, &approx).abs())
                    .sum::<f64>()
                    / factorial::<f64>(k);
                let err = (a.to_f64_lossy() - b).abs();
                assert!(err <= 64.0 * f64::EPSILON * scale.max(1.0), "n={n} k={k} λ={approx}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn f64_probabilistic_rows_match_rationals() {
    let exact = Distribution::bernoulli(Rational::new(1.into(), 3.into())).unwrap().moments();
    let approx = Distribution::bernoulli(1.0f64 / 3.0).unwrap().moments();
    for n in 0..=10 {
        for route in Route::ALL {
            let q = prob_hetero_row(&exact, n, &Rational::from_i64(1), route).unwrap();
            let f = prob_hetero_row(&approx, n, &1.0f64, route).unwrap();
            for (a, b) in q.iter().zip(&f) {
                assert!(close(a.to_f64_lossy(), *b, 1e-9), "n={n} {route}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn f32_small_values_are_exact() {
    assert_eq!(stirling2::<f32>(6, 3), 90.0);
    assert_eq!(bell_poly::<f32>(4).coeffs(), [0.0, 1.0, 7.0, 6.0, 1.0]);
    assert_eq!(hetero_stirling_row::<f32>(2, &0.5), vec![0.0, 1.5, 1.0]);
}
