//! Exact computation of classical, degenerate and probabilistic heterogeneous
//! Stirling numbers and Bell polynomials.
//!
//! Everything is generic over a [`Scalar`] coefficient type. The exact
//! instantiation over arbitrary-precision rationals is what the identity
//! verifier and the command-line tool use; the aliases below name it.

pub mod arith;
pub mod comb;
pub mod error;
pub mod hetero;
pub mod iid;
pub mod moments;
pub mod poly;
pub mod scalar;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use hetero::Route;
pub use moments::{Distribution, MomentCache};
pub use poly::Polynomial;
pub use scalar::Scalar;

/// Exact rational scalar, always in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;
/// Dense univariate polynomial with exact rational coefficients.
pub type RationalPoly = Polynomial<Rational>;
/// Distribution with exact rational parameters.
pub type RationalDist = Distribution<Rational>;
/// Moment cache over exact rationals.
pub type RationalMoments = MomentCache<Rational>;
/// Multivariate i.i.d. polynomial over exact rationals.
pub type RationalSymPoly = iid::SymPoly<Rational>;

/// Double-precision instantiation, for quick approximate work.
pub type F64Poly = Polynomial<f64>;
pub type F64Dist = Distribution<f64>;
