use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, ToPrimitive};

/// Coefficient type shared by every routine in the crate.
///
/// Exact arithmetic is only guaranteed for [`BigRational`]; the float
/// implementations exist for cheap approximate evaluation.
pub trait Scalar:
    Num + Clone + Debug + Display + PartialOrd + std::ops::Neg<Output = Self> + Send + Sync + 'static
{
    fn from_bigint(n: &BigInt) -> Self;

    /// Nearest `f64`; may be infinite for out-of-range values.
    fn to_f64_lossy(&self) -> f64;

    fn from_i64(n: i64) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }

    fn from_usize(n: usize) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }

    fn abs_value(&self) -> Self {
        if *self < Self::zero() { -self.clone() } else { self.clone() }
    }
}

impl Scalar for BigRational {
    fn from_bigint(n: &BigInt) -> Self {
        Ratio::from_integer(n.clone())
    }

    fn to_f64_lossy(&self) -> f64 {
        // Ratio::to_f64 rounds correctly even when numerator and denominator
        // individually overflow f64.
        self.to_f64().unwrap_or_else(|| {
            if *self.numer() < BigInt::from(0) { f64::NEG_INFINITY } else { f64::INFINITY }
        })
    }
}

impl Scalar for f64 {
    fn from_bigint(n: &BigInt) -> Self {
        n.to_f64().unwrap_or(f64::NAN)
    }

    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn from_bigint(n: &BigInt) -> Self {
        n.to_f32().unwrap_or(f32::NAN)
    }

    fn to_f64_lossy(&self) -> f64 {
        f64::from(*self)
    }
}

/// `base^exp` with `0^0 = 1`.
pub fn pow<T: Scalar>(base: &T, exp: usize) -> T {
    num_traits::pow::pow(base.clone(), exp)
}

/// `(-1)^n` as a scalar.
pub fn sign<T: Scalar>(n: usize) -> T {
    if n.is_multiple_of(2) { T::one() } else { -T::one() }
}
