//! Complex scalars for the operator-algebra checks.
//!
//! Two interchangeable backends: `ExactComplex` (arbitrary-precision
//! rational real/imaginary parts) for identity checks that must come out
//! literally zero, and `Complex64` for interoperability with the grid
//! solver.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use std::ops::{Add, Mul, Neg, Sub};

/// Complex number with exact rational components.
pub type ExactComplex = num_complex::Complex<BigRational>;

/// Minimal scalar interface needed by the matrix identities.
///
/// Everything here is ring arithmetic plus conjugation; no division is
/// required, which is what lets `ExactComplex` and `Complex64` share the
/// verifier code.
pub trait ComplexScalar:
    Clone
    + PartialEq
    + Zero
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_ints(re: i64, im: i64) -> Self;

    /// The imaginary unit.
    fn i() -> Self {
        Self::from_ints(0, 1)
    }

    fn conj(&self) -> Self;

    /// |re| + |im| as f64, for residual reporting. Exact zero maps to 0.0.
    fn magnitude(&self) -> f64;
}

impl ComplexScalar for Complex64 {
    fn from_ints(re: i64, im: i64) -> Self {
        Complex64::new(re as f64, im as f64)
    }

    fn conj(&self) -> Self {
        num_complex::Complex::conj(self)
    }

    fn magnitude(&self) -> f64 {
        self.re.abs() + self.im.abs()
    }
}

impl ComplexScalar for ExactComplex {
    fn from_ints(re: i64, im: i64) -> Self {
        ExactComplex::new(
            BigRational::from_integer(BigInt::from(re)),
            BigRational::from_integer(BigInt::from(im)),
        )
    }

    fn conj(&self) -> Self {
        ExactComplex::new(self.re.clone(), -self.im.clone())
    }

    fn magnitude(&self) -> f64 {
        let re = self.re.to_f64().unwrap_or(f64::NAN).abs();
        let im = self.im.to_f64().unwrap_or(f64::NAN).abs();
        re + im
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_i_squared_is_minus_one() {
        let i = ExactComplex::i();
        assert_eq!(i.clone() * i, ExactComplex::from_ints(-1, 0));
    }

    #[test]
    fn exact_magnitude_of_zero() {
        assert_eq!(ExactComplex::from_ints(0, 0).magnitude(), 0.0);
        assert!(ExactComplex::from_ints(0, 0).is_zero());
    }

    #[test]
    fn float_conj() {
        let z = Complex64::from_ints(2, -3);
        assert_eq!(ComplexScalar::conj(&z), Complex64::new(2.0, 3.0));
    }
}
