//! Exact scalar and linear-algebra substrate.
//!
//! Everything here is exact: rationals are arbitrary precision and never
//! rounded, dual numbers carry a single exact derivative slot, and matrix
//! routines are fraction-free wherever the ring allows it.

mod dual;
mod matrix;
mod poly;

use core::fmt::Debug;
use core::ops::{Add, Mul, Neg, Sub};

use alloc::string::String;
use num_bigint::BigInt;
use num_traits::{One, Zero};

pub use dual::Dual;
pub use matrix::{exact_rank, Matrix};
pub use poly::{coprime_certificate, lagrange_interpolate, poly_gcd_monic, Poly};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("gcd undefined: both polynomials are zero")]
    GcdUndefined,
    #[error("interpolation nodes must be pairwise distinct (node {0} repeated)")]
    RepeatedNode(String),
    #[error("{nodes} interpolation nodes but {values} values")]
    NodeValueMismatch { nodes: usize, values: usize },
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix dimensions {left:?} and {right:?} are incompatible")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("division by an element with zero value part")]
    NotInvertible,
    #[error("malformed rational literal {0:?}")]
    BadRational(String),
}

/// A commutative ring element the analyzer can compute with.
///
/// Implemented for [`Rational`] (a field) and [`Dual`] (value plus one
/// derivative slot). Division is only ever performed by elements whose value
/// part is nonzero, which makes both rings behave like a field along every
/// path the algorithms take.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: Rational) -> Self;

    /// A model parameter with the given value. `active` marks the parameter
    /// being differentiated in the current pass; rings without a derivative
    /// slot ignore it.
    fn parameter(value: Rational, active: bool) -> Self;

    /// The plain rational part.
    fn value(&self) -> &Rational;

    /// True only for the exact zero of the ring (all parts zero).
    fn vanishes(&self) -> bool;

    fn scale(&self, r: &Rational) -> Self;

    /// Multiplicative inverse, defined iff the value part is nonzero.
    fn inv(&self) -> Option<Self>;

    fn from_int(i: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(i)))
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_rational(r: Rational) -> Self {
        r
    }

    fn parameter(value: Rational, _active: bool) -> Self {
        value
    }

    fn value(&self) -> &Rational {
        self
    }

    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }

    fn scale(&self, r: &Rational) -> Self {
        self * r
    }

    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Integer as a rational.
pub fn int(i: i64) -> Rational {
    Rational::from_integer(BigInt::from(i))
}

/// Parses `"p"` or `"p/q"` (optional leading minus, q nonzero).
pub fn parse_rational(s: &str) -> Result<Rational, ArithError> {
    let bad = || ArithError::BadRational(String::from(s));
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Formats as `"p/q"`, always including the denominator.
pub fn format_rational(r: &Rational) -> String {
    alloc::format!("{}/{}", r.numer(), r.denom())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(
            parse_rational("-6/4").unwrap(),
            Rational::new((-3).into(), 2.into())
        );
        assert_eq!(format_rational(&int(5)), "5/1");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    proptest! {
        #[test]
        fn field_axioms(a in small_rational(), b in small_rational(), c in small_rational()) {
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            prop_assert_eq!(&a + &b, &b + &a);
            if !Zero::is_zero(&a) {
                prop_assert_eq!(&a * Scalar::inv(&a).unwrap(), int(1));
            }
        }

        #[test]
        fn lowest_terms(n in -1000i64..1000, d in 1i64..1000) {
            let r = Rational::new(n.into(), d.into());
            prop_assert!(r.denom() > &BigInt::zero());
            prop_assert!(num_integer::Integer::gcd(r.numer(), r.denom()) == BigInt::one() || Zero::is_zero(r.numer()));
        }
    }
}
