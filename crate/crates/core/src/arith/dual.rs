use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{Rational, Scalar};

/// Dual number `value + deriv·ε` with `ε² = 0`.
///
/// Carries the derivative with respect to one designated parameter, so a full
/// Jacobian takes one evaluation pass per parameter.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Dual {
    pub value: Rational,
    pub deriv: Rational,
}

impl Dual {
    pub fn new(value: Rational, deriv: Rational) -> Self {
        Self { value, deriv }
    }

    pub fn constant(value: Rational) -> Self {
        Self {
            value,
            deriv: Zero::zero(),
        }
    }

    pub fn variable(value: Rational) -> Self {
        Self {
            value,
            deriv: One::one(),
        }
    }

    /// `self / rhs`, defined iff `rhs.value != 0`.
    pub fn checked_div(&self, rhs: &Dual) -> Option<Dual> {
        rhs.inv().map(|r| self.clone() * r)
    }
}

impl fmt::Debug for Dual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}ε", self.value, self.deriv)
    }
}

impl fmt::Display for Dual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, rhs: Dual) -> Dual {
        Dual {
            value: self.value + rhs.value,
            deriv: self.deriv + rhs.deriv,
        }
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, rhs: Dual) -> Dual {
        Dual {
            value: self.value - rhs.value,
            deriv: self.deriv - rhs.deriv,
        }
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, rhs: Dual) -> Dual {
        let deriv = &self.deriv * &rhs.value + &self.value * &rhs.deriv;
        Dual {
            value: self.value * rhs.value,
            deriv,
        }
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual {
            value: -self.value,
            deriv: -self.deriv,
        }
    }
}

impl Scalar for Dual {
    fn zero() -> Self {
        Dual::constant(Zero::zero())
    }

    fn one() -> Self {
        Dual::constant(One::one())
    }

    fn from_rational(r: Rational) -> Self {
        Dual::constant(r)
    }

    fn parameter(value: Rational, active: bool) -> Self {
        if active {
            Dual::variable(value)
        } else {
            Dual::constant(value)
        }
    }

    fn value(&self) -> &Rational {
        &self.value
    }

    fn vanishes(&self) -> bool {
        self.value.is_zero() && self.deriv.is_zero()
    }

    fn scale(&self, r: &Rational) -> Self {
        Dual {
            value: &self.value * r,
            deriv: &self.deriv * r,
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.value.is_zero() {
            return None;
        }
        let v = self.value.recip();
        let deriv = -(&self.deriv * &v * &v);
        Some(Dual { value: v, deriv })
    }
}
