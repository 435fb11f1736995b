use core::fmt;

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{ArithError, Rational, Scalar};

/// Univariate polynomial in λ, coefficients in ascending degree.
///
/// Normalized so the highest stored coefficient is nonzero; the zero
/// polynomial has no coefficients.
#[derive(Clone, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Scalar::vanishes) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The monomial λ.
    pub fn x() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of λ^k (zero past the degree).
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| *c == T::one())
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, r: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * r.clone()).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    /// Divides by the leading coefficient, which must be invertible.
    pub fn monic(&self) -> Result<Self, ArithError> {
        match self.leading() {
            None => Ok(Self::zero()),
            Some(lead) => {
                let inv = lead.inv().ok_or(ArithError::NotInvertible)?;
                let mut p = self.scale(&inv);
                // Exact by construction; pin the representation.
                if let Some(last) = p.coeffs.last_mut() {
                    *last = T::one();
                }
                Ok(p)
            }
        }
    }

    /// Euclidean division. The divisor's leading coefficient must be
    /// invertible.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self), ArithError> {
        let lead_inv = divisor
            .leading()
            .and_then(Scalar::inv)
            .ok_or(ArithError::NotInvertible)?;
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = rem[k + dd].clone() * lead_inv.clone();
            if !q.vanishes() {
                for (i, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] = rem[k + i].clone() - q.clone() * d.clone();
                }
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self, ArithError> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(ArithError::NotInvertible)
        }
    }
}

/// Monic gcd by the Euclidean algorithm; `gcd(p, 0) = monic(p)`.
///
/// Over [`Dual`](super::Dual) coefficients the remainder sequence is the
/// first-order expansion of the generic one. A remainder whose leading
/// coefficient has zero value but nonzero derivative means the evaluation
/// point is degenerate for this pair, reported as
/// [`ArithError::NotInvertible`].
pub fn poly_gcd_monic<T: Scalar>(p: &Poly<T>, q: &Poly<T>) -> Result<Poly<T>, ArithError> {
    if p.is_zero() && q.is_zero() {
        return Err(ArithError::GcdUndefined);
    }
    let (mut a, mut b) = (p.clone(), q.clone());
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b)?;
        a = b;
        b = r;
    }
    a.monic()
}

/// Mersenne prime `2^61 - 1` used for modular coprimality certificates.
const PRIME: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(PRIME)) as u64
}

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b);
        }
        b = mul_mod(b, b);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64) -> u64 {
    pow_mod(a, PRIME - 2)
}

fn reduce_mod(r: &Rational) -> Option<u64> {
    let p = BigInt::from(PRIME);
    let num = r.numer().mod_floor(&p).to_u64()?;
    let den = r.denom().mod_floor(&p).to_u64()?;
    (den != 0).then(|| mul_mod(num, inv_mod(den)))
}

/// Remainder of `a` by `b` over `Z/p`; `b` is trimmed and nonzero.
fn rem_mod(mut a: Vec<u64>, b: &[u64]) -> Vec<u64> {
    let lead_inv = inv_mod(*b.last().expect("nonzero divisor"));
    while a.len() >= b.len() {
        let top = *a.last().expect("nonempty");
        if top != 0 {
            let f = mul_mod(top, lead_inv);
            let shift = a.len() - b.len();
            for (k, &c) in b.iter().enumerate() {
                let sub = mul_mod(f, c);
                a[shift + k] = (a[shift + k] + PRIME - sub) % PRIME;
            }
        }
        a.pop();
    }
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Certifies that monic `first` and `rest` have no common factor over the
/// rationals, by a gcd computation modulo a large prime.
///
/// Sound in one direction: a common factor over Q stays a factor of
/// positive degree mod p (the monic `first` pins its leading coefficient
/// to a unit). `false` means "not certified", not "has a common factor".
pub fn coprime_certificate(first: &Poly<Rational>, rest: &[Poly<Rational>]) -> bool {
    if !first.is_monic() {
        return false;
    }
    let reduce = |p: &Poly<Rational>| -> Option<Vec<u64>> {
        let mut v: Vec<u64> = p.coeffs().iter().map(reduce_mod).collect::<Option<_>>()?;
        while v.last() == Some(&0) {
            v.pop();
        }
        Some(v)
    };
    let Some(mut g) = reduce(first) else {
        return false;
    };
    for q in rest {
        let Some(mut b) = reduce(q) else { return false };
        while !b.is_empty() {
            let r = rem_mod(g, &b);
            g = b;
            b = r;
        }
        if g.len() == 1 {
            return true;
        }
    }
    g.len() == 1
}

/// The unique polynomial of degree `< nodes.len()` through every
/// `(node, value)` pair, via Newton divided differences.
///
/// Nodes are plain rationals, so only divisions by node differences occur.
pub fn lagrange_interpolate<T: Scalar>(
    nodes: &[Rational],
    values: &[T],
) -> Result<Poly<T>, ArithError> {
    if nodes.len() != values.len() {
        return Err(ArithError::NodeValueMismatch {
            nodes: nodes.len(),
            values: values.len(),
        });
    }
    for (i, a) in nodes.iter().enumerate() {
        if nodes[..i].contains(a) {
            return Err(ArithError::RepeatedNode(a.to_string()));
        }
    }
    let n = nodes.len();
    let mut dd: Vec<T> = values.to_vec();
    for level in 1..n {
        for k in (level..n).rev() {
            let gap = (&nodes[k] - &nodes[k - level]).recip();
            dd[k] = (dd[k].clone() - dd[k - 1].clone()).scale(&gap);
        }
    }
    // Horner on the Newton form.
    let mut acc = Poly::zero();
    for k in (0..n).rev() {
        let shift = Poly::new(vec![T::from_rational(-nodes[k].clone()), T::one()]);
        acc = acc.mul(&shift).add(&Poly::constant(dd[k].clone()));
    }
    Ok(acc)
}

impl<T: Scalar + fmt::Display> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.vanishes() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})λ")?,
                _ => write!(f, "({c})λ^{k}")?,
            }
        }
        Ok(())
    }
}

impl<T: Scalar> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, Dual};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Poly<Rational> {
        Poly::new(c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn coprime_certificate_examples() {
        // λ(λ+5) and λ+2 are coprime; λ²-1 and λ-1 share λ-1.
        assert!(coprime_certificate(&p(&[0, 5, 1]), &[p(&[2, 1])]));
        assert!(!coprime_certificate(&p(&[-1, 0, 1]), &[p(&[-1, 1])]));
        // Zero partners leave the first polynomial as the gcd.
        assert!(!coprime_certificate(&p(&[0, 1]), &[Poly::zero()]));
        assert!(coprime_certificate(&p(&[1]), &[]));
        // Not monic: no certificate.
        assert!(!coprime_certificate(&p(&[1, 2]), &[p(&[1])]));
        // Rational coefficients reduce through the denominator inverse.
        let half = Poly::new(vec![Rational::new(1.into(), 2.into()), int(1)]);
        assert!(!coprime_certificate(&half, &[half.scale(&int(3))]));
    }

    #[test]
    fn gcd_examples() {
        // λ²+λ and λ
        assert_eq!(
            poly_gcd_monic(&p(&[0, 1, 1]), &p(&[0, 1])).unwrap(),
            p(&[0, 1])
        );
        // λ²−1 and λ−1
        assert_eq!(
            poly_gcd_monic(&p(&[-1, 0, 1]), &p(&[-1, 1])).unwrap(),
            p(&[-1, 1])
        );
        // λ(λ+5) and λ+2 are coprime
        assert_eq!(
            poly_gcd_monic(&p(&[0, 5, 1]), &p(&[2, 1])).unwrap(),
            p(&[1])
        );
        // gcd(p, 0) = monic(p)
        assert_eq!(
            poly_gcd_monic(&p(&[4, 2]), &Poly::zero()).unwrap(),
            p(&[2, 1])
        );
        assert_eq!(
            poly_gcd_monic::<Rational>(&Poly::zero(), &Poly::zero()),
            Err(ArithError::GcdUndefined)
        );
    }

    #[test]
    fn interpolation_examples() {
        assert_eq!(
            lagrange_interpolate(&[int(0), int(1)], &[int(1), int(2)]).unwrap(),
            p(&[1, 1])
        );
        assert_eq!(
            lagrange_interpolate(&[int(0), int(1), int(2)], &[int(0), int(1), int(4)]).unwrap(),
            p(&[0, 0, 1])
        );
        assert_eq!(
            lagrange_interpolate(&[int(0), int(1)], &[int(7), int(7)]).unwrap(),
            p(&[7])
        );
        assert!(matches!(
            lagrange_interpolate(&[int(1), int(1)], &[int(0), int(0)]),
            Err(ArithError::RepeatedNode(_))
        ));
    }

    #[test]
    fn interpolation_over_duals() {
        // (λ + t)² at t = 3 with dt = 1: coefficients (9 + 6ε, 6 + 2ε, 1)
        let nodes = [int(0), int(1), int(2)];
        let t = Dual::variable(int(3));
        let vals: Vec<Dual> = nodes
            .iter()
            .map(|x| {
                let s = Dual::constant(x.clone()) + t.clone();
                s.clone() * s
            })
            .collect();
        let poly = lagrange_interpolate(&nodes, &vals).unwrap();
        assert_eq!(poly.coeff(0), Dual::new(int(9), int(6)));
        assert_eq!(poly.coeff(1), Dual::new(int(6), int(2)));
        assert_eq!(poly.coeff(2), Dual::one());
    }

    #[test]
    fn dual_gcd_tracks_structural_factor() {
        // (λ + t)(λ + 2) and (λ + t)(λ + 5) share λ + t; the derivative of the
        // monic gcd's constant term is dt = 1.
        let t = Dual::variable(int(3));
        let lin = |c: Dual| Poly::new(vec![c, Dual::one()]);
        let g = lin(t.clone());
        let a = g.mul(&lin(Dual::from_int(2)));
        let b = g.mul(&lin(Dual::from_int(5)));
        assert_eq!(poly_gcd_monic(&a, &b).unwrap(), g);
    }

    #[test]
    fn div_rem_roundtrip() {
        let a = p(&[3, -2, 0, 5, 1]);
        let b = p(&[1, 2, 3]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap() < 2);
    }

    proptest! {
        #[test]
        fn interpolation_reproduces_polynomials(coeffs in proptest::collection::vec(-30i64..30, 0..7), shift in -5i64..5) {
            let poly = p(&coeffs);
            let n = coeffs.len().max(1);
            let nodes: Vec<Rational> = (0..n as i64).map(|k| int(k + shift)).collect();
            let values: Vec<Rational> = nodes.iter().map(|x| poly.eval(x)).collect();
            prop_assert_eq!(lagrange_interpolate(&nodes, &values).unwrap(), poly);
        }

        #[test]
        fn gcd_divides_both(a in proptest::collection::vec(-9i64..9, 1..5), b in proptest::collection::vec(-9i64..9, 1..5), c in proptest::collection::vec(-9i64..9, 1..4)) {
            let common = p(&c);
            prop_assume!(!common.is_zero());
            let pa = p(&a).mul(&common);
            let pb = p(&b).mul(&common);
            prop_assume!(!pa.is_zero() || !pb.is_zero());
            let g = poly_gcd_monic(&pa, &pb).unwrap();
            prop_assert!(g.is_monic());
            prop_assert!(pa.div_rem(&g).unwrap().1.is_zero());
            prop_assert!(pb.div_rem(&g).unwrap().1.is_zero());
            prop_assert!(g.degree().unwrap() >= common.degree().unwrap());
        }
    }

    proptest! {
        #[test]
        fn certificate_implies_trivial_gcd(
            a in proptest::collection::vec(-6i64..7, 1..5),
            b in proptest::collection::vec(-6i64..7, 1..5),
            shared in proptest::collection::vec(-3i64..4, 0..3),
        ) {
            let mut f = p(&shared);
            if f.is_zero() {
                f = p(&[1]);
            }
            let f = f.monic().unwrap();
            let mut a = a;
            a.push(1);
            let lhs = p(&a).mul(&f);
            let rhs = p(&b).mul(&f);
            prop_assume!(!rhs.is_zero());
            let g = poly_gcd_monic(&lhs, &rhs).unwrap();
            prop_assert_eq!(coprime_certificate(&lhs, &[rhs]), g.degree() == Some(0));
        }
    }
}
