use core::fmt;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{char_poly, minor_det_poly};
use crate::arith::{coprime_certificate, poly_gcd_monic, Matrix, Poly, Rational, Scalar};
use crate::error::{Error, Result};
use crate::model::{build_matrix, random_point, CompartmentModel, ParameterPoint};

/// Attempts made by the seeded drivers: the first point plus five retries.
pub const POINT_ATTEMPTS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IoWarning {
    /// A common divisor of this degree was divided out of both sides.
    CommonFactorRemoved { degree: usize },
    /// The model is strongly connected with a leak, so the generic gcd is 1;
    /// a positive-degree gcd here means the point is special.
    UnexpectedCommonFactor { degree: usize },
}

impl fmt::Display for IoWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IoWarning::CommonFactorRemoved { degree } => {
                write!(f, "common factor of degree {degree} removed from both sides")
            }
            IoWarning::UnexpectedCommonFactor { degree } => write!(
                f,
                "common factor of degree {degree} at a strongly connected model with a leak; point is degenerate"
            ),
        }
    }
}

/// Input-output equation for one output `i`:
/// `lhs(∂) y_i = Σ_j rhs[j](∂) u_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct IoEquation<T: Scalar> {
    pub output: usize,
    /// `det(λI - A) / g_i`, monic.
    pub lhs: Poly<T>,
    /// `(-1)^(i+j) det(A_ji) / g_i` per input `j`.
    pub rhs: BTreeMap<usize, Poly<T>>,
    pub gcd_degree: usize,
    pub warnings: Vec<IoWarning>,
}

/// Whether the generic gcd is known to be 1: strongly connected with a leak.
pub fn gcd_free_expected(model: &CompartmentModel) -> bool {
    !model.leaks().is_empty() && model.graph().is_strongly_connected()
}

/// The io equation for `output` from an already built matrix.
pub fn io_equation_at<T: Scalar>(
    model: &CompartmentModel,
    a: &Matrix<T>,
    output: usize,
) -> Result<IoEquation<T>> {
    model.require_io()?;
    if !model.outputs().contains(&output) {
        return Err(Error::NotAnOutput(output));
    }
    let lhs = char_poly(a)?;
    let mut rhs = BTreeMap::new();
    for &j in model.inputs() {
        let mut p = minor_det_poly(a, j, output)?;
        if (output + j) % 2 == 1 {
            p = Poly::zero().sub(&p);
        }
        rhs.insert(j, p);
    }
    // The value parts decide the gcd degree; skip the Euclidean sequence
    // when a modular certificate already shows they are coprime.
    let values = |p: &Poly<T>| Poly::new(p.coeffs().iter().map(|c| c.value().clone()).collect());
    let rhs_values: Vec<Poly<Rational>> = rhs.values().map(values).collect();
    let g = if coprime_certificate(&values(&lhs), &rhs_values) {
        Poly::constant(T::one())
    } else {
        let mut g = lhs.clone();
        for p in rhs.values() {
            g = poly_gcd_monic(&g, p)?;
        }
        g
    };
    let gcd_degree = g.degree().expect("gcd of a monic polynomial is nonzero");
    let mut warnings = Vec::new();
    let (lhs, rhs) = if gcd_degree == 0 {
        (lhs, rhs)
    } else {
        warnings.push(IoWarning::CommonFactorRemoved { degree: gcd_degree });
        if gcd_free_expected(model) {
            warnings.push(IoWarning::UnexpectedCommonFactor { degree: gcd_degree });
        }
        let lhs = lhs.exact_div(&g)?;
        let rhs = rhs
            .into_iter()
            .map(|(j, p)| p.exact_div(&g).map(|q| (j, q)))
            .collect::<core::result::Result<_, _>>()?;
        (lhs, rhs)
    };
    Ok(IoEquation {
        output,
        lhs,
        rhs,
        gcd_degree,
        warnings,
    })
}

/// The io equation for `output` at `point`, with exact rationals.
pub fn io_equation(
    model: &CompartmentModel,
    point: &ParameterPoint,
    output: usize,
) -> Result<IoEquation<Rational>> {
    let a: Matrix<Rational> = build_matrix(model, point, None)?;
    io_equation_at(model, &a, output)
}

/// Seed for attempt `k` derived from a base seed.
pub fn attempt_seed(seed: u64, k: usize) -> u64 {
    seed.wrapping_add((k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Draws random points until one is regular for every output's io
/// equation: no arithmetic degeneracy and, when the generic gcd is 1, no
/// common factor. Returns the point and the seed that produced it.
pub fn regular_point(model: &CompartmentModel, seed: u64) -> Result<(ParameterPoint, u64)> {
    model.require_io()?;
    for k in 0..POINT_ATTEMPTS {
        let s = attempt_seed(seed, k);
        let point = random_point(model, s);
        match point_is_regular(model, &point) {
            Ok(true) => return Ok((point, s)),
            Ok(false) => {}
            Err(e) if e.is_degenerate() => {}
            Err(e) => return Err(e),
        }
    }
    Err(Error::NoRegularPoint(POINT_ATTEMPTS))
}

fn point_is_regular(model: &CompartmentModel, point: &ParameterPoint) -> Result<bool> {
    let a: Matrix<Rational> = build_matrix(model, point, None)?;
    for &i in model.outputs() {
        let eq = io_equation_at(model, &a, i)?;
        if eq
            .warnings
            .iter()
            .any(|w| matches!(w, IoWarning::UnexpectedCommonFactor { .. }))
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// [`io_equation`] at a seeded regular point (up to five retries).
pub fn io_equation_seeded(
    model: &CompartmentModel,
    seed: u64,
    output: usize,
) -> Result<(IoEquation<Rational>, ParameterPoint)> {
    if !model.outputs().contains(&output) {
        return Err(Error::NotAnOutput(output));
    }
    let (point, _) = regular_point(model, seed)?;
    let eq = io_equation(model, &point, output)?;
    Ok((eq, point))
}
