use core::fmt;

use alloc::vec::Vec;

use super::ioeq::{io_equation_at, IoWarning};
use crate::arith::{Matrix, Rational, Scalar};
use crate::error::{Error, Result};
use crate::graph::Cycle;
use crate::model::{build_matrix, CompartmentModel, ParameterPoint};

/// Which side of an io equation a coefficient belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    Lhs,
    /// Right-hand side polynomial of input `j`.
    Rhs(usize),
}

/// Position of one coefficient: output, side, power of λ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Slot {
    pub output: usize,
    pub side: Side,
    pub power: usize,
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::Lhs => write!(f, "y{}:lhs:λ^{}", self.output, self.power),
            Side::Rhs(j) => write!(f, "y{}:u{}:λ^{}", self.output, j, self.power),
        }
    }
}

/// Coefficients of every io equation in a fixed layout.
///
/// Per output (ascending): the lhs coefficients below its monic lead, then
/// for each input (ascending) the rhs coefficients padded to the same
/// length. Constant entries are kept so the layout depends only on the
/// model shape.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector<T> {
    pub layout: Vec<Slot>,
    pub values: Vec<T>,
}

/// The coefficient map from an already built matrix.
///
/// When the generic gcd is 1 a common factor means the point is special,
/// reported as [`Error::Degenerate`].
pub fn coefficient_map_at<T: Scalar>(
    model: &CompartmentModel,
    a: &Matrix<T>,
) -> Result<CoefficientVector<T>> {
    model.require_io()?;
    let mut layout = Vec::new();
    let mut values = Vec::new();
    for &i in model.outputs() {
        let eq = io_equation_at(model, a, i)?;
        if eq
            .warnings
            .iter()
            .any(|w| matches!(w, IoWarning::UnexpectedCommonFactor { .. }))
        {
            return Err(Error::Degenerate("unexpected common factor in io equation"));
        }
        let deg = eq.lhs.degree().expect("monic");
        for power in 0..deg {
            layout.push(Slot {
                output: i,
                side: Side::Lhs,
                power,
            });
            values.push(eq.lhs.coeff(power));
        }
        for (&j, p) in &eq.rhs {
            for power in 0..deg {
                layout.push(Slot {
                    output: i,
                    side: Side::Rhs(j),
                    power,
                });
                values.push(p.coeff(power));
            }
        }
    }
    Ok(CoefficientVector { layout, values })
}

pub fn coefficient_map(
    model: &CompartmentModel,
    point: &ParameterPoint,
) -> Result<CoefficientVector<Rational>> {
    let a: Matrix<Rational> = build_matrix(model, point, None)?;
    coefficient_map_at(model, &a)
}

/// `a^C`: product of the matrix entries along the edges of `cycle`.
pub fn cycle_monomial<T: Scalar>(a: &Matrix<T>, cycle: &Cycle) -> T {
    cycle
        .edges()
        .fold(T::one(), |acc, e| acc * a.get(e.to - 1, e.from - 1).clone())
}

/// The self-cycles `a_11, …, a_nn` followed by `a^C` for each cycle of the
/// cycle-space basis; length `|E| + 1`.
pub fn cycle_map_at<T: Scalar>(model: &CompartmentModel, a: &Matrix<T>) -> Result<Vec<T>> {
    let basis = model.graph().cycle_space_basis()?;
    let mut out: Vec<T> = (0..model.n()).map(|d| a.get(d, d).clone()).collect();
    out.extend(basis.iter().map(|c| cycle_monomial(a, c)));
    Ok(out)
}

pub fn cycle_map(model: &CompartmentModel, point: &ParameterPoint) -> Result<Vec<Rational>> {
    let a: Matrix<Rational> = build_matrix(model, point, None)?;
    cycle_map_at(model, &a)
}

/// Sum over the shortest paths from `source` to `target` of the product of
/// matrix entries along each path.
pub fn shortest_path_sum<T: Scalar>(
    model: &CompartmentModel,
    a: &Matrix<T>,
    source: usize,
    target: usize,
) -> Result<T> {
    let set = model.graph().shortest_paths(source, target)?;
    let mut total = T::zero();
    for k in 0..set.paths.len() {
        let term = set
            .path_edges(k)
            .into_iter()
            .fold(T::one(), |acc, e| acc * a.get(e.to - 1, e.from - 1).clone());
        total = total + term;
    }
    Ok(total)
}

/// For each output `i ≠ 1` (ascending) the shortest-path sum from 1 to
/// `i`, then for each input `j ≠ 1` the sum from `j` to 1.
pub fn sum_of_paths_map_at<T: Scalar>(model: &CompartmentModel, a: &Matrix<T>) -> Result<Vec<T>> {
    if !(model.inputs().contains(&1) && model.outputs().contains(&1)) {
        return Err(Error::Hypothesis("1 ∈ In ∩ Out required".into()));
    }
    let mut out = Vec::new();
    for &i in model.outputs().iter().filter(|&&i| i != 1) {
        out.push(shortest_path_sum(model, a, 1, i)?);
    }
    for &j in model.inputs().iter().filter(|&&j| j != 1) {
        out.push(shortest_path_sum(model, a, j, 1)?);
    }
    Ok(out)
}

pub fn sum_of_paths_map(model: &CompartmentModel, point: &ParameterPoint) -> Result<Vec<Rational>> {
    let a: Matrix<Rational> = build_matrix(model, point, None)?;
    sum_of_paths_map_at(model, &a)
}
