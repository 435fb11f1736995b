//! Jacobian of the coefficient map from cofactors.
//!
//! Every parameter enters `M = λI - A` in a single column, so each
//! determinant the coefficient map needs is affine in each parameter and
//! its partial derivative is a signed sum of cofactors of `M`. One
//! Gauss–Jordan pass per interpolation node therefore yields the gradient
//! with respect to every parameter at once, replacing one dual-number pass
//! per parameter.
//!
//! Only valid when no common factor is divided out of the io equations;
//! otherwise the caller falls back to dual-number passes.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::arith::{coprime_certificate, int, lagrange_interpolate, Matrix, Poly, Rational};
use crate::error::Result;
use crate::model::{build_matrix, CompartmentModel, Param, ParameterPoint};

/// Nonzero entries of `∂M/∂p` as `(row, col, ±1)`, 0-based.
fn partials(p: Param) -> Vec<(usize, usize, bool)> {
    match p {
        Param::Edge(e) => vec![
            (e.to - 1, e.from - 1, false),
            (e.from - 1, e.from - 1, true),
        ],
        Param::Leak(i) => vec![(i - 1, i - 1, true)],
    }
}

/// Value and gradient of `det` of `m` with row `skip.0` and column `skip.1`
/// removed (no removal when `None`). `None` when that matrix is singular.
fn det_with_gradient(
    m: &Matrix<Rational>,
    skip: Option<(usize, usize)>,
    params: &[Vec<(usize, usize, bool)>],
) -> Result<Option<(Rational, Vec<Rational>)>> {
    let sub = match skip {
        Some((r, c)) => m.minor(r, c),
        None => m.clone(),
    };
    let Some((det, cof)) = sub.det_and_cofactors()? else {
        return Ok(None);
    };
    let grad = params
        .iter()
        .map(|entries| {
            let mut acc = Rational::zero();
            for &(r, c, positive) in entries {
                let (r, c) = match skip {
                    Some((sr, sc)) if r == sr || c == sc => continue,
                    Some((sr, sc)) => (r - usize::from(r > sr), c - usize::from(c > sc)),
                    None => (r, c),
                };
                let v = cof.get(r, c);
                if positive {
                    acc += v;
                } else {
                    acc -= v;
                }
            }
            acc
        })
        .collect();
    Ok(Some((det, grad)))
}

/// `w[power][k]`: weight of the value at node `k` in the coefficient of
/// `λ^power` of the interpolating polynomial.
fn interpolation_weights(nodes: &[Rational]) -> Result<Vec<Vec<Rational>>> {
    let n = nodes.len();
    let mut w = vec![vec![Rational::zero(); n]; n];
    for k in 0..n {
        let mut unit = vec![Rational::zero(); n];
        unit[k] = int(1);
        let p = lagrange_interpolate(nodes, &unit)?;
        for (power, row) in w.iter_mut().enumerate() {
            row[k] = p.coeff(power);
        }
    }
    Ok(w)
}

fn apply(w: &[Vec<Rational>], values: &[Rational]) -> Vec<Rational> {
    w.iter()
        .map(|row| {
            row.iter()
                .zip(values)
                .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
        })
        .collect()
}

/// Values at the nodes and per-node gradients of one determinant family.
struct Samples {
    values: Vec<Rational>,
    grads: Vec<Vec<Rational>>,
}

impl Samples {
    fn new(n: usize) -> Self {
        Self {
            values: Vec::with_capacity(n),
            grads: Vec::with_capacity(n),
        }
    }

    /// Coefficients (powers `0..n`) and their gradient rows, scaled by
    /// `sign`.
    fn interpolate(
        &self,
        w: &[Vec<Rational>],
        n_params: usize,
        negate: bool,
    ) -> (Vec<Rational>, Vec<Vec<Rational>>) {
        let sign = |x: Rational| if negate { -x } else { x };
        let coeffs = apply(w, &self.values).into_iter().map(sign).collect();
        let mut rows = vec![Vec::with_capacity(n_params); w.len()];
        for p in 0..n_params {
            let column: Vec<Rational> = self.grads.iter().map(|g| g[p].clone()).collect();
            for (row, v) in rows.iter_mut().zip(apply(w, &column)) {
                row.push(sign(v));
            }
        }
        (coeffs, rows)
    }
}

/// Exact Jacobian of the coefficient map at `point`, or `None` when the
/// shortcut does not apply there (a singular node matrix, or io equations
/// not certified free of common factors).
pub(crate) fn coefficient_jacobian(
    model: &CompartmentModel,
    point: &ParameterPoint,
) -> Result<Option<Matrix<Rational>>> {
    model.require_io()?;
    let a: Matrix<Rational> = build_matrix(model, point, None)?;
    let n = model.n();
    let params: Vec<Vec<(usize, usize, bool)>> =
        model.parameters().into_iter().map(partials).collect();
    let nodes: Vec<Rational> = (0..n as i64).map(int).collect();
    let w = interpolation_weights(&nodes)?;

    let pairs: Vec<(usize, usize)> = model
        .outputs()
        .iter()
        .flat_map(|&i| model.inputs().iter().map(move |&j| (i, j)))
        .collect();
    let mut char_samples = Samples::new(n);
    let mut minor_samples: Vec<Samples> = pairs.iter().map(|_| Samples::new(n)).collect();
    for node in &nodes {
        let mut m = a.map(|x| -x.clone());
        for d in 0..n {
            let v = m.get(d, d) + node;
            m.set(d, d, v);
        }
        let Some((det, grad)) = det_with_gradient(&m, None, &params)? else {
            return Ok(None);
        };
        // The monic λ^n term is parameter free; interpolate the rest.
        let lead = (0..n).fold(int(1), |acc, _| acc * node);
        char_samples.values.push(det - lead);
        char_samples.grads.push(grad);
        for (&(i, j), samples) in pairs.iter().zip(minor_samples.iter_mut()) {
            let Some((det, grad)) = det_with_gradient(&m, Some((j - 1, i - 1)), &params)? else {
                return Ok(None);
            };
            samples.values.push(det);
            samples.grads.push(grad);
        }
    }

    let (mut lhs, lhs_rows) = char_samples.interpolate(&w, params.len(), false);
    lhs.push(int(1));
    let lhs = Poly::new(lhs);
    let rhs: Vec<(Vec<Rational>, Vec<Vec<Rational>>)> = pairs
        .iter()
        .zip(&minor_samples)
        .map(|(&(i, j), s)| s.interpolate(&w, params.len(), (i + j) % 2 == 1))
        .collect();

    let mut jac = Matrix::with_cols(params.len());
    let mut k = 0;
    for _ in model.outputs() {
        let own = &rhs[k..k + model.inputs().len()];
        let polys: Vec<Poly<Rational>> = own.iter().map(|(c, _)| Poly::new(c.clone())).collect();
        if !coprime_certificate(&lhs, &polys) {
            return Ok(None);
        }
        for row in &lhs_rows {
            jac.push_row(row.clone());
        }
        for (_, rows) in own {
            for row in rows {
                jac.push_row(row.clone());
            }
        }
        k += model.inputs().len();
    }
    Ok(Some(jac))
}
