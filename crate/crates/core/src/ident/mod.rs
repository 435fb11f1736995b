//! Jacobian-rank identifiability tests.
//!
//! Every Jacobian is exact: one dual-number pass per parameter gives one
//! column. The rank at a point lower-bounds the generic rank, so full rank
//! at any trial point certifies generic local identifiability, while
//! deficient rank at every trial point is strong but probabilistic evidence
//! against it.

mod checks;
mod fast;

use core::fmt;

use alloc::vec::Vec;

use crate::arith::{exact_rank, Dual, Matrix, Rational, Scalar};
use crate::coeff::{
    attempt_seed, coefficient_map_at, cycle_map_at, sum_of_paths_map_at, Slot, POINT_ATTEMPTS,
};
use crate::error::{Error, Result};
use crate::model::{build_matrix, random_point, CompartmentModel, ParameterPoint};

pub use checks::{
    check_icm, eval_monomial, is_identifiable_function, observability_check, restricted_cycle_rank,
    CycleMapKind, IcmReport, Monomial,
};

/// Default number of random points per analysis.
pub const DEFAULT_TRIALS: usize = 3;

/// Which map a Jacobian is taken of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    /// Coefficients of the io equations.
    C,
    /// Self-cycles and basis monomial cycles.
    F,
    /// Shortest-path sums for extra outputs and inputs.
    G,
    /// `(c, g)`.
    CBar,
    /// `(f, g)`.
    FBar,
}

/// Evaluates the chosen map on a compartmental matrix.
pub fn evaluate_map<T: Scalar>(
    kind: MapKind,
    model: &CompartmentModel,
    a: &Matrix<T>,
) -> Result<Vec<T>> {
    Ok(match kind {
        MapKind::C => coefficient_map_at(model, a)?.values,
        MapKind::F => cycle_map_at(model, a)?,
        MapKind::G => sum_of_paths_map_at(model, a)?,
        MapKind::CBar => {
            let mut v = coefficient_map_at(model, a)?.values;
            v.extend(sum_of_paths_map_at(model, a)?);
            v
        }
        MapKind::FBar => {
            let mut v = cycle_map_at(model, a)?;
            v.extend(sum_of_paths_map_at(model, a)?);
            v
        }
    })
}

/// Exact Jacobian of `kind` at `point`: one row per map component, one
/// column per parameter in [`CompartmentModel::parameters`] order.
///
/// Coefficient-map rows come from cofactors when the point allows it and
/// from dual-number passes otherwise; both are exact and agree.
pub fn jacobian(
    kind: MapKind,
    model: &CompartmentModel,
    point: &ParameterPoint,
) -> Result<Matrix<Rational>> {
    let paths = match kind {
        MapKind::C => None,
        MapKind::CBar => Some(MapKind::G),
        _ => return generic_jacobian(kind, model, point),
    };
    let Some(mut j) = fast::coefficient_jacobian(model, point)? else {
        return generic_jacobian(kind, model, point);
    };
    if let Some(g) = paths {
        let g = generic_jacobian(g, model, point)?;
        for r in 0..g.rows() {
            j.push_row(g.row(r).to_vec());
        }
    }
    Ok(j)
}

/// [`jacobian`] by one dual-number pass per parameter.
pub(crate) fn generic_jacobian(
    kind: MapKind,
    model: &CompartmentModel,
    point: &ParameterPoint,
) -> Result<Matrix<Rational>> {
    let plain: Matrix<Rational> = build_matrix(model, point, None)?;
    let rows = evaluate_map(kind, model, &plain)?.len();
    let params = model.parameters();
    let mut j = Matrix::zeros(rows, params.len());
    for (col, &p) in params.iter().enumerate() {
        let a: Matrix<Dual> = build_matrix(model, point, Some(p))?;
        let values = evaluate_map(kind, model, &a)?;
        if values.len() != rows {
            return Err(Error::Degenerate(
                "map length changed between evaluation passes",
            ));
        }
        for (r, v) in values.into_iter().enumerate() {
            j.set(r, col, v.deriv);
        }
    }
    Ok(j)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    GenericallyLocallyIdentifiable,
    /// Rank deficient at every trial point; probabilistic.
    Unidentifiable,
    /// No trial produced a rank.
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::GenericallyLocallyIdentifiable => "GenericallyLocallyIdentifiable",
            Verdict::Unidentifiable => "Unidentifiable",
            Verdict::Inconclusive => "Inconclusive",
        })
    }
}

/// Outcome of [`analyze`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentReport {
    /// `|E| + |Leak|`.
    pub n_params: usize,
    /// Layout length of the coefficient vector.
    pub n_coeffs: usize,
    /// Coefficients with a nonzero Jacobian row at some trial point.
    pub nonconstant: usize,
    /// Best rank over all trials (0 if none succeeded).
    pub rank: usize,
    pub trials: usize,
    pub seed: u64,
    pub verdict: Verdict,
    /// Rank per trial; `None` if every point drawn for that trial was
    /// degenerate.
    pub trial_ranks: Vec<Option<usize>>,
    /// Seed of the point used per trial.
    pub trial_seeds: Vec<Option<u64>>,
    pub layout: Vec<Slot>,
}

/// Seed of trial `t`, well separated from the retry seeds of other trials.
pub fn trial_seed(seed: u64, t: usize) -> u64 {
    // splitmix64 finalizer
    let mut z = seed.wrapping_add((t as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A Jacobian at the first non-degenerate point drawn from `seed`.
pub(crate) fn jacobian_at_regular_point(
    kind: MapKind,
    model: &CompartmentModel,
    seed: u64,
) -> Result<Option<(Matrix<Rational>, ParameterPoint, u64)>> {
    for k in 0..POINT_ATTEMPTS {
        let s = attempt_seed(seed, k);
        let point = random_point(model, s);
        match jacobian(kind, model, &point) {
            Ok(j) => return Ok(Some((j, point, s))),
            Err(e) if e.is_degenerate() => {}
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// Best exact rank of `J(kind)` over `trials` seeded points.
pub fn map_rank(
    kind: MapKind,
    model: &CompartmentModel,
    seed: u64,
    trials: usize,
) -> Result<Option<usize>> {
    let mut best = None;
    for t in 0..trials {
        if let Some((j, _, _)) = jacobian_at_regular_point(kind, model, trial_seed(seed, t))? {
            let r = exact_rank(&j);
            best = Some(best.map_or(r, |b: usize| b.max(r)));
        }
    }
    Ok(best)
}

/// Rank test of the coefficient map at `trials` seeded random points.
pub fn analyze(model: &CompartmentModel, seed: u64, trials: usize) -> Result<IdentReport> {
    model.require_io()?;
    let n_params = model.n_params();
    let mut trial_ranks = Vec::with_capacity(trials);
    let mut trial_seeds = Vec::with_capacity(trials);
    let mut layout = None;
    let mut nonconstant = 0;
    for t in 0..trials {
        match jacobian_at_regular_point(MapKind::C, model, trial_seed(seed, t))? {
            Some((j, point, s)) => {
                if layout.is_none() {
                    layout = Some(crate::coeff::coefficient_map(model, &point)?.layout);
                }
                let nz = (0..j.rows())
                    .filter(|&r| j.row(r).iter().any(|x| !x.vanishes()))
                    .count();
                nonconstant = nonconstant.max(nz);
                trial_ranks.push(Some(exact_rank(&j)));
                trial_seeds.push(Some(s));
            }
            None => {
                trial_ranks.push(None);
                trial_seeds.push(None);
            }
        }
    }
    let rank = trial_ranks.iter().flatten().copied().max();
    let verdict = match rank {
        None => Verdict::Inconclusive,
        Some(r) if r == n_params => Verdict::GenericallyLocallyIdentifiable,
        Some(_) => Verdict::Unidentifiable,
    };
    let layout = layout.unwrap_or_default();
    Ok(IdentReport {
        n_params,
        n_coeffs: layout.len(),
        nonconstant,
        rank: rank.unwrap_or(0),
        trials,
        seed,
        verdict,
        trial_ranks,
        trial_seeds,
        layout,
    })
}
