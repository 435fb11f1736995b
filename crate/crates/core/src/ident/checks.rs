use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{jacobian_at_regular_point, map_rank, trial_seed, MapKind, DEFAULT_TRIALS};
use crate::arith::{exact_rank, Dual, Matrix, Rational, Scalar};
use crate::error::{Error, Result};
use crate::model::{build_matrix, random_point, CompartmentModel, Symbol};

/// Formal monomial: symbol → integer exponent. Empty is the constant 1.
pub type Monomial = BTreeMap<Symbol, i64>;

/// Value of `mono` on a compartmental matrix.
pub fn eval_monomial<T: Scalar>(mono: &Monomial, a: &Matrix<T>) -> Result<T> {
    let mut acc = T::one();
    for (sym, &e) in mono {
        let base = sym.read(a);
        let base = if e < 0 {
            base.inv()
                .ok_or(Error::Degenerate("monomial base vanishes at the point"))?
        } else {
            base
        };
        for _ in 0..e.unsigned_abs() {
            acc = acc * base.clone();
        }
    }
    Ok(acc)
}

/// Whether the monomial is locally identifiable from the coefficient map:
/// its gradient lies in the row span of `J(c)`.
///
/// Tested at one seeded point and, if the test fails there, at a second.
pub fn is_identifiable_function(
    model: &CompartmentModel,
    mono: &Monomial,
    seed: u64,
) -> Result<bool> {
    model.require_io()?;
    for sym in mono.keys() {
        let ok = match *sym {
            Symbol::Param(p) => model.has_param(p),
            Symbol::Diag(i) => (1..=model.n()).contains(&i),
        };
        if !ok {
            return Err(Error::Hypothesis(format!(
                "{sym} is not a quantity of the model"
            )));
        }
    }
    for t in 0..2 {
        let Some((j, point, _)) =
            jacobian_at_regular_point(MapKind::C, model, trial_seed(seed, t))?
        else {
            continue;
        };
        let mut grad = Vec::with_capacity(j.cols());
        for p in model.parameters() {
            let a: Matrix<Dual> = build_matrix(model, &point, Some(p))?;
            grad.push(eval_monomial(mono, &a)?.deriv);
        }
        let base = exact_rank(&j);
        let mut stacked = j;
        stacked.push_row(grad);
        if exact_rank(&stacked) == base {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Result of [`check_icm`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IcmReport {
    pub is_icm: bool,
    /// One entry per failed condition.
    pub reasons: Vec<String>,
    /// Best rank of `J(c)`, when computable.
    pub rank: Option<usize>,
    /// `|E| + 1`.
    pub target_rank: usize,
    /// Ordering from vertex 1 with every prefix strongly connected.
    pub isc_ordering: Option<Vec<usize>>,
    /// `|E| = 2|V| - 2` and an ordering exists: sufficient for the rank
    /// condition.
    pub isc_shortcut: bool,
}

/// Checks the four identifiable cycle model conditions: strongly
/// connected, `In = Out = {1}`, `Leak = V`, and `rank J(c) = |E| + 1`.
pub fn check_icm(model: &CompartmentModel, seed: u64) -> IcmReport {
    let g = model.graph();
    let n = model.n();
    let mut reasons = Vec::new();
    if !g.is_strongly_connected() {
        reasons.push(String::from("G is not strongly connected"));
    }
    let only_one = |s: &alloc::collections::BTreeSet<usize>| s.len() == 1 && s.contains(&1);
    if !only_one(model.inputs()) {
        reasons.push(String::from("In ≠ {1}"));
    }
    if !only_one(model.outputs()) {
        reasons.push(String::from("Out ≠ {1}"));
    }
    if model.leaks().len() != n {
        reasons.push(String::from("Leak ≠ V"));
    }
    let target_rank = g.edge_count() + 1;
    let rank = match map_rank(MapKind::C, model, seed, DEFAULT_TRIALS) {
        Ok(Some(r)) => {
            if r != target_rank {
                reasons.push(format!("dim image c = {r} ≠ |E|+1 = {target_rank}"));
            }
            Some(r)
        }
        Ok(None) => {
            reasons.push(String::from(
                "rank of J(c) unavailable: every point degenerate",
            ));
            None
        }
        Err(e) => {
            reasons.push(format!("rank of J(c) unavailable: {e}"));
            None
        }
    };
    let isc_ordering = g.inductively_strongly_connected(1).ok().flatten();
    let isc_shortcut = isc_ordering.is_some() && g.edge_count() + 2 == 2 * n;
    IcmReport {
        is_icm: reasons.is_empty(),
        reasons,
        rank,
        target_rank,
        isc_ordering,
        isc_shortcut,
    }
}

/// Cycle map variants evaluated on a model's own parameter space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleMapKind {
    F,
    FBar,
}

/// Exact rank of `J(f)` or `J(f̄)` over the model's parameters, where
/// non-leak diagonals are tied to their outflows.
pub fn restricted_cycle_rank(
    model: &CompartmentModel,
    kind: CycleMapKind,
    seed: u64,
) -> Result<usize> {
    if !model.graph().is_strongly_connected() {
        return Err(Error::Hypothesis(String::from(
            "graph not strongly connected",
        )));
    }
    let map = match kind {
        CycleMapKind::F => MapKind::F,
        CycleMapKind::FBar => {
            if !(model.inputs().contains(&1) && model.outputs().contains(&1)) {
                return Err(Error::Hypothesis(String::from("1 ∈ In ∩ Out violated")));
            }
            if !model
                .leaks()
                .iter()
                .all(|v| model.inputs().contains(v) || model.outputs().contains(v))
            {
                return Err(Error::Hypothesis(String::from("Leak ⊆ In ∪ Out violated")));
            }
            MapKind::FBar
        }
    };
    let mut best = 0;
    for t in 0..DEFAULT_TRIALS {
        let point = random_point(model, trial_seed(seed, t));
        best = best.max(exact_rank(&super::jacobian(map, model, &point)?));
    }
    Ok(best)
}

/// Whether the rows `a Ã^(k-1)`, `k = 1..m-1`, are independent, where `a`
/// is row `output` of `A` without its diagonal entry and `Ã` is `A` with
/// row and column `output` removed.
pub fn observability_check(model: &CompartmentModel, output: usize, seed: u64) -> Result<bool> {
    if !model.graph().is_strongly_connected() {
        return Err(Error::Hypothesis(String::from(
            "graph not strongly connected",
        )));
    }
    if !model.outputs().contains(&output) {
        return Err(Error::NotAnOutput(output));
    }
    let m = model.n();
    if m == 1 {
        return Ok(true);
    }
    for t in 0..DEFAULT_TRIALS {
        let point = random_point(model, trial_seed(seed, t));
        let a: Matrix<Rational> = build_matrix(model, &point, None)?;
        let sub = a.minor(output - 1, output - 1);
        let mut row: Vec<Rational> = (0..m)
            .filter(|&c| c != output - 1)
            .map(|c| a.get(output - 1, c).clone())
            .collect();
        let mut krylov = Matrix::with_cols(m - 1);
        for _ in 0..m - 1 {
            krylov.push_row(row.clone());
            let as_matrix = Matrix::from_rows(alloc::vec![row]);
            row = as_matrix.mul(&sub)?.row(0).to_vec();
        }
        if exact_rank(&krylov) == m - 1 {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DirectedGraph;
    use crate::model::tests::three_cycle;
    use alloc::vec;

    fn endosomal(leaks: &[usize], outputs: &[usize]) -> CompartmentModel {
        let g = DirectedGraph::from_pairs(5, &[(1, 2), (2, 3), (3, 4), (4, 5), (4, 1), (5, 1)])
            .unwrap();
        CompartmentModel::new(g, [1], outputs.iter().copied(), leaks.iter().copied()).unwrap()
    }

    #[test]
    fn identifiable_functions() {
        let m = three_cycle(&[1, 2, 3], &[1]);
        let cyc: Monomial = [(Symbol::edge(2, 1), 1), (Symbol::edge(1, 2), 1)]
            .into_iter()
            .collect();
        assert!(is_identifiable_function(&m, &cyc, 1).unwrap());
        let single: Monomial = [(Symbol::edge(2, 1), 1)].into_iter().collect();
        assert!(!is_identifiable_function(&m, &single, 1).unwrap());
        assert!(is_identifiable_function(&m, &Monomial::new(), 1).unwrap());
        let diag: Monomial = [(Symbol::Diag(2), 1)].into_iter().collect();
        assert!(is_identifiable_function(&m, &diag, 1).unwrap());
        // Ratio of the two cycle monomials: a32 a13 / a12.
        let ratio: Monomial = [
            (Symbol::edge(2, 3), 1),
            (Symbol::edge(3, 1), 1),
            (Symbol::edge(2, 1), -1),
        ]
        .into_iter()
        .collect();
        assert!(is_identifiable_function(&m, &ratio, 1).unwrap());
        let bad: Monomial = [(Symbol::edge(3, 2), 1)].into_iter().collect();
        assert!(is_identifiable_function(&m, &bad, 1).is_err());
    }

    #[test]
    fn icm_examples() {
        let r = check_icm(&three_cycle(&[1, 2, 3], &[1]), 1);
        assert!(r.is_icm, "{:?}", r.reasons);
        assert_eq!(r.isc_ordering, Some(vec![1, 2, 3]));
        assert!(r.isc_shortcut);

        let r = check_icm(&endosomal(&[1, 2, 3, 4, 5], &[1]), 1);
        assert!(r.is_icm, "{:?}", r.reasons);
        assert_eq!((r.rank, r.target_rank), (Some(7), 7));
        assert_eq!(r.isc_ordering, None);

        let r = check_icm(&three_cycle(&[1], &[1]), 1);
        assert!(!r.is_icm);
        assert_eq!(r.reasons, vec![String::from("Leak ≠ V")]);
    }

    #[test]
    fn restricted_ranks() {
        assert_eq!(
            restricted_cycle_rank(&three_cycle(&[1], &[1]), CycleMapKind::F, 1).unwrap(),
            5
        );
        assert_eq!(
            restricted_cycle_rank(&three_cycle(&[1, 2], &[1, 2]), CycleMapKind::FBar, 1).unwrap(),
            6
        );
        assert_eq!(
            restricted_cycle_rank(&three_cycle(&[1, 2, 3], &[1]), CycleMapKind::F, 1).unwrap(),
            5
        );
        assert!(matches!(
            restricted_cycle_rank(&three_cycle(&[1, 3], &[1, 2]), CycleMapKind::FBar, 1),
            Err(Error::Hypothesis(_))
        ));
        let open = CompartmentModel::new(
            DirectedGraph::from_pairs(2, &[(1, 2)]).unwrap(),
            [1],
            [1],
            [2],
        )
        .unwrap();
        assert!(restricted_cycle_rank(&open, CycleMapKind::F, 1).is_err());
    }

    #[test]
    fn observability() {
        assert!(observability_check(&three_cycle(&[1, 2, 3], &[1]), 1, 1).unwrap());
        let upper = CompartmentModel::new(
            DirectedGraph::from_pairs(3, &[(1, 2), (2, 1), (2, 3), (3, 2)]).unwrap(),
            [2],
            [2],
            [1],
        )
        .unwrap();
        assert!(observability_check(&upper, 2, 1).unwrap());
        let two = CompartmentModel::new(
            DirectedGraph::from_pairs(2, &[(1, 2), (2, 1)]).unwrap(),
            [1],
            [1, 2],
            [],
        )
        .unwrap();
        assert!(observability_check(&two, 2, 1).unwrap());
        assert!(observability_check(&two, 1, 1).unwrap());
        let open = CompartmentModel::new(
            DirectedGraph::from_pairs(2, &[(1, 2)]).unwrap(),
            [1],
            [1],
            [],
        )
        .unwrap();
        assert!(observability_check(&open, 1, 1).is_err());
    }

    #[test]
    fn icm_cycles_are_identifiable() {
        let m = three_cycle(&[1, 2, 3], &[1]);
        for c in m.graph().simple_cycles() {
            let mono: Monomial = c.edges().map(|e| (Symbol::edge(e.from, e.to), 1)).collect();
            assert!(is_identifiable_function(&m, &mono, 3).unwrap());
        }
    }
}
