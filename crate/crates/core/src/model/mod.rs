//! The model quadruple `(G, In, Out, Leak)`, parameter points, and the
//! compartmental matrix.

mod diagnostics;

use core::fmt;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{int, Matrix, Rational, Scalar};
use crate::graph::{DirectedGraph, Edge};

pub use diagnostics::{validate, Diagnostic};

/// Upper bound (inclusive) for sampled parameter values.
pub const SAMPLE_MAX: u32 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("{role} compartment {vertex} out of range 1..={n}")]
    VertexOutOfRange {
        role: &'static str,
        vertex: usize,
        n: usize,
    },
    #[error("no value for parameter {0}")]
    MissingParameter(Param),
    #[error("parameter {0} is not part of the model")]
    UnexpectedParameter(Param),
    #[error("rate {0} must be positive")]
    NonPositiveRate(Param),
    #[error("no inputs: analysis unavailable")]
    NoInputs,
    #[error("no outputs: analysis unavailable")]
    NoOutputs,
}

/// A model parameter: the exchange rate on an edge, or a leak rate.
///
/// `Edge(j → i)` is `a_ij`; `Leak(i)` is `a_0i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Param {
    Edge(Edge),
    Leak(usize),
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Edge(e) => write!(f, "a_{}_{}", e.to, e.from),
            Param::Leak(i) => write!(f, "a_0_{i}"),
        }
    }
}

/// A formal quantity readable off the compartmental matrix: a parameter,
/// or a diagonal entry `a_ii`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Param(Param),
    Diag(usize),
}

impl Symbol {
    pub fn edge(from: usize, to: usize) -> Self {
        Symbol::Param(Param::Edge(Edge::new(from, to)))
    }

    pub fn leak(i: usize) -> Self {
        Symbol::Param(Param::Leak(i))
    }

    /// Value of the symbol given the compartmental matrix.
    pub fn read<T: Scalar>(&self, a: &Matrix<T>) -> T {
        match *self {
            Symbol::Param(Param::Edge(e)) => a.get(e.to - 1, e.from - 1).clone(),
            Symbol::Diag(i) => a.get(i - 1, i - 1).clone(),
            // Column i sums to -a_0i.
            Symbol::Param(Param::Leak(i)) => {
                -(0..a.rows()).fold(T::zero(), |acc, r| acc + a.get(r, i - 1).clone())
            }
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Param(p) => p.fmt(f),
            Symbol::Diag(i) => write!(f, "a_{i}_{i}"),
        }
    }
}

/// A linear compartment model `(G, In, Out, Leak)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompartmentModel {
    graph: DirectedGraph,
    inputs: BTreeSet<usize>,
    outputs: BTreeSet<usize>,
    leaks: BTreeSet<usize>,
}

impl CompartmentModel {
    /// Inputs and outputs may be empty here; analysis operations reject that.
    pub fn new(
        graph: DirectedGraph,
        inputs: impl IntoIterator<Item = usize>,
        outputs: impl IntoIterator<Item = usize>,
        leaks: impl IntoIterator<Item = usize>,
    ) -> Result<Self, ModelError> {
        let n = graph.n();
        let collect = |role: &'static str, it: &mut dyn Iterator<Item = usize>| {
            let mut set = BTreeSet::new();
            for vertex in it {
                if vertex == 0 || vertex > n {
                    return Err(ModelError::VertexOutOfRange { role, vertex, n });
                }
                set.insert(vertex);
            }
            Ok(set)
        };
        Ok(Self {
            inputs: collect("input", &mut inputs.into_iter())?,
            outputs: collect("output", &mut outputs.into_iter())?,
            leaks: collect("leak", &mut leaks.into_iter())?,
            graph,
        })
    }

    pub fn graph(&self) -> &DirectedGraph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn inputs(&self) -> &BTreeSet<usize> {
        &self.inputs
    }

    pub fn outputs(&self) -> &BTreeSet<usize> {
        &self.outputs
    }

    pub fn leaks(&self) -> &BTreeSet<usize> {
        &self.leaks
    }

    /// Parameters in canonical order: edges in graph order, then leaks by
    /// vertex.
    pub fn parameters(&self) -> Vec<Param> {
        self.graph
            .edges()
            .iter()
            .map(|&e| Param::Edge(e))
            .chain(self.leaks.iter().map(|&i| Param::Leak(i)))
            .collect()
    }

    pub fn n_params(&self) -> usize {
        self.graph.edge_count() + self.leaks.len()
    }

    pub fn has_param(&self, p: Param) -> bool {
        match p {
            Param::Edge(e) => self.graph.has_edge(e.from, e.to),
            Param::Leak(i) => self.leaks.contains(&i),
        }
    }

    /// Errors unless both In and Out are nonempty.
    pub fn require_io(&self) -> Result<(), ModelError> {
        if self.inputs.is_empty() {
            return Err(ModelError::NoInputs);
        }
        if self.outputs.is_empty() {
            return Err(ModelError::NoOutputs);
        }
        Ok(())
    }

    /// Same graph with the given input, output and leak sets.
    pub fn with_sets(
        &self,
        inputs: impl IntoIterator<Item = usize>,
        outputs: impl IntoIterator<Item = usize>,
        leaks: impl IntoIterator<Item = usize>,
    ) -> Result<Self, ModelError> {
        Self::new(self.graph.clone(), inputs, outputs, leaks)
    }
}

/// Exact rates for every edge and leak of a model.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParameterPoint {
    pub edge_rates: BTreeMap<Edge, Rational>,
    pub leak_rates: BTreeMap<usize, Rational>,
}

impl ParameterPoint {
    /// Values in [`CompartmentModel::parameters`] order.
    pub fn from_values(
        model: &CompartmentModel,
        values: impl IntoIterator<Item = Rational>,
    ) -> Self {
        let mut point = Self::default();
        for (p, v) in model.parameters().into_iter().zip(values) {
            point.set(p, v);
        }
        point
    }

    pub fn get(&self, p: Param) -> Option<&Rational> {
        match p {
            Param::Edge(e) => self.edge_rates.get(&e),
            Param::Leak(i) => self.leak_rates.get(&i),
        }
    }

    pub fn set(&mut self, p: Param, v: Rational) {
        match p {
            Param::Edge(e) => self.edge_rates.insert(e, v),
            Param::Leak(i) => self.leak_rates.insert(i, v),
        };
    }

    /// Values in [`CompartmentModel::parameters`] order.
    pub fn values(&self, model: &CompartmentModel) -> Result<Vec<Rational>, ModelError> {
        model
            .parameters()
            .into_iter()
            .map(|p| self.get(p).cloned().ok_or(ModelError::MissingParameter(p)))
            .collect()
    }

    /// Keys match the model exactly and every rate is positive.
    pub fn check(&self, model: &CompartmentModel) -> Result<(), ModelError> {
        for p in model.parameters() {
            match self.get(p) {
                None => return Err(ModelError::MissingParameter(p)),
                Some(v) if !v.is_positive() => return Err(ModelError::NonPositiveRate(p)),
                Some(_) => {}
            }
        }
        let keys = self
            .edge_rates
            .keys()
            .map(|&e| Param::Edge(e))
            .chain(self.leak_rates.keys().map(|&i| Param::Leak(i)));
        for p in keys {
            if !model.has_param(p) {
                return Err(ModelError::UnexpectedParameter(p));
            }
        }
        Ok(())
    }
}

/// Deterministic point with pairwise distinct integer rates in
/// `[1, SAMPLE_MAX]`.
pub fn random_point(model: &CompartmentModel, seed: u64) -> ParameterPoint {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut used = BTreeSet::new();
    let values: Vec<Rational> = (0..model.n_params())
        .map(|_| loop {
            let v: u32 = rng.gen_range(1..=SAMPLE_MAX);
            if used.insert(v) {
                break int(i64::from(v));
            }
        })
        .collect();
    ParameterPoint::from_values(model, values)
}

/// The compartmental matrix `A(G)` at `point`.
///
/// Off-diagonal `(i, j)` is `a_ij` when `j → i` is an edge; the diagonal
/// `(i, i)` is `-a_0i [i ∈ Leak] - Σ_{i→k} a_ki`. With `deriv_target` set,
/// that parameter is seeded as the active variable.
pub fn build_matrix<T: Scalar>(
    model: &CompartmentModel,
    point: &ParameterPoint,
    deriv_target: Option<Param>,
) -> Result<Matrix<T>, ModelError> {
    point.check(model)?;
    if let Some(p) = deriv_target {
        if !model.has_param(p) {
            return Err(ModelError::UnexpectedParameter(p));
        }
    }
    Ok(assemble(model, |p| {
        let v = point.get(p).expect("checked").clone();
        T::parameter(v, deriv_target == Some(p))
    }))
}

/// Assembles `A(G)` from a per-parameter value function.
pub fn assemble<T: Scalar>(
    model: &CompartmentModel,
    mut value: impl FnMut(Param) -> T,
) -> Matrix<T> {
    let n = model.n();
    let mut a = Matrix::zeros(n, n);
    for &e in model.graph().edges() {
        let v = value(Param::Edge(e));
        a.set(e.to - 1, e.from - 1, v.clone());
        let d = a.get(e.from - 1, e.from - 1).clone() - v;
        a.set(e.from - 1, e.from - 1, d);
    }
    for &i in model.leaks() {
        let d = a.get(i - 1, i - 1).clone() - value(Param::Leak(i));
        a.set(i - 1, i - 1, d);
    }
    a
}

/// Display name for a parameter list, used by reports.
pub fn param_names(params: &[Param]) -> Vec<String> {
    params.iter().map(|p| alloc::format!("{p}")).collect()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::arith::Dual;
    use alloc::vec;
    use proptest::prelude::*;

    pub(crate) fn three_cycle(leaks: &[usize], outputs: &[usize]) -> CompartmentModel {
        let g = DirectedGraph::from_pairs(3, &[(1, 2), (2, 1), (2, 3), (3, 1)]).unwrap();
        CompartmentModel::new(g, [1], outputs.iter().copied(), leaks.iter().copied()).unwrap()
    }

    fn single_leak_point(model: &CompartmentModel) -> ParameterPoint {
        // a01=1, a21=2, a12=3, a13=5, a32=7
        let mut p = ParameterPoint::default();
        p.set(Param::Leak(1), int(1));
        p.set(Param::Edge(Edge::new(1, 2)), int(2));
        p.set(Param::Edge(Edge::new(2, 1)), int(3));
        p.set(Param::Edge(Edge::new(3, 1)), int(5));
        p.set(Param::Edge(Edge::new(2, 3)), int(7));
        p.check(model).unwrap();
        p
    }

    #[test]
    fn matrix_examples() {
        let single_leak = three_cycle(&[1], &[1]);
        let a: Matrix<Rational> =
            build_matrix(&single_leak, &single_leak_point(&single_leak), None).unwrap();
        // Row 1: -(a01 + a21), a12, a13; (3,3) = -a13.
        assert_eq!(a.row(0), &[int(-3), int(3), int(5)]);
        assert_eq!(a.get(2, 2), &int(-5));
        assert_eq!(a.det().unwrap(), int(-50));

        let all_leaks = three_cycle(&[1, 2, 3], &[1]);
        let point = random_point(&all_leaks, 7);
        let a: Matrix<Rational> = build_matrix(&all_leaks, &point, None).unwrap();
        let get = |p| point.get(p).unwrap().clone();
        let a01 = get(Param::Leak(1));
        let a21 = get(Param::Edge(Edge::new(1, 2)));
        assert_eq!(a.get(0, 0), &-(a01 + a21));
        assert_eq!(a.get(0, 1), &get(Param::Edge(Edge::new(2, 1))));
        assert_eq!(a.get(0, 2), &get(Param::Edge(Edge::new(3, 1))));

        let single =
            CompartmentModel::new(DirectedGraph::from_pairs(1, &[]).unwrap(), [1], [1], [1])
                .unwrap();
        let p = ParameterPoint::from_values(&single, [int(4)]);
        let a: Matrix<Rational> = build_matrix(&single, &p, None).unwrap();
        assert_eq!(a.row(0), &[int(-4)]);
    }

    #[test]
    fn mismatched_points_rejected() {
        let single_leak = three_cycle(&[1], &[1]);
        let mut p = single_leak_point(&single_leak);
        p.set(Param::Leak(3), int(1));
        assert_eq!(
            p.check(&single_leak),
            Err(ModelError::UnexpectedParameter(Param::Leak(3)))
        );
        let mut p = single_leak_point(&single_leak);
        p.leak_rates.clear();
        assert_eq!(
            build_matrix::<Rational>(&single_leak, &p, None),
            Err(ModelError::MissingParameter(Param::Leak(1)))
        );
        let mut p = single_leak_point(&single_leak);
        p.set(Param::Leak(1), int(0));
        assert_eq!(
            p.check(&single_leak),
            Err(ModelError::NonPositiveRate(Param::Leak(1)))
        );
        assert!(matches!(
            CompartmentModel::new(DirectedGraph::from_pairs(2, &[]).unwrap(), [3], [1], []),
            Err(ModelError::VertexOutOfRange { role: "input", .. })
        ));
    }

    #[test]
    fn random_points_are_deterministic() {
        let all_leaks = three_cycle(&[1, 2, 3], &[1]);
        assert_eq!(random_point(&all_leaks, 11), random_point(&all_leaks, 11));
        let differing = (0..100u64)
            .filter(|&s| random_point(&all_leaks, 2 * s) != random_point(&all_leaks, 2 * s + 1))
            .count();
        assert_eq!(differing, 100);
        let no_leaks = three_cycle(&[], &[1]);
        assert!(random_point(&no_leaks, 3).leak_rates.is_empty());
        let values = random_point(&all_leaks, 5).values(&all_leaks).unwrap();
        let distinct: BTreeSet<_> = values.iter().collect();
        assert_eq!(distinct.len(), values.len());
        assert!(values
            .iter()
            .all(|v| *v >= int(1) && *v <= int(i64::from(SAMPLE_MAX))));
    }

    #[test]
    fn symbols_read_parameters_back() {
        let all_leaks = three_cycle(&[1, 2, 3], &[1]);
        let point = random_point(&all_leaks, 1);
        let a: Matrix<Rational> = build_matrix(&all_leaks, &point, None).unwrap();
        for p in all_leaks.parameters() {
            assert_eq!(&Symbol::Param(p).read(&a), point.get(p).unwrap());
        }
    }

    pub(crate) fn arb_model() -> impl Strategy<Value = CompartmentModel> {
        (1usize..=5).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (1..=n)
                .flat_map(|a| (1..=n).filter(move |&b| b != a).map(move |b| (a, b)))
                .collect();
            let m = pairs.len();
            (
                proptest::sample::subsequence(pairs, 0..=m),
                proptest::collection::btree_set(1..=n, 0..=n),
            )
                .prop_map(move |(e, leaks)| {
                    let g = DirectedGraph::from_pairs(n, &e).unwrap();
                    CompartmentModel::new(g, [1], [1], leaks).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn column_sums_are_negative_leaks(model in arb_model(), seed in any::<u64>()) {
            let point = random_point(&model, seed);
            let a: Matrix<Rational> = build_matrix(&model, &point, None).unwrap();
            for i in 1..=model.n() {
                let sum = a.column(i - 1).into_iter().fold(int(0), |acc, x| acc + x);
                let expected = point.leak_rates.get(&i).map_or(int(0), |v| -v.clone());
                prop_assert_eq!(sum, expected);
            }
        }

        #[test]
        fn dual_entries_match_divided_difference(model in arb_model(), seed in any::<u64>(), h in 1i64..50) {
            let point = random_point(&model, seed);
            let base: Matrix<Rational> = build_matrix(&model, &point, None).unwrap();
            let h = int(h);
            for p in model.parameters() {
                let dual: Matrix<Dual> = build_matrix(&model, &point, Some(p)).unwrap();
                let mut shifted = point.clone();
                shifted.set(p, point.get(p).unwrap() + &h);
                let moved: Matrix<Rational> = build_matrix(&model, &shifted, None).unwrap();
                for r in 0..model.n() {
                    for c in 0..model.n() {
                        let dd = (moved.get(r, c) - base.get(r, c)) / &h;
                        prop_assert_eq!(&dual.get(r, c).deriv, &dd);
                        prop_assert_eq!(&dual.get(r, c).value, base.get(r, c));
                    }
                }
            }
        }

        #[test]
        fn det_nonzero_when_strongly_connected_with_leak(model in arb_model(), seed in any::<u64>()) {
            prop_assume!(model.graph().is_strongly_connected() && !model.leaks().is_empty());
            let a: Matrix<Rational> = build_matrix(&model, &random_point(&model, seed), None).unwrap();
            prop_assert!(!num_traits::Zero::is_zero(&a.det().unwrap()));
        }
    }

    #[test]
    fn det_nonzero_fleet() {
        // Hamiltonian cycle plus chords, one leak: strongly connected by
        // construction.
        let mut checked = 0;
        for n in 2..=6usize {
            for extra in 0..4usize {
                let mut pairs: Vec<(usize, usize)> = (1..=n).map(|i| (i, i % n + 1)).collect();
                for k in 0..extra {
                    let (a, b) = (1 + (k * 2) % n, 1 + (k * 3 + 2) % n);
                    if a != b && !pairs.contains(&(a, b)) {
                        pairs.push((a, b));
                    }
                }
                let g = DirectedGraph::from_pairs(n, &pairs).unwrap();
                let model = CompartmentModel::new(g, [1], [1], vec![n]).unwrap();
                let a: Matrix<Rational> =
                    build_matrix(&model, &random_point(&model, n as u64), None).unwrap();
                assert!(!num_traits::Zero::is_zero(&a.det().unwrap()));
                checked += 1;
            }
        }
        assert!(checked >= 20);
    }
}
