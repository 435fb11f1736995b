use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, Edge};
use crate::model::CompartmentModel;

/// Two submodels joined by one-way bridge edges `w1[l] → w2[l]`.
///
/// Each submodel is given as it is analyzed standalone: the upper model
/// leaks at every `w1` vertex (the bridge outflow acts as a leak there) and
/// the lower model has an input at every `w2` vertex (the bridge inflow
/// acts as an input there). `w1` and `w2` use each submodel's own
/// numbering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TieredUnionSpec {
    pub upper: CompartmentModel,
    pub lower: CompartmentModel,
    pub w1: Vec<usize>,
    pub w2: Vec<usize>,
    /// `w1` vertices that keep a genuine leak in the union besides their
    /// bridge edge.
    pub bridge_leaks: BTreeSet<usize>,
}

/// The union model: lower vertices shifted by `|V_upper|`, bridge edges
/// added, standalone bridge leaks and bridge inputs removed.
pub fn tiered_union(spec: &TieredUnionSpec) -> Result<CompartmentModel> {
    let bad = |msg: String| Err(Error::TieredUnion(msg));
    let (up, low) = (&spec.upper, &spec.lower);
    if spec.w1.is_empty() {
        return bad(String::from("bridge required"));
    }
    if spec.w1.len() != spec.w2.len() {
        return bad(format!(
            "|W1| = {} but |W2| = {}",
            spec.w1.len(),
            spec.w2.len()
        ));
    }
    for &v in &spec.w1 {
        if v == 0 || v > up.n() {
            return bad(format!("W1 vertex {v} out of range 1..={}", up.n()));
        }
        if !up.leaks().contains(&v) {
            return bad(format!("upper model must leak at bridge source {v}"));
        }
    }
    for &v in &spec.w2 {
        if v == 0 || v > low.n() {
            return bad(format!("W2 vertex {v} out of range 1..={}", low.n()));
        }
        if !low.inputs().contains(&v) {
            return bad(format!("lower model must take input at bridge target {v}"));
        }
    }
    if let Some(v) = spec.bridge_leaks.iter().find(|v| !spec.w1.contains(v)) {
        return bad(format!("bridge leak {v} is not a bridge source"));
    }
    let shift = up.n();
    let w1: BTreeSet<usize> = spec.w1.iter().copied().collect();
    let w2: BTreeSet<usize> = spec.w2.iter().copied().collect();
    let mut edges: Vec<Edge> = up.graph().edges().to_vec();
    edges.extend(
        low.graph()
            .edges()
            .iter()
            .map(|e| Edge::new(e.from + shift, e.to + shift)),
    );
    edges.extend(
        spec.w1
            .iter()
            .zip(&spec.w2)
            .map(|(&a, &b)| Edge::new(a, b + shift)),
    );
    let graph = DirectedGraph::new(shift + low.n(), edges)?;
    let inputs = up.inputs().iter().copied().chain(
        low.inputs()
            .iter()
            .filter(|v| !w2.contains(v))
            .map(|v| v + shift),
    );
    let outputs = up
        .outputs()
        .iter()
        .copied()
        .chain(low.outputs().iter().map(|v| v + shift));
    let leaks = up
        .leaks()
        .iter()
        .copied()
        .filter(|v| !w1.contains(v))
        .chain(spec.bridge_leaks.iter().copied())
        .chain(low.leaks().iter().map(|v| v + shift));
    Ok(CompartmentModel::new(graph, inputs, outputs, leaks)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ident::{analyze, Verdict, DEFAULT_TRIALS};

    fn upper() -> CompartmentModel {
        let g = DirectedGraph::from_pairs(3, &[(1, 2), (2, 1), (2, 3), (3, 2)]).unwrap();
        CompartmentModel::new(g, [2], [2], [1]).unwrap()
    }

    fn lower() -> CompartmentModel {
        let g = DirectedGraph::from_pairs(2, &[(1, 2), (2, 1)]).unwrap();
        CompartmentModel::new(g, [1], [1], [2]).unwrap()
    }

    fn spec() -> TieredUnionSpec {
        TieredUnionSpec {
            upper: upper(),
            lower: lower(),
            w1: alloc::vec![1],
            w2: alloc::vec![1],
            bridge_leaks: BTreeSet::from([1]),
        }
    }

    #[test]
    fn five_compartment_union() {
        let m = tiered_union(&spec()).unwrap();
        assert_eq!(m.n(), 5);
        assert_eq!(m.inputs(), &BTreeSet::from([2]));
        assert_eq!(m.outputs(), &BTreeSet::from([2, 4]));
        assert_eq!(m.leaks(), &BTreeSet::from([1, 5]));
        assert!(m.graph().has_edge(1, 4));
        assert_eq!(m.n_params(), 9);
        for sub in [upper(), lower()] {
            assert_eq!(
                analyze(&sub, 1, DEFAULT_TRIALS).unwrap().verdict,
                Verdict::GenericallyLocallyIdentifiable
            );
        }
        let r = analyze(&m, 1, DEFAULT_TRIALS).unwrap();
        assert_eq!(
            (r.rank, r.verdict),
            (9, Verdict::GenericallyLocallyIdentifiable)
        );
    }

    #[test]
    fn rejects_bad_specs() {
        let mut s = spec();
        s.w1.clear();
        s.w2.clear();
        assert_eq!(
            tiered_union(&s),
            Err(Error::TieredUnion(String::from("bridge required")))
        );
        let mut s = spec();
        s.w1 = alloc::vec![2];
        s.bridge_leaks.clear();
        assert!(tiered_union(&s).is_err());
        let mut s = spec();
        s.w2 = alloc::vec![2];
        assert!(tiered_union(&s).is_err());
        let mut s = spec();
        s.bridge_leaks = BTreeSet::from([3]);
        assert!(tiered_union(&s).is_err());
    }

    #[test]
    fn three_tier_chain() {
        // Each tier: the three-compartment single-leak graph, bridged from
        // its leak compartment into the next tier's input compartment.
        let tier = |inputs: &[usize], leaks: &[usize]| {
            let g = DirectedGraph::from_pairs(3, &[(1, 2), (2, 1), (2, 3), (3, 1)]).unwrap();
            CompartmentModel::new(g, inputs.iter().copied(), [1], leaks.iter().copied()).unwrap()
        };
        let first = tiered_union(&TieredUnionSpec {
            upper: tier(&[1], &[3]),
            lower: tier(&[1], &[3]),
            w1: alloc::vec![3],
            w2: alloc::vec![1],
            bridge_leaks: BTreeSet::new(),
        })
        .unwrap();
        let third_upper = first
            .with_sets(
                first.inputs().iter().copied(),
                first.outputs().iter().copied(),
                [6],
            )
            .unwrap();
        let chain = tiered_union(&TieredUnionSpec {
            upper: third_upper,
            lower: tier(&[1], &[3]),
            w1: alloc::vec![6],
            w2: alloc::vec![1],
            bridge_leaks: BTreeSet::new(),
        })
        .unwrap();
        assert_eq!(chain.n(), 9);
        assert_eq!(chain.leaks(), &BTreeSet::from([9]));
        for m in [&tier(&[1], &[3]), &first, &chain] {
            let r = analyze(m, 2, DEFAULT_TRIALS).unwrap();
            assert_eq!(r.verdict, Verdict::GenericallyLocallyIdentifiable, "{m:?}");
        }
    }
}
