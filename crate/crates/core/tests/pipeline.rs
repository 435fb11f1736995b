use linident_core::coeff::{coefficient_map, io_equation};
use linident_core::graph::DirectedGraph;
use linident_core::ident::{analyze, check_icm, Verdict};
use linident_core::model::{random_point, CompartmentModel};
use linident_core::transform::{
    icm_ancestor, scaling_reparam, suggest_variants, tiered_union, SuggestOptions, TieredUnionSpec,
};

fn three_compartment(leaks: &[usize]) -> CompartmentModel {
    let g = DirectedGraph::from_pairs(3, &[(1, 2), (2, 1), (2, 3), (3, 1)]).unwrap();
    CompartmentModel::new(g, [1], [1], leaks.iter().copied()).unwrap()
}

#[test]
fn ancestor_to_identifiable_variants() {
    let icm = three_compartment(&[1, 2, 3]);
    assert!(check_icm(&icm, 0).is_icm);
    assert_eq!(
        analyze(&icm, 0, 3).unwrap().verdict,
        Verdict::Unidentifiable
    );
    let suggestions = suggest_variants(&icm, SuggestOptions::default()).unwrap();
    assert!(!suggestions.is_empty());
    for s in &suggestions {
        let r = analyze(&s.model, 0, 3).unwrap();
        assert_eq!(
            r.verdict,
            Verdict::GenericallyLocallyIdentifiable,
            "{}",
            s.description
        );
        assert_eq!(r.rank, s.rank);
    }
}

#[test]
fn io_equation_layout_matches_coefficient_map() {
    let m = three_compartment(&[1]);
    let p = random_point(&m, 3);
    let eq = io_equation(&m, &p, 1).unwrap();
    assert_eq!(eq.gcd_degree, 0);
    assert_eq!(eq.lhs.degree(), Some(3));
    assert_eq!(eq.rhs[&1].degree(), Some(2));
    let c = coefficient_map(&m, &p).unwrap();
    // Powers 0..n of each side; the top rhs slot is the constant 1 here.
    assert_eq!(c.values.len(), 6);
    assert_eq!(c.values[5], eq.rhs[&1].coeff(2));
}

#[test]
fn tiered_union_of_identifiable_tiers_is_identifiable() {
    let upper = CompartmentModel::new(
        DirectedGraph::from_pairs(3, &[(1, 2), (2, 1), (2, 3), (3, 2)]).unwrap(),
        [2],
        [2],
        [1],
    )
    .unwrap();
    let lower = CompartmentModel::new(
        DirectedGraph::from_pairs(2, &[(1, 2), (2, 1)]).unwrap(),
        [1],
        [1],
        [2],
    )
    .unwrap();
    for m in [&upper, &lower] {
        assert_eq!(
            analyze(m, 0, 3).unwrap().verdict,
            Verdict::GenericallyLocallyIdentifiable
        );
    }
    let spec = TieredUnionSpec {
        upper,
        lower,
        w1: vec![1],
        w2: vec![1],
        bridge_leaks: [1].into_iter().collect(),
    };
    let union = tiered_union(&spec).unwrap();
    assert_eq!((union.n(), union.n_params()), (5, 9));
    assert_eq!(
        analyze(&union, 0, 3).unwrap().verdict,
        Verdict::GenericallyLocallyIdentifiable
    );
}

#[test]
fn reparam_of_ancestor_is_verified() {
    let icm = icm_ancestor(&three_compartment(&[2]));
    let r = scaling_reparam(&icm, 0).unwrap();
    assert!(r.verified);
    assert!(r.negative_entries.is_empty());
}
