use core::fmt;

use alloc::vec::Vec;

use super::CompartmentModel;

/// One finding of [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    NoInputs,
    NoOutputs,
    StronglyConnected(bool),
    /// Every compartment leaks.
    LeakEverywhere,
    SingleLeak(usize),
    Leaks(Vec<usize>),
    NoLeaks,
    /// In = Out = {1}.
    SoleIoAtOne,
    /// Whether 1 ∈ In ∩ Out.
    OneInInputsAndOutputs(bool),
    /// Whether Leak ⊆ In ∪ Out.
    LeaksCoveredByIo(bool),
    /// `|E|` against `2|V| - 2`.
    EdgeCount {
        edges: usize,
        two_n_minus_two: usize,
    },
    /// Inductively strongly connected ordering from vertex 1, if any.
    Isc(Option<Vec<usize>>),
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::NoInputs => write!(f, "no inputs: analysis unavailable"),
            Diagnostic::NoOutputs => write!(f, "no outputs: analysis unavailable"),
            Diagnostic::StronglyConnected(true) => write!(f, "strongly connected"),
            Diagnostic::StronglyConnected(false) => write!(f, "not strongly connected"),
            Diagnostic::LeakEverywhere => write!(f, "Leak = V"),
            Diagnostic::SingleLeak(v) => write!(f, "single leak at {v}"),
            Diagnostic::Leaks(v) => write!(f, "{} leaks at {}", v.len(), join(v)),
            Diagnostic::NoLeaks => write!(f, "no leaks"),
            Diagnostic::SoleIoAtOne => write!(f, "In = Out = {{1}}"),
            Diagnostic::OneInInputsAndOutputs(b) => {
                write!(f, "1 {} In ∩ Out", if *b { "∈" } else { "∉" })
            }
            Diagnostic::LeaksCoveredByIo(b) => {
                write!(f, "Leak {} In ∪ Out", if *b { "⊆" } else { "⊄" })
            }
            Diagnostic::EdgeCount {
                edges,
                two_n_minus_two,
            } if edges == two_n_minus_two => {
                write!(f, "|E| = 2|V|-2 = {edges}")
            }
            Diagnostic::EdgeCount {
                edges,
                two_n_minus_two,
            } => {
                write!(f, "|E| = {edges}, 2|V|-2 = {two_n_minus_two}")
            }
            Diagnostic::Isc(Some(order)) => write!(f, "ISC w.r.t. 1, ordering ({})", join(order)),
            Diagnostic::Isc(None) => write!(f, "not ISC w.r.t. 1"),
        }
    }
}

fn join(v: &[usize]) -> alloc::string::String {
    let parts: Vec<alloc::string::String> = v.iter().map(|x| alloc::format!("{x}")).collect();
    parts.join(",")
}

/// Structural findings about a model. Never fails.
pub fn validate(model: &CompartmentModel) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if model.inputs().is_empty() {
        out.push(Diagnostic::NoInputs);
    }
    if model.outputs().is_empty() {
        out.push(Diagnostic::NoOutputs);
    }
    let g = model.graph();
    out.push(Diagnostic::StronglyConnected(g.is_strongly_connected()));
    let leaks: Vec<usize> = model.leaks().iter().copied().collect();
    out.push(match leaks.len() {
        0 => Diagnostic::NoLeaks,
        k if k == model.n() => Diagnostic::LeakEverywhere,
        1 => Diagnostic::SingleLeak(leaks[0]),
        _ => Diagnostic::Leaks(leaks),
    });
    let sole = |s: &alloc::collections::BTreeSet<usize>| s.len() == 1 && s.contains(&1);
    if sole(model.inputs()) && sole(model.outputs()) {
        out.push(Diagnostic::SoleIoAtOne);
    }
    out.push(Diagnostic::OneInInputsAndOutputs(
        model.inputs().contains(&1) && model.outputs().contains(&1),
    ));
    out.push(Diagnostic::LeaksCoveredByIo(model.leaks().iter().all(
        |v| model.inputs().contains(v) || model.outputs().contains(v),
    )));
    out.push(Diagnostic::EdgeCount {
        edges: g.edge_count(),
        two_n_minus_two: 2 * model.n() - 2,
    });
    // Bitmask search is limited to 64 vertices; larger graphs report none.
    out.push(Diagnostic::Isc(
        g.inductively_strongly_connected(1).ok().flatten(),
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DirectedGraph;
    use crate::model::tests::three_cycle;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn three_cycle_diagnostics() {
        let d = validate(&three_cycle(&[1, 2, 3], &[1]));
        assert!(d.contains(&Diagnostic::LeakEverywhere));
        assert!(d.contains(&Diagnostic::SoleIoAtOne));
        assert!(d.contains(&Diagnostic::Isc(Some(vec![1, 2, 3]))));
        assert_eq!(Diagnostic::LeakEverywhere.to_string(), "Leak = V");
    }

    #[test]
    fn empty_outputs_flagged() {
        let g = DirectedGraph::from_pairs(2, &[(1, 2), (2, 1)]).unwrap();
        let m = CompartmentModel::new(g, [1], [], [1]).unwrap();
        let d = validate(&m);
        assert!(d.contains(&Diagnostic::NoOutputs));
        assert_eq!(
            Diagnostic::NoOutputs.to_string(),
            "no outputs: analysis unavailable"
        );
    }

    #[test]
    fn edge_count_message() {
        let d = Diagnostic::EdgeCount {
            edges: 20,
            two_n_minus_two: 20,
        };
        assert_eq!(d.to_string(), "|E| = 2|V|-2 = 20");
        assert_eq!(Diagnostic::SingleLeak(5).to_string(), "single leak at 5");
    }
}
