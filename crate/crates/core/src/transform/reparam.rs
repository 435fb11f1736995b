use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::Edge;
use crate::ident::{check_icm, is_identifiable_function, Monomial};
use crate::model::{CompartmentModel, Symbol};

/// Scaling `X_i = x_i / s_i` along a BFS tree from vertex 1, and the
/// transformed matrix as formal monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalingReparam {
    /// `parent[v]` for `v = 2..=n` (index 0 and 1 unused).
    pub parent: Vec<Option<usize>>,
    /// `s_i`: product of edge parameters on the tree path `1 → i`.
    pub scales: Vec<Monomial>,
    /// `A'[i][k] = a_ik s_k / s_i`, `None` where `A` has a structural zero.
    /// Row and column indices are 0-based.
    pub entries: Vec<Vec<Option<Monomial>>>,
    /// Entries with some negative exponent, 1-indexed `(i, k)`.
    pub negative_entries: Vec<(usize, usize)>,
    /// Every nonzero transformed entry passed the identifiability test.
    pub verified: bool,
}

fn multiply(into: &mut Monomial, other: &Monomial, sign: i64) {
    for (&s, &e) in other {
        let slot = into.entry(s).or_insert(0);
        *slot += sign * e;
        if *slot == 0 {
            into.remove(&s);
        }
    }
}

/// Renders `a_2_1*a_1_2`, `a_3_2^-1`, or `1` for the empty monomial.
pub fn format_monomial(m: &Monomial) -> String {
    if m.is_empty() {
        return String::from("1");
    }
    m.iter()
        .map(|(s, &e)| {
            if e == 1 {
                format!("{s}")
            } else {
                format!("{s}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Builds the BFS-tree scaling for an identifiable cycle model and checks
/// each transformed entry with the identifiable-function test.
///
/// Ties in the tree are broken by the smallest parent index.
pub fn scaling_reparam(icm: &CompartmentModel, seed: u64) -> Result<ScalingReparam> {
    let report = check_icm(icm, seed);
    if !report.is_icm {
        return Err(Error::NotIcm(report.reasons.join("; ")));
    }
    let g = icm.graph();
    let n = g.n();
    let dist = g.distances_from(1)?;
    let mut parent = vec![None; n + 1];
    let mut scales = vec![Monomial::new(); n + 1];
    // BFS order so parents are scaled before children.
    let mut order: Vec<usize> = (1..=n).collect();
    order.sort_by_key(|&v| dist[v]);
    for &v in order.iter().skip(1) {
        let dv = dist[v].expect("strongly connected");
        let p = g
            .predecessors(v)
            .iter()
            .copied()
            .find(|&u| dist[u] == Some(dv - 1))
            .expect("BFS layer has a predecessor");
        parent[v] = Some(p);
        let mut s = scales[p].clone();
        multiply(&mut s, &Monomial::from([(Symbol::edge(p, v), 1)]), 1);
        scales[v] = s;
    }

    let mut entries = vec![vec![None; n]; n];
    let mut negative_entries = Vec::new();
    let mut verified = true;
    for i in 1..=n {
        for k in 1..=n {
            let entry = if i == k {
                Monomial::from([(Symbol::Diag(i), 1)])
            } else if g.has_edge(k, i) {
                let mut m = Monomial::from([(Symbol::edge(k, i), 1)]);
                multiply(&mut m, &scales[k], 1);
                multiply(&mut m, &scales[i], -1);
                m
            } else {
                continue;
            };
            if entry.values().any(|&e| e < 0) {
                negative_entries.push((i, k));
            }
            if !is_identifiable_function(icm, &entry, seed)? {
                verified = false;
            }
            entries[i - 1][k - 1] = Some(entry);
        }
    }
    scales.remove(0);
    Ok(ScalingReparam {
        parent,
        scales,
        entries,
        negative_entries,
        verified,
    })
}

impl ScalingReparam {
    /// Product of the transformed entries on the given edges.
    pub fn cycle_product(&self, edges: impl Iterator<Item = Edge>) -> Monomial {
        let mut m = Monomial::new();
        for e in edges {
            let entry = self.entries[e.to - 1][e.from - 1]
                .as_ref()
                .expect("edge entry");
            multiply(&mut m, entry, 1);
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DirectedGraph;
    use crate::model::tests::three_cycle;

    fn mono(items: &[(Symbol, i64)]) -> Monomial {
        items.iter().copied().collect()
    }

    #[test]
    fn three_cycle_matrix() {
        let r = scaling_reparam(&three_cycle(&[1, 2, 3], &[1]), 1).unwrap();
        assert!(r.verified);
        assert!(r.negative_entries.is_empty());
        assert_eq!(r.scales[0], Monomial::new());
        let row1: Vec<_> = r.entries[0].iter().map(|e| e.clone().unwrap()).collect();
        assert_eq!(
            row1,
            vec![
                mono(&[(Symbol::Diag(1), 1)]),
                mono(&[(Symbol::edge(2, 1), 1), (Symbol::edge(1, 2), 1)]),
                mono(&[
                    (Symbol::edge(1, 2), 1),
                    (Symbol::edge(2, 3), 1),
                    (Symbol::edge(3, 1), 1)
                ]),
            ]
        );
        assert_eq!(r.entries[1][0], Some(Monomial::new()));
        assert_eq!(r.entries[2][1], Some(Monomial::new()));
        assert_eq!(r.entries[2][0], None);
        assert_eq!(format_monomial(&row1[1]), "a_2_1*a_1_2");
    }

    #[test]
    fn two_cycle_matrix() {
        let g = DirectedGraph::from_pairs(2, &[(1, 2), (2, 1)]).unwrap();
        let m = CompartmentModel::new(g, [1], [1], [1, 2]).unwrap();
        let r = scaling_reparam(&m, 1).unwrap();
        assert_eq!(
            r.entries[0][1],
            Some(mono(&[(Symbol::edge(2, 1), 1), (Symbol::edge(1, 2), 1)]))
        );
        assert_eq!(r.entries[1][0], Some(Monomial::new()));
        assert_eq!(r.entries[1][1], Some(mono(&[(Symbol::Diag(2), 1)])));
    }

    #[test]
    fn cycles_cancel_scalings() {
        let m = three_cycle(&[1, 2, 3], &[1]);
        let r = scaling_reparam(&m, 2).unwrap();
        for c in m.graph().simple_cycles() {
            let expected: Monomial = c.edges().map(|e| (Symbol::edge(e.from, e.to), 1)).collect();
            assert_eq!(r.cycle_product(c.edges()), expected);
        }
    }

    #[test]
    fn rejects_non_icm() {
        assert!(matches!(
            scaling_reparam(&three_cycle(&[1], &[1]), 1),
            Err(Error::NotIcm(_))
        ));
    }
}
