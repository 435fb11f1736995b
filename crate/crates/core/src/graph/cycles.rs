use core::fmt;

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::{DirectedGraph, Edge, GraphError};
use crate::arith::{exact_rank, int, Matrix, Rational};

/// Simple directed cycle `v0 → v1 → … → v_{k-1} → v0`, rotated so the
/// smallest vertex comes first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cycle {
    vertices: Vec<usize>,
}

impl Cycle {
    /// Rotates `vertices` into canonical form. Panics on an empty sequence.
    pub fn new(mut vertices: Vec<usize>) -> Self {
        let min_at = vertices
            .iter()
            .enumerate()
            .min_by_key(|&(_, v)| *v)
            .map(|(i, _)| i)
            .expect("cycle needs at least one vertex");
        vertices.rotate_left(min_at);
        Self { vertices }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let k = self.vertices.len();
        (0..k).map(move |i| Edge::new(self.vertices[i], self.vertices[(i + 1) % k]))
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl DirectedGraph {
    /// Every simple directed cycle, each exactly once (Johnson's algorithm).
    ///
    /// Cycles are grouped by their smallest vertex in ascending order, and
    /// within a group follow the depth-first order over ascending successors.
    pub fn simple_cycles(&self) -> Vec<Cycle> {
        let mut found = Vec::new();
        for s in self.vertices() {
            let comp = self.component_from(s);
            if comp.iter().filter(|&&m| m).count() < 2 {
                continue;
            }
            let mut j = Johnson {
                graph: self,
                start: s,
                comp,
                blocked: vec![false; self.n + 1],
                blocked_by: vec![BTreeSet::new(); self.n + 1],
                stack: Vec::new(),
                found: &mut found,
            };
            j.circuit(s);
        }
        found
    }

    /// Strongly connected component of `s` within the subgraph induced by
    /// vertices `>= s`.
    fn component_from(&self, s: usize) -> Vec<bool> {
        let allowed: Vec<bool> = (0..=self.n).map(|v| v >= s).collect();
        let fwd = self.reach_set(s, &allowed, true);
        let bwd = self.reach_set(s, &allowed, false);
        fwd.iter().zip(&bwd).map(|(a, b)| *a && *b).collect()
    }

    fn reach_set(&self, s: usize, allowed: &[bool], forward: bool) -> Vec<bool> {
        let mut seen = vec![false; self.n + 1];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            let next = if forward { &self.out[v] } else { &self.inc[v] };
            for &w in next {
                if allowed[w] && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// The `|V| × |E|` incidence matrix: the column of edge `j → k` has `+1`
    /// in row `j` and `-1` in row `k`.
    pub fn incidence_matrix(&self) -> Matrix<Rational> {
        let mut m = Matrix::zeros(self.n, self.edges.len());
        for (c, e) in self.edges.iter().enumerate() {
            m.set(e.from - 1, c, int(1));
            m.set(e.to - 1, c, int(-1));
        }
        m
    }

    /// 0/1 indicator over the edge list of the edges used by `cycle`.
    ///
    /// Panics if the cycle uses an edge not in the graph.
    pub fn indicator(&self, cycle: &Cycle) -> Vec<Rational> {
        let mut v = vec![int(0); self.edges.len()];
        for e in cycle.edges() {
            let idx = self.edge_index(e).expect("cycle edge not in graph");
            v[idx] = int(1);
        }
        v
    }

    /// `|E| - |V| + 1` simple cycles whose indicators form a basis of the
    /// incidence matrix kernel.
    ///
    /// Greedy over [`simple_cycles`](Self::simple_cycles) order, keeping a
    /// cycle iff it raises the exact rank.
    pub fn cycle_space_basis(&self) -> Result<Vec<Cycle>, GraphError> {
        if !self.is_strongly_connected() {
            return Err(GraphError::NotStronglyConnected);
        }
        let target = self.edges.len() + 1 - self.n;
        let mut basis = Vec::with_capacity(target);
        let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(target);
        for cycle in self.simple_cycles() {
            if basis.len() == target {
                break;
            }
            rows.push(self.indicator(&cycle));
            if exact_rank(&Matrix::from_rows(rows.clone())) == basis.len() + 1 {
                basis.push(cycle);
            } else {
                rows.pop();
            }
        }
        debug_assert_eq!(basis.len(), target);
        Ok(basis)
    }
}

struct Johnson<'a> {
    graph: &'a DirectedGraph,
    start: usize,
    comp: Vec<bool>,
    blocked: Vec<bool>,
    blocked_by: Vec<BTreeSet<usize>>,
    stack: Vec<usize>,
    found: &'a mut Vec<Cycle>,
}

impl Johnson<'_> {
    fn circuit(&mut self, v: usize) -> bool {
        let mut closed = false;
        self.stack.push(v);
        self.blocked[v] = true;
        let graph = self.graph;
        for &w in &graph.out[v] {
            if !self.comp[w] {
                continue;
            }
            if w == self.start {
                self.found.push(Cycle::new(self.stack.clone()));
                closed = true;
            } else if !self.blocked[w] && self.circuit(w) {
                closed = true;
            }
        }
        if closed {
            self.unblock(v);
        } else {
            for &w in &graph.out[v] {
                if self.comp[w] {
                    self.blocked_by[w].insert(v);
                }
            }
        }
        self.stack.pop();
        closed
    }

    fn unblock(&mut self, v: usize) {
        self.blocked[v] = false;
        let waiting = core::mem::take(&mut self.blocked_by[v]);
        for w in waiting {
            if self.blocked[w] {
                self.unblock(w);
            }
        }
    }
}
