//! Combinatorics on the model graph.
//!
//! Vertices are 1-indexed. An edge `j → i` is a flow from compartment `j`
//! into compartment `i` and carries the rate parameter `a_ij`.

mod cycles;
mod paths;

use core::fmt;

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

pub use cycles::Cycle;
pub use paths::PathSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}")]
    DuplicateEdge(Edge),
    #[error("cycle space basis requires strong connectivity")]
    NotStronglyConnected,
    #[error("target unreachable: no path from {from} to {target}")]
    Unreachable { from: usize, target: usize },
    #[error("path endpoints must differ (both {0})")]
    SameEndpoints(usize),
    #[error("subset search supports at most 64 vertices, got {0}")]
    TooLarge(usize),
}

/// Directed edge `from → to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
}

impl Edge {
    pub const fn new(from: usize, to: usize) -> Self {
        Self { from, to }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.from, self.to)
    }
}

/// Simple directed graph on vertices `1..=n`: no self-loops, no duplicate
/// edges. Edge order is preserved as given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    n: usize,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
}

impl DirectedGraph {
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut seen = BTreeSet::new();
        let mut out = vec![Vec::new(); n + 1];
        let mut inc = vec![Vec::new(); n + 1];
        for &e in &edges {
            for v in [e.from, e.to] {
                if v == 0 || v > n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
            }
            if e.from == e.to {
                return Err(GraphError::SelfLoop(e.from));
            }
            if !seen.insert(e) {
                return Err(GraphError::DuplicateEdge(e));
            }
            out[e.from].push(e.to);
            inc[e.to].push(e.from);
        }
        for list in out.iter_mut().chain(inc.iter_mut()) {
            list.sort_unstable();
        }
        Ok(Self { n, edges, out, inc })
    }

    /// Convenience constructor from `(from, to)` pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, GraphError> {
        Self::new(n, pairs.iter().map(|&(f, t)| Edge::new(f, t)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> {
        1..=self.n
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.out
            .get(from)
            .is_some_and(|o| o.binary_search(&to).is_ok())
    }

    pub fn edge_index(&self, e: Edge) -> Option<usize> {
        self.edges.iter().position(|&x| x == e)
    }

    /// Successors of `v`, ascending.
    pub fn successors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    /// Predecessors of `v`, ascending.
    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.inc[v]
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v == 0 || v > self.n {
            Err(GraphError::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    /// Strongly connected components (Tarjan), each sorted ascending, in
    /// reverse topological order of the condensation.
    pub fn strongly_connected_components(&self) -> Vec<Vec<usize>> {
        let mut t = Tarjan {
            graph: self,
            index: vec![usize::MAX; self.n + 1],
            low: vec![0; self.n + 1],
            on_stack: vec![false; self.n + 1],
            stack: Vec::new(),
            next: 0,
            out: Vec::new(),
        };
        for v in self.vertices() {
            if t.index[v] == usize::MAX {
                t.visit(v);
            }
        }
        t.out
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.strongly_connected_components().len() == 1
    }

    /// Whether the subgraph induced by `members` is strongly connected.
    /// An empty member set is not.
    pub fn induced_strongly_connected(&self, members: &[bool]) -> bool {
        let Some(start) = (1..=self.n).find(|&v| members[v]) else {
            return false;
        };
        let total = members.iter().skip(1).filter(|&&m| m).count();
        let forward = self.reach(start, members, |v| &self.out[v]);
        if forward != total {
            return false;
        }
        self.reach(start, members, |v| &self.inc[v]) == total
    }

    fn reach<'a>(
        &'a self,
        start: usize,
        members: &[bool],
        next: impl Fn(usize) -> &'a [usize],
    ) -> usize {
        let mut seen = vec![false; self.n + 1];
        let mut stack = vec![start];
        seen[start] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in next(v) {
                if members[w] && !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count
    }

    /// A vertex ordering starting at `root` in which every prefix induces a
    /// strongly connected subgraph, or `None` if no such ordering exists.
    ///
    /// Backtracking over extensions, memoizing vertex subsets already known
    /// to be dead ends. Candidates are tried in ascending order, so the
    /// result is deterministic.
    pub fn inductively_strongly_connected(
        &self,
        root: usize,
    ) -> Result<Option<Vec<usize>>, GraphError> {
        self.check_vertex(root)?;
        if self.n > 64 {
            return Err(GraphError::TooLarge(self.n));
        }
        let mut members = vec![false; self.n + 1];
        members[root] = true;
        let mut order = vec![root];
        let mut dead = BTreeSet::new();
        let found = self.extend_isc(&mut members, &mut order, 1u64 << (root - 1), &mut dead);
        Ok(found.then_some(order))
    }

    fn extend_isc(
        &self,
        members: &mut [bool],
        order: &mut Vec<usize>,
        mask: u64,
        dead: &mut BTreeSet<u64>,
    ) -> bool {
        if order.len() == self.n {
            return true;
        }
        if dead.contains(&mask) {
            return false;
        }
        for v in self.vertices() {
            if members[v] {
                continue;
            }
            members[v] = true;
            if self.induced_strongly_connected(members) {
                order.push(v);
                if self.extend_isc(members, order, mask | (1u64 << (v - 1)), dead) {
                    return true;
                }
                order.pop();
            }
            members[v] = false;
        }
        dead.insert(mask);
        false
    }
}

struct Tarjan<'a> {
    graph: &'a DirectedGraph,
    index: Vec<usize>,
    low: Vec<usize>,
    on_stack: Vec<bool>,
    stack: Vec<usize>,
    next: usize,
    out: Vec<Vec<usize>>,
}

impl Tarjan<'_> {
    fn visit(&mut self, v: usize) {
        self.index[v] = self.next;
        self.low[v] = self.next;
        self.next += 1;
        self.stack.push(v);
        self.on_stack[v] = true;
        for &w in &self.graph.out[v] {
            if self.index[w] == usize::MAX {
                self.visit(w);
                self.low[v] = self.low[v].min(self.low[w]);
            } else if self.on_stack[w] {
                self.low[v] = self.low[v].min(self.index[w]);
            }
        }
        if self.low[v] == self.index[v] {
            let mut comp = Vec::new();
            while let Some(w) = self.stack.pop() {
                self.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            comp.sort_unstable();
            self.out.push(comp);
        }
    }
}
