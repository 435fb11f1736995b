use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::{DirectedGraph, Edge, GraphError};

/// All shortest directed paths between two distinct vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSet {
    pub source: usize,
    pub target: usize,
    /// Number of edges on each path.
    pub length: usize,
    /// Vertex sequences `source, …, target`, in lexicographic order.
    pub paths: Vec<Vec<usize>>,
}

impl PathSet {
    /// Edges of path `k`, in traversal order.
    pub fn path_edges(&self, k: usize) -> Vec<Edge> {
        self.paths[k]
            .windows(2)
            .map(|w| Edge::new(w[0], w[1]))
            .collect()
    }
}

impl DirectedGraph {
    /// Enumerates every shortest path from `source` to `target`.
    ///
    /// BFS from the source gives layer distances; BFS on reversed edges from
    /// the target prunes vertices that cannot finish on time. The DFS then
    /// only walks edges that advance one layer toward the target.
    pub fn shortest_paths(&self, source: usize, target: usize) -> Result<PathSet, GraphError> {
        self.check_vertex(source)?;
        self.check_vertex(target)?;
        if source == target {
            return Err(GraphError::SameEndpoints(source));
        }
        let from_src = self.bfs(source, true);
        let Some(length) = from_src[target] else {
            return Err(GraphError::Unreachable {
                from: source,
                target,
            });
        };
        let to_tgt = self.bfs(target, false);
        let mut paths = Vec::new();
        let mut stack = vec![source];
        self.walk(&mut stack, target, length, &to_tgt, &mut paths);
        Ok(PathSet {
            source,
            target,
            length,
            paths,
        })
    }

    fn walk(
        &self,
        stack: &mut Vec<usize>,
        target: usize,
        length: usize,
        to_tgt: &[Option<usize>],
        out: &mut Vec<Vec<usize>>,
    ) {
        let v = *stack.last().unwrap();
        if v == target {
            out.push(stack.clone());
            return;
        }
        let remaining = length - (stack.len() - 1);
        for &w in &self.out[v] {
            if to_tgt[w] == Some(remaining - 1) {
                stack.push(w);
                self.walk(stack, target, length, to_tgt, out);
                stack.pop();
            }
        }
    }

    fn bfs(&self, start: usize, forward: bool) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n + 1];
        dist[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            let next = if forward { &self.out[v] } else { &self.inc[v] };
            for &w in next {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Edge-count distance from `source` to every vertex (`None` if
    /// unreachable), indexed by vertex.
    pub fn distances_from(&self, source: usize) -> Result<Vec<Option<usize>>, GraphError> {
        self.check_vertex(source)?;
        Ok(self.bfs(source, true))
    }
}
