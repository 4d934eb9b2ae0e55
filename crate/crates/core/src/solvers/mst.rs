//! Minimum spanning tree weight via Kruskal.

use super::{Solution, SolveError, SolveResult};
use crate::answer::Answer;
use crate::graph::Graph;
use crate::trace::{ReasoningTrace, Step};

struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut x = x;
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

pub fn mst_weight(graph: &Graph) -> SolveResult {
    if graph.is_directed() {
        return Err(SolveError::Infeasible("spanning trees are defined on undirected graphs".into()));
    }
    let n = graph.node_count();
    let mut edges: Vec<(u32, usize, usize)> = graph.edges().map(|(u, v, w)| (w.unwrap_or(1), u, v)).collect();
    edges.sort_unstable();
    let mut dsu = DisjointSet::new(n);
    let mut steps = Vec::with_capacity(edges.len() + 1);
    let mut total = 0u64;
    let mut kept = 0;
    for (w, u, v) in edges {
        if kept + 1 == n {
            break;
        }
        let keep = dsu.union(u, v);
        if keep {
            total += u64::from(w);
            kept += 1;
        }
        steps.push(Step::MstEdge { u, v, weight: w, kept: keep });
    }
    if kept + 1 != n {
        return Err(SolveError::Infeasible("graph is not connected".into()));
    }
    steps.push(Step::MstTotal { value: total });
    Ok(Solution::new(Answer::Int(total as i64), ReasoningTrace { steps }))
}
