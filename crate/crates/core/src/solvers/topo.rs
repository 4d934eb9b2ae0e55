//! Kahn's algorithm, always removing the smallest available node.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{Solution, SolveError, SolveResult};
use crate::answer::Answer;
use crate::graph::Graph;
use crate::trace::{ReasoningTrace, Step};

pub fn topological_sort(graph: &Graph) -> SolveResult {
    if !graph.is_directed() {
        return Err(SolveError::Infeasible("topological sort needs a directed graph".into()));
    }
    let n = graph.node_count();
    let mut indeg: Vec<usize> = (0..n).map(|u| graph.predecessors(u).len()).collect();
    let mut steps = vec![Step::InDegrees { degrees: indeg.clone() }];
    let mut ready: BinaryHeap<Reverse<usize>> = (0..n).filter(|&u| indeg[u] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(u)) = ready.pop() {
        order.push(u);
        steps.push(Step::Emit { node: u });
        for &v in graph.neighbors(u) {
            indeg[v] -= 1;
            steps.push(Step::Decrement { node: v, indegree: indeg[v] });
            if indeg[v] == 0 {
                ready.push(Reverse(v));
            }
        }
    }
    if order.len() < n {
        return Err(SolveError::Infeasible("graph has a directed cycle".into()));
    }
    Ok(Solution::new(Answer::NodeList(order), ReasoningTrace { steps }))
}
