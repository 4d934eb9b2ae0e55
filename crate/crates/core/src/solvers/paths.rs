//! Distances and reachability: Dijkstra, reachability search, weak
//! components and hop-count diameter.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use super::{check_node, Solution, SolveError, SolveResult};
use crate::answer::Answer;
use crate::graph::Graph;
use crate::trace::{ReasoningTrace, Step};

/// Minimum total weight from `u` to `v`. Unweighted graphs count hops.
pub fn shortest_path_distance(graph: &Graph, u: usize, v: usize) -> SolveResult {
    check_node(graph, u)?;
    check_node(graph, v)?;
    let n = graph.node_count();
    let mut dist = vec![u64::MAX; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    let mut steps = vec![Step::DistanceGoal { from: u, to: v }];
    dist[u] = 0;
    heap.push(Reverse((0u64, u)));
    while let Some(Reverse((d, x))) = heap.pop() {
        if settled[x] {
            continue;
        }
        settled[x] = true;
        steps.push(Step::Settle { node: x, dist: d });
        if x == v {
            return Ok(Solution::new(Answer::Int(d as i64), ReasoningTrace { steps }));
        }
        for &y in graph.neighbors(x) {
            if settled[y] {
                continue;
            }
            let nd = d + u64::from(graph.weight(x, y).unwrap_or(1));
            if nd < dist[y] {
                dist[y] = nd;
                steps.push(Step::Relax { from: x, to: y, dist: nd });
                heap.push(Reverse((nd, y)));
            }
        }
    }
    Err(SolveError::Infeasible(format!("node {v} is unreachable from node {u}")))
}

/// Whether `v` is reachable from `u` (following edge direction).
pub fn connectivity(graph: &Graph, u: usize, v: usize) -> SolveResult {
    check_node(graph, u)?;
    check_node(graph, v)?;
    let mut seen = vec![false; graph.node_count()];
    let mut queue = VecDeque::from([u]);
    seen[u] = true;
    let mut steps = vec![Step::ReachGoal { from: u, to: v }];
    let mut reached = false;
    while let Some(x) = queue.pop_front() {
        steps.push(Step::Visit { node: x });
        if x == v {
            reached = true;
            break;
        }
        for &y in graph.neighbors(x) {
            if !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    steps.push(Step::ReachVerdict { from: u, to: v, reached });
    Ok(Solution::new(Answer::Bool(reached), ReasoningTrace { steps }))
}

/// Nodes in `u`'s weakly connected component.
pub fn connected_component(graph: &Graph, u: usize) -> SolveResult {
    check_node(graph, u)?;
    let mut seen = vec![false; graph.node_count()];
    let mut queue = VecDeque::from([u]);
    seen[u] = true;
    let mut steps = vec![Step::ComponentStart { node: u }];
    let mut members = Vec::new();
    while let Some(x) = queue.pop_front() {
        steps.push(Step::Visit { node: x });
        members.push(x);
        for y in graph.undirected_neighbors(x) {
            if !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    Ok(Solution::new(Answer::node_set(members), ReasoningTrace { steps }))
}

pub(crate) fn hop_distances(graph: &Graph, s: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; graph.node_count()];
    dist[s] = Some(0);
    let mut queue = VecDeque::from([s]);
    while let Some(x) = queue.pop_front() {
        let dx = dist[x].expect("queued nodes have distances");
        for &y in graph.neighbors(x) {
            if dist[y].is_none() {
                dist[y] = Some(dx + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Largest hop distance over all ordered node pairs; needs every pair reachable.
pub fn diameter(graph: &Graph) -> SolveResult {
    let n = graph.node_count();
    let mut steps = Vec::with_capacity(n + 1);
    let mut best = 0;
    for s in 0..n {
        let dist = hop_distances(graph, s);
        let mut far = (s, 0);
        for (t, d) in dist.iter().enumerate() {
            match d {
                None => {
                    return Err(SolveError::Infeasible(format!("node {t} is unreachable from node {s}")));
                }
                Some(d) if *d > far.1 => far = (t, *d),
                _ => {}
            }
        }
        steps.push(Step::Eccentricity { node: s, farthest: far.0, dist: far.1 });
        best = best.max(far.1);
    }
    steps.push(Step::Diameter { value: best });
    Ok(Solution::new(Answer::Int(best as i64), ReasoningTrace { steps }))
}
