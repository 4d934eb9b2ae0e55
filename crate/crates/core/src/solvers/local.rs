//! Node- and pair-level tasks that read the neighborhood directly.
//!
//! On directed graphs "neighbors" means out-neighbors; predecessors are the
//! separate in-neighbor task.

use std::collections::BTreeSet;

use super::{check_node, need_pair, Solution, SolveError, SolveResult};
use crate::answer::Answer;
use crate::graph::Graph;
use crate::task::{QueryArgs, TaskKind};
use crate::trace::{clustering_value, ReasoningTrace, Step};

fn neighbors_step(graph: &Graph, u: usize) -> Step {
    Step::Neighbors { node: u, list: graph.neighbors(u).to_vec(), directed: graph.is_directed() }
}

pub fn neighbor(graph: &Graph, u: usize) -> SolveResult {
    check_node(graph, u)?;
    let trace = ReasoningTrace { steps: vec![neighbors_step(graph, u)] };
    Ok(Solution::new(Answer::node_set(graph.neighbors(u).to_vec()), trace))
}

pub fn degree(graph: &Graph, u: usize) -> SolveResult {
    check_node(graph, u)?;
    let d = graph.degree(u);
    let trace = ReasoningTrace { steps: vec![neighbors_step(graph, u), Step::Degree { node: u, degree: d }] };
    Ok(Solution::new(Answer::Int(d as i64), trace))
}

pub fn predecessor(graph: &Graph, u: usize) -> SolveResult {
    check_node(graph, u)?;
    if !graph.is_directed() {
        return Err(SolveError::Infeasible("predecessor task needs a directed graph".into()));
    }
    let list = graph.predecessors(u).to_vec();
    let trace = ReasoningTrace { steps: vec![Step::Predecessors { node: u, list: list.clone() }] };
    Ok(Solution::new(Answer::node_set(list), trace))
}

pub fn edge(graph: &Graph, u: usize, v: usize) -> SolveResult {
    check_node(graph, u)?;
    check_node(graph, v)?;
    let present = graph.has_edge(u, v);
    let trace = ReasoningTrace { steps: vec![neighbors_step(graph, u), Step::EdgeCheck { u, v, present }] };
    Ok(Solution::new(Answer::Bool(present), trace))
}

fn intersection_and_union(graph: &Graph, u: usize, v: usize) -> (Vec<usize>, Vec<usize>) {
    let a: BTreeSet<usize> = graph.neighbors(u).iter().copied().collect();
    let b: BTreeSet<usize> = graph.neighbors(v).iter().copied().collect();
    (a.intersection(&b).copied().collect(), a.union(&b).copied().collect())
}

pub fn common_neighbor(graph: &Graph, u: usize, v: usize) -> SolveResult {
    check_node(graph, u)?;
    check_node(graph, v)?;
    let (common, _) = intersection_and_union(graph, u, v);
    let count = common.len();
    let trace = ReasoningTrace {
        steps: vec![neighbors_step(graph, u), neighbors_step(graph, v), Step::Common { u, v, list: common }],
    };
    Ok(Solution::new(Answer::Int(count as i64), trace))
}

/// |N(u) ∩ N(v)| / |N(u) ∪ N(v)|, or 0 when both neighborhoods are empty.
pub fn jaccard(graph: &Graph, u: usize, v: usize) -> SolveResult {
    check_node(graph, u)?;
    check_node(graph, v)?;
    let (common, union) = intersection_and_union(graph, u, v);
    let (i, n) = (common.len(), union.len());
    let value = if n == 0 { 0.0 } else { i as f64 / n as f64 };
    let trace = ReasoningTrace {
        steps: vec![
            neighbors_step(graph, u),
            neighbors_step(graph, v),
            Step::Common { u, v, list: common },
            Step::Union { list: union },
            Step::Jaccard { inter: i, union: n },
        ],
    };
    Ok(Solution::new(Answer::Float(value), trace))
}

/// `2T / (D(D-1))` undirected, `T / (D(D-1))` directed, 0 when `D <= 1`.
pub fn clustering_coefficient(graph: &Graph, u: usize) -> SolveResult {
    check_node(graph, u)?;
    let directed = graph.is_directed();
    let nbrs = graph.neighbors(u);
    let mut steps = vec![neighbors_step(graph, u)];
    let mut links = 0;
    for &a in nbrs {
        for &b in nbrs {
            let counted = if directed { a != b } else { a < b };
            if counted && graph.has_edge(a, b) {
                links += 1;
                steps.push(Step::Link { a, b, directed });
            }
        }
    }
    let d = nbrs.len();
    steps.push(Step::Clustering { node: u, links, degree: d, directed });
    Ok(Solution::new(Answer::Float(clustering_value(links, d, directed)), ReasoningTrace { steps }))
}

/// Neighbor / Degree / Predecessor / Edge / CommonNeighbor.
pub fn solve_local(kind: TaskKind, graph: &Graph, query: &QueryArgs) -> SolveResult {
    let single = || query.u.ok_or_else(|| SolveError::Infeasible("query is missing node u".into()));
    match kind {
        TaskKind::Neighbor => neighbor(graph, single()?),
        TaskKind::Degree => degree(graph, single()?),
        TaskKind::Predecessor => predecessor(graph, single()?),
        TaskKind::Edge => {
            let (u, v) = need_pair(query)?;
            edge(graph, u, v)
        }
        TaskKind::CommonNeighbor => {
            let (u, v) = need_pair(query)?;
            common_neighbor(graph, u, v)
        }
        other => Err(SolveError::Infeasible(format!("{other} is not a local task"))),
    }
}
