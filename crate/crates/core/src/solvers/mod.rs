//! Reference solvers for every task kind.
//!
//! Each solver returns the answer together with the trace of steps that
//! produced it; [`replay`] recomputes the answer from the steps alone.

use thiserror::Error;

use crate::answer::Answer;
use crate::graph::Graph;
use crate::task::{QueryArgs, TaskKind};
use crate::trace::ReasoningTrace;

mod cycle;
mod euler;
mod flow;
mod hamiltonian;
mod local;
mod matching;
mod mst;
mod pagerank;
mod paths;
pub mod replay;
mod topo;
mod traversal;

pub use cycle::has_cycle;
pub use euler::euler_path;
pub use flow::max_flow;
pub use hamiltonian::{hamiltonian_path, hamiltonian_path_with_budget, DEFAULT_HAMILTONIAN_BUDGET};
pub use local::{clustering_coefficient, common_neighbor, degree, edge, jaccard, neighbor, predecessor, solve_local};
pub use matching::max_bipartite_matching;
pub use mst::mst_weight;
pub use pagerank::{pagerank_scores, pagerank_top, PAGERANK_DAMPING, PAGERANK_ITERATIONS};
pub use paths::{connected_component, connectivity, diameter, shortest_path_distance};
pub use replay::replay;
pub use topo::topological_sort;
pub use traversal::{bfs_order, dfs_order};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("infeasible input: {0}")]
    Infeasible(String),
    #[error("search budget of {0} expansions exhausted")]
    BudgetExhausted(u64),
}

pub type SolveResult = Result<Solution, SolveError>;

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub answer: Answer,
    pub trace: ReasoningTrace,
}

impl Solution {
    pub(crate) fn new(answer: Answer, trace: ReasoningTrace) -> Self {
        Self { answer, trace }
    }
}

pub(crate) fn check_node(graph: &Graph, u: usize) -> Result<usize, SolveError> {
    if u < graph.node_count() {
        Ok(u)
    } else {
        Err(SolveError::Infeasible(format!("node {u} not in graph")))
    }
}

fn need(q: Option<usize>, what: &str) -> Result<usize, SolveError> {
    q.ok_or_else(|| SolveError::Infeasible(format!("query is missing node {what}")))
}

fn need_pair(query: &QueryArgs) -> Result<(usize, usize), SolveError> {
    let (u, v) = (need(query.u, "u")?, need(query.v, "v")?);
    if u == v {
        return Err(SolveError::Infeasible("pair query needs two distinct nodes".into()));
    }
    Ok((u, v))
}

/// Dispatches to the solver for `kind`.
pub fn solve(kind: TaskKind, graph: &Graph, query: &QueryArgs) -> SolveResult {
    use TaskKind::*;
    match kind {
        Neighbor | Degree | Predecessor | Edge | CommonNeighbor => solve_local(kind, graph, query),
        Jaccard => {
            let (u, v) = need_pair(query)?;
            jaccard(graph, u, v)
        }
        ClusteringCoefficient => clustering_coefficient(graph, need(query.u, "u")?),
        PageRank => pagerank_top(graph),
        ShortestPath => {
            let (u, v) = need_pair(query)?;
            shortest_path_distance(graph, u, v)
        }
        Connectivity => {
            let (u, v) = need_pair(query)?;
            connectivity(graph, u, v)
        }
        MaximumFlow => {
            let (u, v) = need_pair(query)?;
            max_flow(graph, u, v)
        }
        Dfs => dfs_order(graph, need(query.u, "u")?),
        Bfs => bfs_order(graph, need(query.u, "u")?),
        Cycle => Ok(has_cycle(graph)),
        ConnectedComponent => connected_component(graph, need(query.u, "u")?),
        Diameter => diameter(graph),
        Bipartite => {
            let left = query
                .left
                .as_ref()
                .ok_or_else(|| SolveError::Infeasible("bipartite query needs a left part".into()))?;
            let right = query
                .right
                .as_ref()
                .ok_or_else(|| SolveError::Infeasible("bipartite query needs a right part".into()))?;
            max_bipartite_matching(graph, left, right)
        }
        TopologicalSort => topological_sort(graph),
        Mst => mst_weight(graph),
        EulerPath => euler_path(graph),
        HamiltonianPath => hamiltonian_path(graph),
    }
}
