//! Hamiltonian path by backtracking.
//!
//! Start nodes are tried in ascending degree; extensions prefer the
//! neighbor with the fewest unvisited neighbors. The search is bounded by a
//! count of extensions so results do not depend on machine speed.

use super::{Solution, SolveError, SolveResult};
use crate::answer::Answer;
use crate::graph::Graph;
use crate::trace::{ReasoningTrace, Step};

pub const DEFAULT_HAMILTONIAN_BUDGET: u64 = 20_000;

struct Search<'a> {
    graph: &'a Graph,
    on_path: Vec<bool>,
    path: Vec<usize>,
    steps: Vec<Step>,
    expansions: u64,
    budget: u64,
}

impl Search<'_> {
    fn free_degree(&self, u: usize) -> usize {
        self.graph.neighbors(u).iter().filter(|&&v| !self.on_path[v]).count()
    }

    fn extend(&mut self, u: usize) -> Result<bool, SolveError> {
        if self.path.len() == self.graph.node_count() {
            return Ok(true);
        }
        let mut next: Vec<usize> = self.graph.neighbors(u).iter().copied().filter(|&v| !self.on_path[v]).collect();
        next.sort_by_key(|&v| (self.free_degree(v), v));
        for v in next {
            self.expansions += 1;
            if self.expansions > self.budget {
                return Err(SolveError::BudgetExhausted(self.budget));
            }
            self.on_path[v] = true;
            self.path.push(v);
            self.steps.push(Step::HamExtend { node: v });
            if self.extend(v)? {
                return Ok(true);
            }
            self.path.pop();
            self.on_path[v] = false;
            self.steps.push(Step::HamRetreat { node: v });
        }
        Ok(false)
    }
}

pub fn hamiltonian_path(graph: &Graph) -> SolveResult {
    hamiltonian_path_with_budget(graph, DEFAULT_HAMILTONIAN_BUDGET)
}

pub fn hamiltonian_path_with_budget(graph: &Graph, budget: u64) -> SolveResult {
    let n = graph.node_count();
    let mut starts: Vec<usize> = (0..n).collect();
    starts.sort_by_key(|&u| (graph.degree(u), u));
    let mut search = Search {
        graph,
        on_path: vec![false; n],
        path: Vec::with_capacity(n),
        steps: Vec::new(),
        expansions: 0,
        budget,
    };
    for s in starts {
        search.on_path[s] = true;
        search.path.push(s);
        search.steps.push(Step::HamStart { node: s });
        if search.extend(s)? {
            search.steps.push(Step::HamDone);
            let Search { path, steps, .. } = search;
            return Ok(Solution::new(Answer::NodeList(path), ReasoningTrace { steps }));
        }
        search.path.clear();
        search.on_path[s] = false;
    }
    Err(SolveError::Infeasible("no hamiltonian path exists".into()))
}
