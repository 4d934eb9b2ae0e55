//! Maximum bipartite matching by repeated augmenting paths (Kuhn).

use super::{check_node, Solution, SolveError, SolveResult};
use crate::answer::Answer;
use crate::graph::Graph;
use crate::trace::{ReasoningTrace, Step};

struct Kuhn<'a> {
    graph: &'a Graph,
    is_right: Vec<bool>,
    match_of_right: Vec<Option<usize>>,
    seen: Vec<bool>,
}

impl Kuhn<'_> {
    /// Alternating path `l, r, l', r', ...` ending at a free right node.
    fn augmenting_path(&mut self, l: usize) -> Option<Vec<usize>> {
        for r in self.graph.undirected_neighbors(l) {
            if !self.is_right[r] || self.seen[r] {
                continue;
            }
            self.seen[r] = true;
            match self.match_of_right[r] {
                None => return Some(vec![l, r]),
                Some(l2) => {
                    if let Some(rest) = self.augmenting_path(l2) {
                        let mut path = vec![l, r];
                        path.extend(rest);
                        return Some(path);
                    }
                }
            }
        }
        None
    }
}

/// Applies an augmenting path: pairs at even positions join the matching.
pub(crate) fn apply_augmenting_path(match_of_right: &mut [Option<usize>], path: &[usize]) {
    for pair in path.chunks(2) {
        if let [l, r] = *pair {
            match_of_right[r] = Some(l);
        }
    }
}

pub(crate) fn matching_edges(match_of_right: &[Option<usize>]) -> Vec<(usize, usize)> {
    let mut edges: Vec<(usize, usize)> =
        match_of_right.iter().enumerate().filter_map(|(r, l)| l.map(|l| (l, r))).collect();
    edges.sort_unstable();
    edges
}

pub fn max_bipartite_matching(graph: &Graph, left: &[usize], right: &[usize]) -> SolveResult {
    let n = graph.node_count();
    let mut side = vec![None; n];
    for &l in left {
        check_node(graph, l)?;
        side[l] = Some(false);
    }
    for &r in right {
        check_node(graph, r)?;
        if side[r].is_some() {
            return Err(SolveError::Infeasible(format!("node {r} is in both parts")));
        }
        side[r] = Some(true);
    }
    if side.iter().any(Option::is_none) {
        return Err(SolveError::Infeasible("parts do not cover every node".into()));
    }
    if graph.edges().any(|(u, v, _)| side[u] == side[v]) {
        return Err(SolveError::Infeasible("an edge joins two nodes of the same part".into()));
    }
    let mut left_sorted = left.to_vec();
    left_sorted.sort_unstable();
    let mut kuhn = Kuhn {
        graph,
        is_right: side.iter().map(|s| *s == Some(true)).collect(),
        match_of_right: vec![None; n],
        seen: vec![false; n],
    };
    let mut steps = vec![Step::MatchParts { left: left_sorted.clone() }];
    let mut size = 0;
    for &l in &left_sorted {
        kuhn.seen.iter_mut().for_each(|s| *s = false);
        match kuhn.augmenting_path(l) {
            Some(path) => {
                apply_augmenting_path(&mut kuhn.match_of_right, &path);
                size += 1;
                steps.push(Step::MatchAugment { path });
                steps.push(Step::MatchSize { size });
            }
            None => steps.push(Step::MatchFail { node: l }),
        }
    }
    let edges = matching_edges(&kuhn.match_of_right);
    Ok(Solution::new(Answer::EdgeList(edges), ReasoningTrace { steps }))
}
