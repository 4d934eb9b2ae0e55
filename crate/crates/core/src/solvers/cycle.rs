//! Cycle detection.
//!
//! Undirected: a component contains a cycle iff it has at least as many
//! edges as nodes. Directed: a cycle exists iff depth-first search finds an
//! edge back into the current search path.

use super::Solution;
use crate::answer::Answer;
use crate::graph::Graph;
use crate::trace::{ReasoningTrace, Step};

pub fn has_cycle(graph: &Graph) -> Solution {
    if graph.is_directed() {
        directed_cycle(graph)
    } else {
        undirected_cycle(graph)
    }
}

fn undirected_cycle(graph: &Graph) -> Solution {
    let comp = graph.weak_components();
    let count = comp.iter().max().map_or(0, |c| c + 1);
    let mut members = vec![Vec::new(); count];
    let mut edges = vec![0usize; count];
    for (u, &c) in comp.iter().enumerate() {
        members[c].push(u);
    }
    for (u, _, _) in graph.edges() {
        edges[comp[u]] += 1;
    }
    let mut steps = Vec::with_capacity(count + 1);
    let mut found = false;
    for (nodes, e) in members.into_iter().zip(edges) {
        found |= e >= nodes.len();
        steps.push(Step::ComponentSummary { nodes, edges: e });
    }
    steps.push(Step::CycleVerdict { found });
    Solution::new(Answer::Bool(found), ReasoningTrace { steps })
}

#[derive(Clone, Copy, PartialEq)]
enum Mark {
    New,
    OnPath,
    Done,
}

fn directed_cycle(graph: &Graph) -> Solution {
    let n = graph.node_count();
    let mut mark = vec![Mark::New; n];
    let mut steps = Vec::new();
    for root in 0..n {
        if mark[root] != Mark::New {
            continue;
        }
        mark[root] = Mark::OnPath;
        steps.push(Step::Visit { node: root });
        let mut stack = vec![(root, 0usize)];
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            let nbrs = graph.neighbors(u);
            if *next < nbrs.len() {
                let v = nbrs[*next];
                *next += 1;
                match mark[v] {
                    Mark::OnPath => {
                        steps.push(Step::BackEdge { from: u, to: v });
                        return Solution::new(Answer::Bool(true), ReasoningTrace { steps });
                    }
                    Mark::New => {
                        mark[v] = Mark::OnPath;
                        steps.push(Step::Visit { node: v });
                        stack.push((v, 0));
                    }
                    Mark::Done => {}
                }
            } else {
                mark[u] = Mark::Done;
                steps.push(Step::Finish { node: u });
                stack.pop();
            }
        }
    }
    steps.push(Step::NoBackEdge);
    Solution::new(Answer::Bool(false), ReasoningTrace { steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_graphs::graph;

    #[test]
    fn trees_and_triangles() {
        let tree = graph(5, false, &[(0, 1), (0, 2), (2, 3), (2, 4)]);
        assert_eq!(has_cycle(&tree).answer, Answer::Bool(false));
        let tri = graph(3, false, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(has_cycle(&tri).answer, Answer::Bool(true));
    }

    #[test]
    fn directed_chain_has_no_cycle() {
        let chain = graph(3, true, &[(0, 1), (1, 2)]);
        assert_eq!(has_cycle(&chain).answer, Answer::Bool(false));
        // A diamond is acyclic even though its shadow has a cycle.
        let diamond = graph(4, true, &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert_eq!(has_cycle(&diamond).answer, Answer::Bool(false));
        let loop3 = graph(3, true, &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(has_cycle(&loop3).answer, Answer::Bool(true));
    }
}
