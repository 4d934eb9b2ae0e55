//! Depth- and breadth-first orders with ascending-index tie-break.

use std::collections::VecDeque;

use super::{check_node, Solution, SolveResult};
use crate::answer::Answer;
use crate::graph::Graph;
use crate::trace::{ReasoningTrace, Step};

pub fn dfs_order(graph: &Graph, start: usize) -> SolveResult {
    check_node(graph, start)?;
    let mut visited = vec![false; graph.node_count()];
    let mut order = vec![start];
    let mut steps = vec![Step::TraversalStart { node: start, breadth: false }, Step::Visit { node: start }];
    visited[start] = true;
    // (node, index of the next neighbor to try)
    let mut stack = vec![(start, 0usize)];
    while let Some(&mut (u, ref mut next)) = stack.last_mut() {
        let nbrs = graph.neighbors(u);
        while *next < nbrs.len() && visited[nbrs[*next]] {
            *next += 1;
        }
        if *next < nbrs.len() {
            let v = nbrs[*next];
            visited[v] = true;
            order.push(v);
            steps.push(Step::Visit { node: v });
            stack.push((v, 0));
        } else {
            stack.pop();
            if let Some(&(parent, _)) = stack.last() {
                steps.push(Step::Backtrack { from: u, to: parent });
            }
        }
    }
    Ok(Solution::new(Answer::NodeList(order), ReasoningTrace { steps }))
}

pub fn bfs_order(graph: &Graph, start: usize) -> SolveResult {
    check_node(graph, start)?;
    let mut visited = vec![false; graph.node_count()];
    let mut order = vec![start];
    let mut steps = vec![Step::TraversalStart { node: start, breadth: true }];
    visited[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        steps.push(Step::Dequeue { node: u });
        for &v in graph.neighbors(u) {
            if !visited[v] {
                visited[v] = true;
                order.push(v);
                queue.push_back(v);
                steps.push(Step::Enqueue { node: v });
            }
        }
    }
    Ok(Solution::new(Answer::NodeList(order), ReasoningTrace { steps }))
}
