//! Maximum flow by shortest augmenting paths (Edmonds-Karp).
//! Edge weights are capacities; unweighted edges carry capacity 1.

use std::collections::VecDeque;

use super::{check_node, Solution, SolveError, SolveResult};
use crate::answer::Answer;
use crate::graph::Graph;
use crate::trace::{ReasoningTrace, Step};

pub fn max_flow(graph: &Graph, s: usize, t: usize) -> SolveResult {
    check_node(graph, s)?;
    check_node(graph, t)?;
    if s == t {
        return Err(SolveError::Infeasible("source and sink coincide".into()));
    }
    let n = graph.node_count();
    let mut cap = vec![vec![0i64; n]; n];
    for (u, v, w) in graph.edges() {
        let c = i64::from(w.unwrap_or(1));
        cap[u][v] += c;
        if !graph.is_directed() {
            cap[v][u] += c;
        }
    }
    // Residual neighbors in ascending index order, including reverse arcs.
    let residual_nbrs: Vec<Vec<usize>> =
        (0..n).map(|u| (0..n).filter(|&v| cap[u][v] > 0 || cap[v][u] > 0).collect()).collect();
    let mut flow = vec![vec![0i64; n]; n];
    let mut steps = vec![Step::FlowGoal { from: s, to: t }];
    let mut total = 0u64;
    loop {
        let mut parent = vec![usize::MAX; n];
        parent[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for &v in &residual_nbrs[u] {
                if parent[v] == usize::MAX && cap[u][v] - flow[u][v] > 0 {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if parent[t] == usize::MAX {
            break;
        }
        let mut path = vec![t];
        let mut bottleneck = i64::MAX;
        let mut v = t;
        while v != s {
            let u = parent[v];
            bottleneck = bottleneck.min(cap[u][v] - flow[u][v]);
            path.push(u);
            v = u;
        }
        path.reverse();
        for w in path.windows(2) {
            flow[w[0]][w[1]] += bottleneck;
            flow[w[1]][w[0]] -= bottleneck;
        }
        total += bottleneck as u64;
        steps.push(Step::Augment { path, amount: bottleneck as u64 });
    }
    steps.push(Step::FlowTotal { value: total });
    Ok(Solution::new(Answer::Int(total as i64), ReasoningTrace { steps }))
}
