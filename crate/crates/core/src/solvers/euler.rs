//! Euler path by Hierholzer's algorithm on undirected graphs.

use super::{Solution, SolveError, SolveResult};
use crate::answer::Answer;
use crate::graph::Graph;
use crate::trace::{ReasoningTrace, Step};

pub fn euler_path(graph: &Graph) -> SolveResult {
    if graph.is_directed() {
        return Err(SolveError::Infeasible("euler paths are solved on undirected graphs".into()));
    }
    if graph.edge_count() == 0 {
        return Err(SolveError::Infeasible("graph has no edges".into()));
    }
    let n = graph.node_count();
    let odd: Vec<usize> = (0..n).filter(|&u| graph.degree(u) % 2 == 1).collect();
    if odd.len() > 2 {
        return Err(SolveError::Infeasible(format!("{} nodes have odd degree", odd.len())));
    }
    let comp = graph.weak_components();
    let mut touched = (0..n).filter(|&u| graph.degree(u) > 0).map(|u| comp[u]);
    let first = touched.next().expect("graph has an edge");
    if touched.any(|c| c != first) {
        return Err(SolveError::Infeasible("edges span several components".into()));
    }
    let start =
        odd.first().copied().unwrap_or_else(|| (0..n).find(|&u| graph.degree(u) > 0).expect("graph has an edge"));

    let mut used = std::collections::BTreeSet::new();
    let mut next = vec![0usize; n];
    let mut stack = vec![start];
    let mut popped = Vec::with_capacity(graph.edge_count() + 1);
    let mut steps = vec![Step::EulerStart { node: start }];
    while let Some(&u) = stack.last() {
        let nbrs = graph.neighbors(u);
        while next[u] < nbrs.len() && used.contains(&(u.min(nbrs[next[u]]), u.max(nbrs[next[u]]))) {
            next[u] += 1;
        }
        if next[u] < nbrs.len() {
            let v = nbrs[next[u]];
            used.insert((u.min(v), u.max(v)));
            steps.push(Step::EulerWalk { from: u, to: v });
            stack.push(v);
        } else {
            stack.pop();
            popped.push(u);
            steps.push(Step::EulerPop { node: u });
        }
    }
    popped.reverse();
    Ok(Solution::new(Answer::NodeList(popped), ReasoningTrace { steps }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::replay;
    use crate::task::TaskKind;
    use crate::test_graphs::graph;

    fn uses_every_edge_once(g: &Graph, path: &[usize]) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        path.windows(2).all(|w| g.has_edge(w[0], w[1]) && seen.insert((w[0].min(w[1]), w[0].max(w[1]))))
            && seen.len() == g.edge_count()
    }

    #[test]
    fn path_graph_starts_at_odd_end() {
        let g = graph(3, false, &[(1, 0), (1, 2)]);
        assert_eq!(euler_path(&g).unwrap().answer, Answer::NodeList(vec![0, 1, 2]));
    }

    #[test]
    fn bowtie_circuit() {
        let g = graph(5, false, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]);
        let s = euler_path(&g).unwrap();
        let Answer::NodeList(p) = &s.answer else { panic!() };
        assert_eq!(p.first(), p.last());
        assert!(uses_every_edge_once(&g, p));
        assert_eq!(replay(TaskKind::EulerPath, &s.trace).unwrap(), s.answer);
    }

    #[test]
    fn splice_is_needed() {
        // Greedy from 0 reaches 3 before the triangle 1-4-5 is used.
        let g = graph(6, false, &[(0, 1), (1, 2), (2, 3), (1, 4), (4, 5), (5, 1)]);
        let Answer::NodeList(p) = euler_path(&g).unwrap().answer else { panic!() };
        assert!(uses_every_edge_once(&g, &p));
    }

    #[test]
    fn four_odd_nodes_is_infeasible() {
        let star = graph(4, false, &[(0, 1), (0, 2), (0, 3)]);
        assert!(euler_path(&star).is_err());
    }
}
