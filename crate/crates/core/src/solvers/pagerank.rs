//! Three-round PageRank with damping 0.85 and uniform initialization.
//!
//! Update: `PR'(u) = (1 - d) / n + d * (sum_{v -> u} PR(v) / outdeg(v) + dangling / n)`
//! where `dangling` is the total score of nodes without outgoing edges.

use super::{Solution, SolveError, SolveResult};
use crate::answer::Answer;
use crate::graph::Graph;
use crate::trace::{ReasoningTrace, Step};

pub const PAGERANK_DAMPING: f64 = 0.85;
pub const PAGERANK_ITERATIONS: usize = 3;

/// Scores below this gap are treated as tied; the lowest index wins.
pub(crate) const TIE_EPS: f64 = 1e-12;

/// Score vectors after each round (index 0 is the initialization).
pub fn pagerank_scores(graph: &Graph) -> Vec<Vec<f64>> {
    let n = graph.node_count();
    let nf = n as f64;
    let mut rounds = vec![vec![1.0 / nf; n]];
    for _ in 0..PAGERANK_ITERATIONS {
        let prev = rounds.last().expect("initialized");
        let dangling: f64 = (0..n).filter(|&v| graph.degree(v) == 0).map(|v| prev[v]).sum();
        let next: Vec<f64> = (0..n)
            .map(|u| {
                let inflow: f64 = graph.predecessors(u).iter().map(|&v| prev[v] / graph.degree(v) as f64).sum();
                (1.0 - PAGERANK_DAMPING) / nf + PAGERANK_DAMPING * (inflow + dangling / nf)
            })
            .collect();
        rounds.push(next);
    }
    rounds
}

pub(crate) fn argmax_lowest(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] + TIE_EPS {
            best = i;
        }
    }
    best
}

pub fn pagerank_top(graph: &Graph) -> SolveResult {
    let n = graph.node_count();
    if n == 0 {
        return Err(SolveError::Infeasible("empty graph".into()));
    }
    let rounds = pagerank_scores(graph);
    let mut steps = vec![Step::PageRankSetup { n, iterations: PAGERANK_ITERATIONS, damping: PAGERANK_DAMPING }];
    for (round, scores) in rounds.iter().enumerate().skip(1) {
        steps.push(Step::PageRankRound { round, scores: scores.clone() });
    }
    let last = rounds.last().expect("at least one round");
    let best = argmax_lowest(last);
    steps.push(Step::PageRankPick { node: best, score: last[best] });
    Ok(Solution::new(Answer::Node(best), ReasoningTrace { steps }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_graphs::graph;

    #[test]
    fn mutual_pair_ties_to_node_zero() {
        let g = graph(2, true, &[(0, 1), (1, 0)]);
        let rounds = pagerank_scores(&g);
        assert!(rounds.iter().all(|r| (r[0] - 0.5).abs() < 1e-15 && (r[1] - 0.5).abs() < 1e-15));
        assert_eq!(pagerank_top(&g).unwrap().answer, Answer::Node(0));
    }

    #[test]
    fn star_pointing_inward_picks_the_hub() {
        // Leaves 1..=4 point at hub 0; the hub is dangling.
        // Round 1: hub = 0.03 + 0.85 * (4 * 0.2 + 0.2 / 5) = 0.744, leaves = 0.03 + 0.85 * 0.04 = 0.064.
        let g = graph(5, true, &[(1, 0), (2, 0), (3, 0), (4, 0)]);
        let rounds = pagerank_scores(&g);
        assert!((rounds[1][0] - 0.744).abs() < 1e-12);
        assert!((rounds[1][1] - 0.064).abs() < 1e-12);
        assert_eq!(pagerank_top(&g).unwrap().answer, Answer::Node(0));
    }

    #[test]
    fn single_node() {
        assert_eq!(pagerank_top(&graph(1, true, &[])).unwrap().answer, Answer::Node(0));
    }

    #[test]
    fn every_round_sums_to_one() {
        let g = graph(6, true, &[(0, 1), (1, 2), (2, 0), (3, 2), (4, 3)]);
        for r in pagerank_scores(&g) {
            assert!((r.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }
}
