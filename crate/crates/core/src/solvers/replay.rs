//! Recomputes a task's answer from its trace alone.
//!
//! The interpreter never looks at the graph, so agreement with the solver
//! shows that the steps carry enough information to reach the answer.

use std::collections::BTreeSet;

use super::matching::{apply_augmenting_path, matching_edges};
use super::pagerank::argmax_lowest;
use crate::answer::Answer;
use crate::task::TaskKind;
use crate::trace::{clustering_value, ReasoningTrace, Step};

fn neighbor_lists(trace: &ReasoningTrace) -> Vec<&[usize]> {
    trace
        .steps
        .iter()
        .filter_map(|s| match s {
            Step::Neighbors { list, .. } => Some(list.as_slice()),
            _ => None,
        })
        .collect()
}

fn two_lists(trace: &ReasoningTrace) -> Result<(BTreeSet<usize>, BTreeSet<usize>), String> {
    match neighbor_lists(trace)[..] {
        [a, b] => Ok((a.iter().copied().collect(), b.iter().copied().collect())),
        _ => Err("expected two neighbor listings".into()),
    }
}

pub fn replay(kind: TaskKind, trace: &ReasoningTrace) -> Result<Answer, String> {
    use TaskKind::*;
    let steps = &trace.steps;
    let missing = |what: &str| format!("trace has no {what} step");
    match kind {
        Neighbor => {
            neighbor_lists(trace).first().map(|l| Answer::node_set(l.to_vec())).ok_or_else(|| missing("neighbors"))
        }
        Degree => {
            neighbor_lists(trace).first().map(|l| Answer::Int(l.len() as i64)).ok_or_else(|| missing("neighbors"))
        }
        Predecessor => steps
            .iter()
            .find_map(|s| match s {
                Step::Predecessors { list, .. } => Some(Answer::node_set(list.clone())),
                _ => None,
            })
            .ok_or_else(|| missing("predecessors")),
        Edge => {
            let check = steps.iter().find_map(|s| match s {
                Step::EdgeCheck { v, .. } => Some(*v),
                _ => None,
            });
            let v = check.ok_or_else(|| missing("edge check"))?;
            let list = neighbor_lists(trace).first().copied().ok_or_else(|| missing("neighbors"))?;
            Ok(Answer::Bool(list.contains(&v)))
        }
        CommonNeighbor => {
            let (a, b) = two_lists(trace)?;
            Ok(Answer::Int(a.intersection(&b).count() as i64))
        }
        Jaccard => {
            let (a, b) = two_lists(trace)?;
            let union = a.union(&b).count();
            let inter = a.intersection(&b).count();
            Ok(Answer::Float(if union == 0 { 0.0 } else { inter as f64 / union as f64 }))
        }
        ClusteringCoefficient => {
            let list = neighbor_lists(trace).first().copied().ok_or_else(|| missing("neighbors"))?;
            let directed = steps.iter().any(|s| matches!(s, Step::Neighbors { directed: true, .. }));
            let links = steps.iter().filter(|s| matches!(s, Step::Link { .. })).count();
            Ok(Answer::Float(clustering_value(links, list.len(), directed)))
        }
        PageRank => steps
            .iter()
            .rev()
            .find_map(|s| match s {
                Step::PageRankRound { scores, .. } if !scores.is_empty() => Some(Answer::Node(argmax_lowest(scores))),
                _ => None,
            })
            .ok_or_else(|| missing("pagerank round")),
        ShortestPath => {
            let target = steps.iter().find_map(|s| match s {
                Step::DistanceGoal { to, .. } => Some(*to),
                _ => None,
            });
            let target = target.ok_or_else(|| missing("distance goal"))?;
            steps
                .iter()
                .find_map(|s| match s {
                    Step::Settle { node, dist } if *node == target => Some(Answer::Int(*dist as i64)),
                    _ => None,
                })
                .ok_or_else(|| "target was never settled".to_string())
        }
        Connectivity => {
            let target = steps.iter().find_map(|s| match s {
                Step::ReachGoal { to, .. } => Some(*to),
                _ => None,
            });
            let target = target.ok_or_else(|| missing("reach goal"))?;
            Ok(Answer::Bool(steps.iter().any(|s| matches!(s, Step::Visit { node } if *node == target))))
        }
        MaximumFlow => Ok(Answer::Int(
            steps
                .iter()
                .map(|s| match s {
                    Step::Augment { amount, .. } => *amount as i64,
                    _ => 0,
                })
                .sum(),
        )),
        Dfs => Ok(Answer::NodeList(
            steps
                .iter()
                .filter_map(|s| match s {
                    Step::Visit { node } => Some(*node),
                    _ => None,
                })
                .collect(),
        )),
        Bfs => Ok(Answer::NodeList(
            steps
                .iter()
                .filter_map(|s| match s {
                    Step::TraversalStart { node, .. } | Step::Enqueue { node } => Some(*node),
                    _ => None,
                })
                .collect(),
        )),
        Cycle => Ok(Answer::Bool(steps.iter().any(|s| match s {
            Step::BackEdge { .. } => true,
            Step::ComponentSummary { nodes, edges } => *edges >= nodes.len(),
            _ => false,
        }))),
        ConnectedComponent => Ok(Answer::node_set(
            steps
                .iter()
                .filter_map(|s| match s {
                    Step::Visit { node } => Some(*node),
                    _ => None,
                })
                .collect(),
        )),
        Diameter => steps
            .iter()
            .filter_map(|s| match s {
                Step::Eccentricity { dist, .. } => Some(*dist as i64),
                _ => None,
            })
            .max()
            .map(Answer::Int)
            .ok_or_else(|| missing("eccentricity")),
        Bipartite => {
            let paths: Vec<&Vec<usize>> = steps
                .iter()
                .filter_map(|s| match s {
                    Step::MatchAugment { path } => Some(path),
                    _ => None,
                })
                .collect();
            let n = paths.iter().flat_map(|p| p.iter()).max().map_or(0, |m| m + 1);
            let mut match_of_right = vec![None; n];
            for p in paths {
                apply_augmenting_path(&mut match_of_right, p);
            }
            Ok(Answer::EdgeList(matching_edges(&match_of_right)))
        }
        TopologicalSort => Ok(Answer::NodeList(
            steps
                .iter()
                .filter_map(|s| match s {
                    Step::Emit { node } => Some(*node),
                    _ => None,
                })
                .collect(),
        )),
        Mst => Ok(Answer::Int(
            steps
                .iter()
                .map(|s| match s {
                    Step::MstEdge { weight, kept: true, .. } => i64::from(*weight),
                    _ => 0,
                })
                .sum(),
        )),
        EulerPath => {
            let mut path: Vec<usize> = steps
                .iter()
                .filter_map(|s| match s {
                    Step::EulerPop { node } => Some(*node),
                    _ => None,
                })
                .collect();
            path.reverse();
            Ok(Answer::NodeList(path))
        }
        HamiltonianPath => {
            let mut path = Vec::new();
            for s in steps {
                match s {
                    Step::HamStart { node } => path = vec![*node],
                    Step::HamExtend { node } => path.push(*node),
                    Step::HamRetreat { node } => {
                        if path.pop() != Some(*node) {
                            return Err(format!("retreat from node {node} which is not the path end"));
                        }
                    }
                    Step::HamDone => return Ok(Answer::NodeList(path)),
                    _ => {}
                }
            }
            Err(missing("completion"))
        }
    }
}
