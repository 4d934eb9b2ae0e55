//! Reasoning traces.
//!
//! Solvers emit structured [`Step`]s. Each step maps to one sentence from
//! the step template table (`data/step_templates.txt`); rendering fills the
//! node slots with presentation labels and records the byte range of every
//! label it writes, which is what the mask annotator keys on.

use std::collections::HashMap;
use std::sync::LazyLock;

use crate::gdl::NodeLabels;

static STEP_TEMPLATES_SRC: &str = include_str!("../data/step_templates.txt");

/// Parses a `key = text` table, skipping blank lines and `#` comments.
pub(crate) fn parse_table(src: &str) -> HashMap<String, String> {
    src.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .filter_map(|l| l.split_once(" = "))
        .map(|(k, v)| (k.trim().to_string(), v.to_string()))
        .collect()
}

static STEP_TEMPLATES: LazyLock<HashMap<String, String>> = LazyLock::new(|| parse_table(STEP_TEMPLATES_SRC));

/// A label occurrence inside rendered text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeRef {
    pub node: usize,
    pub start: usize,
    pub end: usize,
}

/// Text plus the byte ranges where node labels were written.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabeledText {
    pub text: String,
    pub nodes: Vec<NodeRef>,
}

impl LabeledText {
    pub fn push_str(&mut self, s: &str) {
        self.text.push_str(s);
    }

    pub fn push_node(&mut self, node: usize, labels: &NodeLabels) {
        let start = self.text.len();
        self.text.push_str(labels.get(node));
        self.nodes.push(NodeRef { node, start, end: self.text.len() });
    }

    pub fn push_node_list(&mut self, nodes: &[usize], sep: &str, labels: &NodeLabels) {
        for (i, &n) in nodes.iter().enumerate() {
            if i > 0 {
                self.push_str(sep);
            }
            self.push_node(n, labels);
        }
    }

    pub fn append(&mut self, other: LabeledText) {
        let shift = self.text.len();
        self.text.push_str(&other.text);
        self.nodes.extend(other.nodes.into_iter().map(|r| NodeRef { start: r.start + shift, end: r.end + shift, ..r }));
    }
}

pub(crate) fn fmt_float(x: f64) -> String {
    format!("{x:.4}")
}

/// One structured reasoning step. Variants are grouped by the algorithm
/// that emits them.
#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    // local structure
    Neighbors { node: usize, list: Vec<usize>, directed: bool },
    Predecessors { node: usize, list: Vec<usize> },
    Degree { node: usize, degree: usize },
    EdgeCheck { u: usize, v: usize, present: bool },
    Common { u: usize, v: usize, list: Vec<usize> },
    Union { list: Vec<usize> },
    Jaccard { inter: usize, union: usize },
    Link { a: usize, b: usize, directed: bool },
    Clustering { node: usize, links: usize, degree: usize, directed: bool },
    // PageRank
    PageRankSetup { n: usize, iterations: usize, damping: f64 },
    PageRankRound { round: usize, scores: Vec<f64> },
    PageRankPick { node: usize, score: f64 },
    // Dijkstra
    DistanceGoal { from: usize, to: usize },
    Settle { node: usize, dist: u64 },
    Relax { from: usize, to: usize, dist: u64 },
    // reachability and traversals
    ReachGoal { from: usize, to: usize },
    Visit { node: usize },
    ReachVerdict { from: usize, to: usize, reached: bool },
    TraversalStart { node: usize, breadth: bool },
    Backtrack { from: usize, to: usize },
    Dequeue { node: usize },
    Enqueue { node: usize },
    ComponentStart { node: usize },
    // max flow
    FlowGoal { from: usize, to: usize },
    Augment { path: Vec<usize>, amount: u64 },
    FlowTotal { value: u64 },
    // cycles
    ComponentSummary { nodes: Vec<usize>, edges: usize },
    CycleVerdict { found: bool },
    BackEdge { from: usize, to: usize },
    Finish { node: usize },
    NoBackEdge,
    // diameter
    Eccentricity { node: usize, farthest: usize, dist: usize },
    Diameter { value: usize },
    // bipartite matching
    MatchParts { left: Vec<usize> },
    MatchAugment { path: Vec<usize> },
    MatchFail { node: usize },
    MatchSize { size: usize },
    // topological sort
    InDegrees { degrees: Vec<usize> },
    Emit { node: usize },
    Decrement { node: usize, indegree: usize },
    // minimum spanning tree
    MstEdge { u: usize, v: usize, weight: u32, kept: bool },
    MstTotal { value: u64 },
    // Euler path
    EulerStart { node: usize },
    EulerWalk { from: usize, to: usize },
    EulerPop { node: usize },
    // Hamiltonian path
    HamStart { node: usize },
    HamExtend { node: usize },
    HamRetreat { node: usize },
    HamDone,
}

enum Arg {
    Node(usize),
    Nodes(Vec<usize>),
    Path(Vec<usize>),
    Scores(Vec<(usize, String)>),
    Value(String),
}

fn val(x: impl ToString) -> Arg {
    Arg::Value(x.to_string())
}

impl Step {
    fn template(&self) -> (&'static str, Vec<(&'static str, Arg)>) {
        use Arg::*;
        use Step::*;
        match self {
            Neighbors { node, list, directed } => {
                let key = match (directed, list.is_empty()) {
                    (false, false) => "neighbors",
                    (false, true) => "neighbors_none",
                    (true, false) => "successors",
                    (true, true) => "successors_none",
                };
                (key, vec![("u", Node(*node)), ("nodes", Nodes(list.clone()))])
            }
            Predecessors { node, list } => {
                let key = if list.is_empty() { "predecessors_none" } else { "predecessors" };
                (key, vec![("u", Node(*node)), ("nodes", Nodes(list.clone()))])
            }
            Degree { node, degree } => ("degree", vec![("u", Node(*node)), ("x", val(degree))]),
            EdgeCheck { u, v, present } => {
                (if *present { "edge_yes" } else { "edge_no" }, vec![("u", Node(*u)), ("v", Node(*v))])
            }
            Common { u, v, list } => {
                let key = if list.is_empty() { "common_none" } else { "common" };
                (key, vec![("u", Node(*u)), ("v", Node(*v)), ("nodes", Nodes(list.clone())), ("x", val(list.len()))])
            }
            Union { list } => {
                let key = if list.is_empty() { "union_none" } else { "union" };
                (key, vec![("nodes", Nodes(list.clone())), ("x", val(list.len()))])
            }
            Jaccard { inter, union } => {
                if *union == 0 {
                    ("jaccard_empty", vec![])
                } else {
                    let z = fmt_float(*inter as f64 / *union as f64);
                    ("jaccard", vec![("x", val(inter)), ("y", val(union)), ("z", Value(z))])
                }
            }
            Link { a, b, directed } => {
                (if *directed { "link_directed" } else { "link" }, vec![("u", Node(*a)), ("v", Node(*b))])
            }
            Clustering { node, links, degree, directed } => {
                if *degree <= 1 {
                    ("clustering_degenerate", vec![("u", Node(*node))])
                } else {
                    let value = clustering_value(*links, *degree, *directed);
                    let key = if *directed { "clustering_directed" } else { "clustering" };
                    (key, vec![("x", val(links)), ("y", val(degree)), ("z", Value(fmt_float(value)))])
                }
            }
            PageRankSetup { n, iterations, damping } => (
                "pagerank_setup",
                vec![
                    ("x", val(n)),
                    ("y", Value(fmt_float(1.0 / *n as f64))),
                    ("z", val(iterations)),
                    ("w", val(damping)),
                ],
            ),
            PageRankRound { round, scores } => (
                "pagerank_round",
                vec![
                    ("x", val(round)),
                    ("scores", Scores(scores.iter().enumerate().map(|(i, s)| (i, fmt_float(*s))).collect())),
                ],
            ),
            PageRankPick { node, score } => {
                ("pagerank_pick", vec![("u", Node(*node)), ("x", Value(fmt_float(*score)))])
            }
            DistanceGoal { from, to } => ("distance_goal", vec![("u", Node(*from)), ("v", Node(*to))]),
            Settle { node, dist } => ("settle", vec![("u", Node(*node)), ("x", val(dist))]),
            Relax { from, to, dist } => ("relax", vec![("u", Node(*from)), ("v", Node(*to)), ("x", val(dist))]),
            ReachGoal { from, to } => ("reach_goal", vec![("u", Node(*from)), ("v", Node(*to))]),
            Visit { node } => ("visit", vec![("u", Node(*node))]),
            ReachVerdict { from, to, reached } => {
                (if *reached { "reach_yes" } else { "reach_no" }, vec![("u", Node(*from)), ("v", Node(*to))])
            }
            TraversalStart { node, breadth } => {
                (if *breadth { "bfs_start" } else { "dfs_start" }, vec![("u", Node(*node))])
            }
            Backtrack { from, to } => ("backtrack", vec![("u", Node(*from)), ("v", Node(*to))]),
            Dequeue { node } => ("dequeue", vec![("u", Node(*node))]),
            Enqueue { node } => ("enqueue", vec![("u", Node(*node))]),
            ComponentStart { node } => ("component_start", vec![("u", Node(*node))]),
            FlowGoal { from, to } => ("flow_goal", vec![("u", Node(*from)), ("v", Node(*to))]),
            Augment { path, amount } => ("augment", vec![("path", Path(path.clone())), ("x", val(amount))]),
            FlowTotal { value } => ("flow_total", vec![("x", val(value))]),
            ComponentSummary { nodes, edges } => {
                ("component_summary", vec![("nodes", Nodes(nodes.clone())), ("x", val(nodes.len())), ("y", val(edges))])
            }
            CycleVerdict { found } => (if *found { "cycle_yes" } else { "cycle_no" }, vec![]),
            BackEdge { from, to } => ("back_edge", vec![("u", Node(*from)), ("v", Node(*to))]),
            Finish { node } => ("finish", vec![("u", Node(*node))]),
            NoBackEdge => ("no_back_edge", vec![]),
            Eccentricity { node, farthest, dist } => {
                ("eccentricity", vec![("u", Node(*node)), ("v", Node(*farthest)), ("x", val(dist))])
            }
            Diameter { value } => ("diameter", vec![("x", val(value))]),
            MatchParts { left } => ("match_parts", vec![("nodes", Nodes(left.clone()))]),
            MatchAugment { path } => ("match_augment", vec![("path", Path(path.clone()))]),
            MatchFail { node } => ("match_fail", vec![("u", Node(*node))]),
            MatchSize { size } => ("match_size", vec![("x", val(size))]),
            InDegrees { degrees } => (
                "indegrees",
                vec![("scores", Scores(degrees.iter().enumerate().map(|(i, d)| (i, d.to_string())).collect()))],
            ),
            Emit { node } => ("emit", vec![("u", Node(*node))]),
            Decrement { node, indegree } => ("decrement", vec![("u", Node(*node)), ("x", val(indegree))]),
            MstEdge { u, v, weight, kept } => (
                if *kept { "mst_keep" } else { "mst_skip" },
                vec![("u", Node(*u)), ("v", Node(*v)), ("x", val(weight))],
            ),
            MstTotal { value } => ("mst_total", vec![("x", val(value))]),
            EulerStart { node } => ("euler_start", vec![("u", Node(*node))]),
            EulerWalk { from, to } => ("euler_walk", vec![("u", Node(*from)), ("v", Node(*to))]),
            EulerPop { node } => ("euler_pop", vec![("u", Node(*node))]),
            HamStart { node } => ("ham_start", vec![("u", Node(*node))]),
            HamExtend { node } => ("ham_extend", vec![("u", Node(*node))]),
            HamRetreat { node } => ("ham_retreat", vec![("u", Node(*node))]),
            HamDone => ("ham_done", vec![]),
        }
    }

    /// Template key of this step.
    pub fn key(&self) -> &'static str {
        self.template().0
    }

    /// Renders the step sentence with labels substituted.
    pub fn render(&self, labels: &NodeLabels) -> LabeledText {
        let (key, args) = self.template();
        let template =
            STEP_TEMPLATES.get(key).unwrap_or_else(|| panic!("step template '{key}' missing from the template table"));
        let args: HashMap<&str, Arg> = args.into_iter().collect();
        fill(template, &args, labels)
    }
}

pub(crate) fn clustering_value(links: usize, degree: usize, directed: bool) -> f64 {
    if degree <= 1 {
        return 0.0;
    }
    let pairs = (degree * (degree - 1)) as f64;
    if directed {
        links as f64 / pairs
    } else {
        (2 * links) as f64 / pairs
    }
}

fn fill(template: &str, args: &HashMap<&str, Arg>, labels: &NodeLabels) -> LabeledText {
    let mut out = LabeledText::default();
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let close = rest[open..].find('}').map(|c| open + c).expect("unterminated slot in step template");
        let name = &rest[open + 1..close];
        match args.get(name) {
            Some(Arg::Node(n)) => out.push_node(*n, labels),
            Some(Arg::Nodes(ns)) => out.push_node_list(ns, ", ", labels),
            Some(Arg::Path(ns)) => out.push_node_list(ns, " -> ", labels),
            Some(Arg::Scores(pairs)) => {
                for (i, (n, s)) in pairs.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    out.push_str("node ");
                    out.push_node(*n, labels);
                    out.push_str(" ");
                    out.push_str(s);
                }
            }
            Some(Arg::Value(s)) => out.push_str(s),
            None => panic!("step template slot '{{{name}}}' has no argument"),
        }
        rest = &rest[close + 1..];
    }
    out.push_str(rest);
    out
}

/// Ordered steps emitted by a solver.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReasoningTrace {
    pub steps: Vec<Step>,
}

/// A rendered step: its template text and the label occurrences it produced,
/// with offsets into [`RenderedTrace::final_text`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    pub template_text: String,
    pub referenced_nodes: Vec<NodeRef>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderedTrace {
    pub records: Vec<StepRecord>,
    pub final_text: String,
}

impl RenderedTrace {
    /// All label occurrences across the trace, in text order.
    pub fn node_refs(&self) -> impl Iterator<Item = &NodeRef> {
        self.records.iter().flat_map(|r| r.referenced_nodes.iter())
    }

    pub fn to_labeled(&self) -> LabeledText {
        LabeledText { text: self.final_text.clone(), nodes: self.node_refs().copied().collect() }
    }
}

impl ReasoningTrace {
    pub fn push(&mut self, step: Step) {
        self.steps.push(step);
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Renders steps one per line.
    pub fn render(&self, labels: &NodeLabels) -> RenderedTrace {
        let mut text = LabeledText::default();
        let mut records = Vec::with_capacity(self.steps.len());
        for (i, step) in self.steps.iter().enumerate() {
            if i > 0 {
                text.push_str("\n");
            }
            let before = text.nodes.len();
            text.append(step.render(labels));
            records.push(StepRecord {
                template_text: STEP_TEMPLATES[step.key()].clone(),
                referenced_nodes: text.nodes[before..].to_vec(),
            });
        }
        RenderedTrace { records, final_text: text.text }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_step_key_has_a_template() {
        let steps = [
            Step::Neighbors { node: 0, list: vec![], directed: false },
            Step::Neighbors { node: 0, list: vec![1], directed: true },
            Step::Clustering { node: 0, links: 1, degree: 3, directed: false },
            Step::PageRankSetup { n: 4, iterations: 3, damping: 0.85 },
            Step::HamDone,
            Step::NoBackEdge,
        ];
        for s in steps {
            assert!(STEP_TEMPLATES.contains_key(s.key()), "{}", s.key());
        }
    }

    #[test]
    fn visit_sentence_and_offsets() {
        let labels = NodeLabels::integer(4);
        let t = Step::Visit { node: 3 }.render(&labels);
        assert_eq!(t.text, "Visit node 3.");
        assert_eq!(t.nodes, vec![NodeRef { node: 3, start: 11, end: 12 }]);
    }

    #[test]
    fn offsets_point_at_labels_across_lines() {
        let labels = NodeLabels::new(vec!["XRT".into(), "ABQ".into(), "MMN".into()]).unwrap();
        let trace = ReasoningTrace {
            steps: vec![
                Step::TraversalStart { node: 0, breadth: false },
                Step::Visit { node: 0 },
                Step::Augment { path: vec![0, 2, 1], amount: 3 },
                Step::PageRankRound { round: 1, scores: vec![0.2, 0.3, 0.5] },
            ],
        };
        let r = trace.render(&labels);
        for n in r.node_refs() {
            assert_eq!(&r.final_text[n.start..n.end], labels.get(n.node));
        }
        assert_eq!(r.node_refs().count(), 1 + 1 + 3 + 3);
        assert!(r.final_text.contains("Augment along XRT -> MMN -> ABQ by 3."));
    }

    #[test]
    fn pagerank_setup_states_constants() {
        let t = Step::PageRankSetup { n: 4, iterations: 3, damping: 0.85 }.render(&NodeLabels::integer(4));
        assert!(t.text.contains("1/4 = 0.2500"));
        assert!(t.text.contains("Run 3 rounds with damping factor 0.85"));
    }
}
