//! Node labels and graph description languages.
//!
//! Three text forms are produced, all listing nodes and neighbors in
//! internal index order so that integer and letter labelings of the same
//! graph line up line by line:
//!
//! ```text
//! EdgeList           AdjacencyTable     AdjacencyNL
//! nodes: 0, 1, 2     0: 1, 2            This is an undirected graph with 3 nodes.
//! (0, 1)             1: 0, 2            Node 0 is connected to nodes 1, 2.
//! (0, 2, 4)          2: 0, 1            ...
//! ```
//!
//! [`render`] emits the bare body. [`describe`] prefixes the body with a
//! sentence naming directedness and node count (AdjacencyNL already carries
//! it), and is what prompts and dataset files embed.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use regex::Regex;
use serde::{Deserialize, Serialize};
use std::sync::LazyLock;
use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelScheme {
    #[default]
    IntegerId,
    RandomLetters,
}

impl LabelScheme {
    pub fn as_str(self) -> &'static str {
        match self {
            LabelScheme::IntegerId => "integer_id",
            LabelScheme::RandomLetters => "random_letters",
        }
    }
}

impl fmt::Display for LabelScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LabelScheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "integer_id" | "integer" | "int" => Ok(LabelScheme::IntegerId),
            "random_letters" | "letters" => Ok(LabelScheme::RandomLetters),
            other => Err(format!("unknown node id scheme '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GdlKind {
    EdgeList,
    AdjacencyTable,
    #[default]
    AdjacencyNl,
}

impl GdlKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GdlKind::EdgeList => "edge_list",
            GdlKind::AdjacencyTable => "adjacency_table",
            GdlKind::AdjacencyNl => "adjacency_nl",
        }
    }
}

impl fmt::Display for GdlKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GdlKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "edge_list" | "edgelist" => Ok(GdlKind::EdgeList),
            "adjacency_table" | "adj" | "table" => Ok(GdlKind::AdjacencyTable),
            "adjacency_nl" | "nl" | "natural" => Ok(GdlKind::AdjacencyNl),
            other => Err(format!("unknown graph description language '{other}'")),
        }
    }
}

/// Presentation labels, one per node index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeLabels {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl NodeLabels {
    pub fn new(labels: Vec<String>) -> Result<Self, String> {
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(format!("duplicate node label '{l}'"));
            }
        }
        Ok(Self { labels, index })
    }

    pub fn integer(n: usize) -> Self {
        Self::new((0..n).map(|i| i.to_string()).collect()).expect("integers are unique")
    }

    pub fn get(&self, node: usize) -> &str {
        &self.labels[node]
    }

    /// Resolves a label, falling back to a case-insensitive match.
    pub fn resolve(&self, label: &str) -> Option<usize> {
        let label = label.trim();
        self.index.get(label).or_else(|| self.index.get(&label.to_ascii_uppercase())).copied()
    }

    /// Case-sensitive lookup with no trimming.
    pub fn lookup(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn as_slice(&self) -> &[String] {
        &self.labels
    }
}

/// Draws `n` labels under `scheme`. Letter labels are three uppercase
/// characters, unique within the graph.
pub fn assign_node_labels(n: usize, scheme: LabelScheme, rng: &mut impl Rng) -> NodeLabels {
    match scheme {
        LabelScheme::IntegerId => NodeLabels::integer(n),
        LabelScheme::RandomLetters => {
            let mut seen = HashSet::with_capacity(n);
            let mut labels = Vec::with_capacity(n);
            while labels.len() < n {
                let label: String = (0..3).map(|_| char::from(b'A' + rng.gen_range(0..26u8))).collect();
                if seen.insert(label.clone()) {
                    labels.push(label);
                }
            }
            NodeLabels::new(labels).expect("uniqueness enforced above")
        }
    }
}

/// Sentence naming directedness and node count.
pub fn preamble(graph: &Graph) -> String {
    let kind = if graph.is_directed() { "a directed" } else { "an undirected" };
    format!("This is {kind} graph with {} nodes.", graph.node_count())
}

fn neighbor_item(graph: &Graph, labels: &NodeLabels, u: usize, v: usize, nl: bool) -> String {
    match graph.weight(u, v) {
        Some(w) if nl => format!("{} (weight {w})", labels.get(v)),
        Some(w) => format!("{} ({w})", labels.get(v)),
        None => labels.get(v).to_string(),
    }
}

/// Renders the bare description body.
pub fn render(graph: &Graph, labels: &NodeLabels, kind: GdlKind) -> String {
    assert_eq!(labels.len(), graph.node_count(), "one label per node");
    let n = graph.node_count();
    let mut lines: Vec<String> = Vec::new();
    match kind {
        GdlKind::EdgeList => {
            let roster: Vec<&str> = (0..n).map(|i| labels.get(i)).collect();
            lines.push(format!("nodes: {}", roster.join(", ")));
            for (u, v, w) in graph.edges() {
                lines.push(match w {
                    Some(w) => format!("({}, {}, {w})", labels.get(u), labels.get(v)),
                    None => format!("({}, {})", labels.get(u), labels.get(v)),
                });
            }
        }
        GdlKind::AdjacencyTable => {
            for u in 0..n {
                let items: Vec<String> =
                    graph.neighbors(u).iter().map(|&v| neighbor_item(graph, labels, u, v, false)).collect();
                if items.is_empty() {
                    lines.push(format!("{}:", labels.get(u)));
                } else {
                    lines.push(format!("{}: {}", labels.get(u), items.join(", ")));
                }
            }
        }
        GdlKind::AdjacencyNl => {
            lines.push(preamble(graph));
            for u in 0..n {
                let items: Vec<String> =
                    graph.neighbors(u).iter().map(|&v| neighbor_item(graph, labels, u, v, true)).collect();
                let label = labels.get(u);
                lines.push(match (graph.is_directed(), items.is_empty()) {
                    (false, false) => format!("Node {label} is connected to nodes {}.", items.join(", ")),
                    (true, false) => format!("Node {label} points to nodes {}.", items.join(", ")),
                    (false, true) => format!("Node {label} is not connected to any other nodes."),
                    (true, true) => format!("Node {label} does not point to any nodes."),
                });
            }
        }
    }
    lines.join("\n")
}

/// Body plus directedness/size sentence.
pub fn describe(graph: &Graph, labels: &NodeLabels, kind: GdlKind) -> String {
    match kind {
        GdlKind::AdjacencyNl => render(graph, labels, kind),
        _ => format!("{}\n{}", preamble(graph), render(graph, labels, kind)),
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

static PREAMBLE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^This is an? (directed|undirected) graph with (\d+) nodes\.$").unwrap());
static EDGE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\(([^,()\s]+), ([^,()\s]+)(?:, (\d+))?\)$").unwrap());

/// Parses edge-list text (optionally preceded by the [`preamble`] line) back
/// into a graph and its labels. Without a preamble the graph is undirected.
pub fn parse_edge_list_labeled(text: &str) -> Result<(Graph, NodeLabels), ParseError> {
    let err = |line: usize, message: String| ParseError { line, message };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end())).peekable();
    let mut directed = false;
    let mut declared_n = None;
    if let Some(&(no, first)) = lines.peek() {
        if let Some(c) = PREAMBLE.captures(first) {
            directed = &c[1] == "directed";
            declared_n = Some(c[2].parse::<usize>().map_err(|e| err(no, e.to_string()))?);
            lines.next();
        }
    }
    let (no, roster) = lines.next().ok_or_else(|| err(1, "missing 'nodes:' line".into()))?;
    let roster =
        roster.strip_prefix("nodes:").ok_or_else(|| err(no, format!("expected 'nodes: ...', found '{roster}'")))?;
    let names: Vec<String> = roster.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
    if names.is_empty() {
        return Err(err(no, "empty node roster".into()));
    }
    if declared_n.is_some_and(|d| d != names.len()) {
        return Err(err(no, "node roster disagrees with the declared node count".into()));
    }
    let labels = NodeLabels::new(names).map_err(|m| err(no, m))?;

    let mut parsed = Vec::new();
    for (no, line) in lines {
        if line.is_empty() {
            continue;
        }
        let c = EDGE.captures(line).ok_or_else(|| err(no, format!("malformed edge '{line}'")))?;
        let lookup = |s: &str| labels.resolve(s).ok_or_else(|| err(no, format!("unknown node '{s}'")));
        let u = lookup(&c[1])?;
        let v = lookup(&c[2])?;
        let w = match c.get(3) {
            Some(m) => Some(m.as_str().parse::<u32>().map_err(|e| err(no, e.to_string()))?),
            None => None,
        };
        parsed.push((no, u, v, w));
    }
    let weighted = parsed.first().is_some_and(|e| e.3.is_some());
    let mut graph =
        if weighted { Graph::new_weighted(labels.len(), directed) } else { Graph::new(labels.len(), directed) };
    for (no, u, v, w) in parsed {
        graph.add_edge(u, v, w).map_err(|e: GraphError| err(no, e.to_string()))?;
    }
    Ok((graph, labels))
}

pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    parse_edge_list_labeled(text).map(|(g, _)| g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn triangle() -> Graph {
        let mut g = Graph::new(3, false);
        g.add_edge(0, 1, None).unwrap();
        g.add_edge(0, 2, None).unwrap();
        g.add_edge(1, 2, None).unwrap();
        g
    }

    #[test]
    fn integer_labels() {
        let labels = assign_node_labels(3, LabelScheme::IntegerId, &mut ChaCha8Rng::seed_from_u64(0));
        assert_eq!(labels.as_slice(), &["0", "1", "2"]);
    }

    #[test]
    fn letter_labels_are_unique_and_deterministic() {
        let a = assign_node_labels(35, LabelScheme::RandomLetters, &mut ChaCha8Rng::seed_from_u64(4));
        let b = assign_node_labels(35, LabelScheme::RandomLetters, &mut ChaCha8Rng::seed_from_u64(4));
        assert_eq!(a, b);
        let set: HashSet<&String> = a.as_slice().iter().collect();
        assert_eq!(set.len(), 35);
        assert!(a.as_slice().iter().all(|l| l.len() == 3 && l.bytes().all(|c| c.is_ascii_uppercase())));
    }

    #[test]
    fn adjacency_table_triangle() {
        let g = triangle();
        assert_eq!(render(&g, &NodeLabels::integer(3), GdlKind::AdjacencyTable), "0: 1, 2\n1: 0, 2\n2: 0, 1");
    }

    #[test]
    fn edge_list_single_directed_edge() {
        let mut g = Graph::new(2, true);
        g.add_edge(0, 1, None).unwrap();
        assert_eq!(render(&g, &NodeLabels::integer(2), GdlKind::EdgeList), "nodes: 0, 1\n(0, 1)");
    }

    #[test]
    fn edge_list_weighted_edge() {
        let mut g = Graph::new_weighted(2, false);
        g.add_edge(0, 1, Some(4)).unwrap();
        let text = render(&g, &NodeLabels::integer(2), GdlKind::EdgeList);
        assert_eq!(text.lines().nth(1), Some("(0, 1, 4)"));
        let back = parse_edge_list(&text).unwrap();
        assert_eq!(back.weight(0, 1), Some(4));
    }

    #[test]
    fn natural_language_form() {
        let mut g = Graph::new(3, true);
        g.add_edge(0, 1, None).unwrap();
        g.add_edge(0, 2, None).unwrap();
        let text = render(&g, &NodeLabels::integer(3), GdlKind::AdjacencyNl);
        assert_eq!(
            text,
            "This is a directed graph with 3 nodes.\nNode 0 points to nodes 1, 2.\n\
             Node 1 does not point to any nodes.\nNode 2 does not point to any nodes."
        );
    }

    #[test]
    fn malformed_edge_is_rejected_with_line_number() {
        let e = parse_edge_list("nodes: 0, 1\n(0 1)").unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn described_edge_list_keeps_directedness() {
        let mut g = Graph::new(3, true);
        g.add_edge(2, 0, None).unwrap();
        let labels = assign_node_labels(3, LabelScheme::RandomLetters, &mut ChaCha8Rng::seed_from_u64(1));
        let (back, back_labels) = parse_edge_list_labeled(&describe(&g, &labels, GdlKind::EdgeList)).unwrap();
        assert_eq!(back, g);
        assert_eq!(back_labels, labels);
    }
}
