//! Answer extraction, judging and accuracy reports.
//!
//! Model outputs are expected to end with `### Answer: <value>`. When the
//! marker is missing the extractor falls back to the last literal of the
//! expected shape anywhere in the text.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::LazyLock;

use rayon::prelude::*;
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::answer::Answer;
use crate::dataset::SampleRecord;
use crate::gdl::NodeLabels;
use crate::generate::SizeClass;
use crate::graph::Graph;
use crate::task::{AnswerShape, QueryArgs, TaskKind};

pub const ANSWER_MARKER: &str = "### Answer:";

/// Largest accepted relative error for float answers.
pub const FLOAT_TOLERANCE: f64 = 0.03;
const TOLERANCE_SLACK: f64 = 1e-12;

static BOOL_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)\b(yes|no|true|false)\b").unwrap());
static NUMBER_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"[-+]?\d+(?:\.\d+)?(?:[eE][-+]?\d+)?").unwrap());
static TOKEN_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"[A-Za-z0-9_]+").unwrap());
static LIST_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\[[^\[\]]*\]").unwrap());
static EDGE_LIST_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\[\s*(?:\([^()\[\]]*\)\s*,?\s*)*\]").unwrap());
static PAIR_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\(([^(),]*),([^(),]*)\)").unwrap());

#[derive(Debug, Clone, PartialEq)]
pub enum ParsedAnswer {
    Answer(Answer),
    Unparseable(String),
}

impl ParsedAnswer {
    pub fn is_parsed(&self) -> bool {
        matches!(self, ParsedAnswer::Answer(_))
    }
}

fn clean(s: &str) -> &str {
    s.trim().trim_matches(|c| matches!(c, '*' | '`' | '"' | '\'')).trim().trim_end_matches('.').trim()
}

fn parse_bool(s: &str) -> Option<bool> {
    match s.to_ascii_lowercase().as_str() {
        "yes" | "true" => Some(true),
        "no" | "false" => Some(false),
        _ => None,
    }
}

fn parse_number(s: &str) -> Option<f64> {
    NUMBER_RE.find(s).filter(|m| m.as_str().len() == s.len()).and_then(|m| m.as_str().parse().ok())
}

fn parse_int(s: &str) -> Option<i64> {
    s.parse().ok().or_else(|| parse_number(s).filter(|x| x.fract() == 0.0 && x.abs() < 1e15).map(|x| x as i64))
}

fn strip_brackets(s: &str) -> &str {
    let s = s.trim();
    for (open, close) in [('[', ']'), ('{', '}'), ('(', ')')] {
        if let Some(inner) = s.strip_prefix(open).and_then(|r| r.strip_suffix(close)) {
            return inner.trim();
        }
    }
    s
}

fn parse_nodes(s: &str, labels: &NodeLabels) -> Option<Vec<usize>> {
    let inner = strip_brackets(s);
    if inner.is_empty() {
        return Some(Vec::new());
    }
    inner.split(',').map(|t| labels.resolve(clean(t))).collect()
}

fn parse_edges(s: &str, labels: &NodeLabels) -> Option<Vec<(usize, usize)>> {
    let s = s.trim();
    let inner = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')).unwrap_or(s).trim();
    let mut edges = Vec::new();
    let mut rest = inner;
    while !rest.is_empty() {
        let caps = PAIR_RE.captures(rest)?;
        let whole = caps.get(0).expect("group 0");
        if !rest[..whole.start()].trim().is_empty() {
            return None;
        }
        edges.push((labels.resolve(&caps[1])?, labels.resolve(&caps[2])?));
        rest = rest[whole.end()..].trim_start();
        rest = rest.strip_prefix(',').unwrap_or(rest).trim_start();
    }
    Some(edges)
}

/// Parses `text` as a complete literal of `shape`.
pub fn parse_literal(text: &str, shape: AnswerShape, labels: &NodeLabels) -> Option<Answer> {
    let s = clean(text);
    match shape {
        AnswerShape::Bool => parse_bool(s).map(Answer::Bool),
        AnswerShape::Int => parse_int(s).map(Answer::Int),
        AnswerShape::Float => parse_number(s).map(Answer::Float),
        AnswerShape::Node => labels.resolve(s).map(Answer::Node),
        AnswerShape::NodeList => parse_nodes(s, labels).map(Answer::NodeList),
        AnswerShape::NodeSet => {
            let nodes = parse_nodes(s, labels)?;
            let unique: BTreeSet<usize> = nodes.iter().copied().collect();
            (unique.len() == nodes.len()).then(|| Answer::NodeSet(unique.into_iter().collect()))
        }
        AnswerShape::EdgeList => parse_edges(s, labels).map(Answer::EdgeList),
    }
}

fn fallback(text: &str, shape: AnswerShape, labels: &NodeLabels) -> Option<Answer> {
    match shape {
        AnswerShape::Bool => BOOL_RE.find_iter(text).last().and_then(|m| parse_bool(m.as_str())).map(Answer::Bool),
        AnswerShape::Int => NUMBER_RE.find_iter(text).last().and_then(|m| parse_int(m.as_str())).map(Answer::Int),
        AnswerShape::Float => NUMBER_RE.find_iter(text).last().and_then(|m| m.as_str().parse().ok()).map(Answer::Float),
        AnswerShape::Node => {
            let tokens: Vec<&str> = TOKEN_RE.find_iter(text).map(|m| m.as_str()).collect();
            tokens.iter().rev().find_map(|t| labels.lookup(t)).map(Answer::Node)
        }
        AnswerShape::NodeList | AnswerShape::NodeSet => {
            let found: Vec<&str> = LIST_RE.find_iter(text).map(|m| m.as_str()).collect();
            found.iter().rev().find_map(|m| parse_literal(m, shape, labels))
        }
        AnswerShape::EdgeList => {
            let found: Vec<&str> = EDGE_LIST_RE.find_iter(text).map(|m| m.as_str()).collect();
            found.iter().rev().find_map(|m| parse_literal(m, shape, labels))
        }
    }
}

/// Pulls an answer of `shape` out of free model output.
pub fn extract_answer(output: &str, shape: AnswerShape, labels: &NodeLabels) -> ParsedAnswer {
    if let Some(pos) = output.rfind(ANSWER_MARKER) {
        let rest = &output[pos + ANSWER_MARKER.len()..];
        let line = rest.lines().next().unwrap_or("");
        return match parse_literal(line, shape, labels) {
            Some(a) => ParsedAnswer::Answer(a),
            None => ParsedAnswer::Unparseable(format!("'{}' is not a valid {shape:?} answer", line.trim())),
        };
    }
    match fallback(output, shape, labels) {
        Some(a) => ParsedAnswer::Answer(a),
        None => ParsedAnswer::Unparseable(format!("no {shape:?} literal found")),
    }
}

pub fn floats_match(reference: f64, candidate: f64) -> bool {
    if reference == 0.0 {
        return candidate == 0.0;
    }
    (candidate - reference).abs() / reference.abs() <= FLOAT_TOLERANCE + TOLERANCE_SLACK
}

/// Decides whether `candidate` answers the task correctly.
pub fn judge(kind: TaskKind, graph: &Graph, query: &QueryArgs, reference: &Answer, candidate: &ParsedAnswer) -> bool {
    let ParsedAnswer::Answer(cand) = candidate else {
        return false;
    };
    if kind.is_sequence_validated() {
        return match cand {
            Answer::NodeList(seq) => validate_sequence(kind, graph, query, seq),
            _ => false,
        };
    }
    match (reference, cand) {
        (Answer::Float(r), Answer::Float(c)) => floats_match(*r, *c),
        (Answer::NodeSet(r), Answer::NodeSet(c)) => r == c,
        (Answer::EdgeList(r), Answer::EdgeList(c)) if kind == TaskKind::Bipartite => {
            is_valid_matching(graph, query, c) && c.len() == r.len()
        }
        (r, c) => r == c,
    }
}

fn is_valid_matching(graph: &Graph, query: &QueryArgs, edges: &[(usize, usize)]) -> bool {
    let left: HashSet<usize> = query.left.iter().flatten().copied().collect();
    let right: HashSet<usize> = query.right.iter().flatten().copied().collect();
    let mut used = HashSet::new();
    edges.iter().all(|&(a, b)| {
        let (l, r) = if left.contains(&a) { (a, b) } else { (b, a) };
        left.contains(&l) && right.contains(&r) && graph.has_edge(l, r) && used.insert(l) && used.insert(r)
    })
}

fn covers_reachable(graph: &Graph, start: usize, seq: &[usize]) -> bool {
    let reach = graph.reachable_from(start);
    let expected = reach.iter().filter(|&&r| r).count();
    let seen: HashSet<usize> = seq.iter().copied().collect();
    seen.len() == seq.len() && seq.len() == expected && seq.iter().all(|&x| reach[x])
}

fn is_permutation(n: usize, seq: &[usize]) -> bool {
    let mut seen = vec![false; n];
    seq.len() == n && seq.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
}

/// Checks a candidate order against the discipline of the algorithm.
pub fn validate_sequence(kind: TaskKind, graph: &Graph, query: &QueryArgs, seq: &[usize]) -> bool {
    let n = graph.node_count();
    if seq.iter().any(|&x| x >= n) {
        return false;
    }
    match kind {
        TaskKind::Dfs | TaskKind::Bfs => {
            let Some(start) = query.u else { return false };
            if seq.first() != Some(&start) || !covers_reachable(graph, start, seq) {
                return false;
            }
            let mut visited = vec![false; n];
            visited[start] = true;
            let mut frontier = std::collections::VecDeque::from([start]);
            for &x in &seq[1..] {
                loop {
                    let current = if kind == TaskKind::Dfs { frontier.back() } else { frontier.front() };
                    let Some(&top) = current else { return false };
                    if graph.neighbors(top).iter().any(|&y| !visited[y]) {
                        break;
                    }
                    if kind == TaskKind::Dfs {
                        frontier.pop_back();
                    } else {
                        frontier.pop_front();
                    }
                }
                let top = if kind == TaskKind::Dfs { frontier.back() } else { frontier.front() };
                let top = *top.expect("loop ensures a node");
                if visited[x] || !graph.has_edge(top, x) {
                    return false;
                }
                visited[x] = true;
                frontier.push_back(x);
            }
            true
        }
        TaskKind::TopologicalSort => {
            if !is_permutation(n, seq) {
                return false;
            }
            let mut pos = vec![0; n];
            for (i, &x) in seq.iter().enumerate() {
                pos[x] = i;
            }
            graph.edges().all(|(u, v, _)| pos[u] < pos[v])
        }
        TaskKind::EulerPath => {
            if seq.len() != graph.edge_count() + 1 {
                return false;
            }
            let mut used = HashSet::new();
            seq.windows(2).all(|w| {
                let key = if graph.is_directed() { (w[0], w[1]) } else { (w[0].min(w[1]), w[0].max(w[1])) };
                graph.has_edge(w[0], w[1]) && used.insert(key)
            })
        }
        TaskKind::HamiltonianPath => is_permutation(n, seq) && seq.windows(2).all(|w| graph.has_edge(w[0], w[1])),
        _ => false,
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Tally {
    pub correct: usize,
    pub total: usize,
    pub accuracy: f64,
    pub unparseable: usize,
}

impl Tally {
    fn add(&mut self, correct: bool, unparseable: bool) {
        self.total += 1;
        self.correct += usize::from(correct);
        self.unparseable += usize::from(unparseable);
        self.accuracy = if self.total == 0 { 0.0 } else { self.correct as f64 / self.total as f64 };
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskTally {
    pub task: TaskKind,
    #[serde(flatten)]
    pub tally: Tally,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeTally {
    pub size_class: SizeClass,
    #[serde(flatten)]
    pub tally: Tally,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub overall: Tally,
    pub per_task: Vec<TaskTally>,
    pub per_size: Vec<SizeTally>,
    pub missing_ids: Vec<String>,
    pub line_errors: Vec<LineError>,
}

#[derive(Debug, Deserialize)]
struct Prediction {
    id: String,
    output: String,
}

/// Judges one record against a free-text output.
pub fn judge_record(record: &SampleRecord, output: &str) -> Result<(bool, bool), String> {
    let graph = record.graph()?;
    let labels = record.node_labels()?;
    let parsed = extract_answer(output, record.task.shape(), &labels);
    let correct = judge(record.task, &graph, &record.query_args, &record.answer, &parsed);
    Ok((correct, !parsed.is_parsed()))
}

/// Scores a line-delimited predictions file against dataset records.
/// Samples without a prediction count as incorrect and are listed.
pub fn score_run(records: &[SampleRecord], predictions: &str) -> EvalReport {
    let known: HashSet<&str> = records.iter().map(|r| r.id.as_str()).collect();
    let mut outputs: HashMap<String, String> = HashMap::new();
    let mut report = EvalReport::default();
    for (i, line) in predictions.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let line_no = i + 1;
        match serde_json::from_str::<Prediction>(line) {
            Ok(p) if !known.contains(p.id.as_str()) => {
                report.line_errors.push(LineError { line: line_no, message: format!("unknown id '{}'", p.id) })
            }
            Ok(p) if outputs.contains_key(&p.id) => {
                report.line_errors.push(LineError { line: line_no, message: format!("duplicate id '{}'", p.id) })
            }
            Ok(p) => {
                outputs.insert(p.id, p.output);
            }
            Err(e) => report.line_errors.push(LineError { line: line_no, message: e.to_string() }),
        }
    }
    let verdicts: Vec<Option<(bool, bool)>> = records
        .par_iter()
        .map(|r| outputs.get(&r.id).map(|out| judge_record(r, out).unwrap_or((false, false))))
        .collect();
    let mut per_task: BTreeMap<TaskKind, Tally> = BTreeMap::new();
    let mut per_size: BTreeMap<SizeClass, Tally> = BTreeMap::new();
    for (record, verdict) in records.iter().zip(verdicts) {
        let (correct, unparseable) = verdict.unwrap_or_else(|| {
            report.missing_ids.push(record.id.clone());
            (false, false)
        });
        report.overall.add(correct, unparseable);
        per_task.entry(record.task).or_default().add(correct, unparseable);
        per_size.entry(record.size_class).or_default().add(correct, unparseable);
    }
    report.per_task = per_task.into_iter().map(|(task, tally)| TaskTally { task, tally }).collect();
    report.per_size = per_size.into_iter().map(|(size_class, tally)| SizeTally { size_class, tally }).collect();
    report
}
