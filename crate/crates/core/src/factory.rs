//! Task instance assembly.
//!
//! An instance is a pure function of `(kind, spec, gdl, scheme)`: the random
//! stream is seeded from `spec.seed` and consumed in a fixed order (graph,
//! query, labels). Each kind shapes its graph so the solver's precondition
//! holds; a kind that cannot be satisfied after [`MAX_ATTEMPTS`] draws
//! reports an error naming the kind and seed.

use std::collections::{HashMap, VecDeque};
use std::sync::LazyLock;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::answer::Answer;
use crate::gdl::{assign_node_labels, describe, GdlKind, LabelScheme, NodeLabels};
use crate::generate::{orient_acyclic, sample_graph, Distribution, ForgeRng, GenError, GenSpec, SizeClass};
use crate::graph::Graph;
use crate::solvers::{self, SolveError};
use crate::task::{AnswerShape, QueryArgs, TaskKind};
use crate::trace::{parse_table, ReasoningTrace};

pub const MAX_ATTEMPTS: usize = 64;

static TASK_TEMPLATES_SRC: &str = include_str!("../data/task_templates.txt");

static TASK_TEMPLATES: LazyLock<HashMap<String, HashMap<String, String>>> = LazyLock::new(|| {
    let mut sections: HashMap<String, String> = HashMap::new();
    let mut current = String::new();
    for line in TASK_TEMPLATES_SRC.lines() {
        let t = line.trim();
        if let Some(name) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            current = name.to_string();
        } else if !current.is_empty() {
            let body = sections.entry(current.clone()).or_default();
            body.push_str(line);
            body.push('\n');
        }
    }
    sections.into_iter().map(|(k, body)| (k, parse_table(&body))).collect()
});

fn template(section: &str, key: &str) -> &'static str {
    TASK_TEMPLATES
        .get(section)
        .and_then(|s| s.get(key))
        .unwrap_or_else(|| panic!("task template [{section}] {key} missing"))
}

fn shape_key(shape: AnswerShape) -> &'static str {
    match shape {
        AnswerShape::Bool => "bool",
        AnswerShape::Int => "int",
        AnswerShape::Float => "float",
        AnswerShape::Node => "node",
        AnswerShape::NodeList => "node_list",
        AnswerShape::NodeSet => "node_set",
        AnswerShape::EdgeList => "edge_list",
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FactoryError {
    #[error("could not build a feasible {kind} instance for seed {seed} after {attempts} attempts: {last}")]
    Infeasible { kind: TaskKind, seed: u64, attempts: usize, last: String },
    #[error(transparent)]
    Generation(#[from] GenError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceMeta {
    pub size_class: SizeClass,
    pub distribution: Distribution,
    pub directed: bool,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaskInstance {
    pub id: String,
    pub kind: TaskKind,
    pub graph: Graph,
    pub labels: NodeLabels,
    pub scheme: LabelScheme,
    pub gdl: GdlKind,
    pub query_args: QueryArgs,
    pub graph_text: String,
    pub query_text: String,
    pub prompt_text: String,
    pub answer: Answer,
    pub trace: ReasoningTrace,
    pub meta: InstanceMeta,
    /// Draws needed before the instance was feasible (1 = first try).
    pub attempts: usize,
}

/// Directedness after task constraints override the requested coin flip.
pub fn effective_directed(kind: TaskKind, requested: bool) -> bool {
    use TaskKind::*;
    match kind {
        Predecessor | TopologicalSort | MaximumFlow | PageRank => true,
        Diameter | Mst | EulerPath | HamiltonianPath | Bipartite => false,
        _ => requested,
    }
}

pub fn make_instance(
    kind: TaskKind,
    spec: &GenSpec,
    gdl: GdlKind,
    scheme: LabelScheme,
) -> Result<TaskInstance, FactoryError> {
    let mut rng = spec.rng();
    let mut spec = *spec;
    spec.directed = effective_directed(kind, spec.directed);
    spec.weighted = kind.is_weighted();
    let mut last = String::new();
    for attempt in 1..=MAX_ATTEMPTS {
        let (graph, query) = match draw(kind, &spec, &mut rng)? {
            Some(drawn) => drawn,
            None => {
                last = "graph did not meet the task constraints".into();
                continue;
            }
        };
        let solution = match solvers::solve(kind, &graph, &query) {
            Ok(s) => s,
            Err(e @ (SolveError::Infeasible(_) | SolveError::BudgetExhausted(_))) => {
                last = e.to_string();
                continue;
            }
        };
        let labels = assign_node_labels(graph.node_count(), scheme, &mut rng);
        let graph_text = describe(&graph, &labels, gdl);
        let query_text = render_query(kind, &query, &labels);
        let prompt_text = render_prompt(kind, &graph_text, &query, &labels);
        return Ok(TaskInstance {
            id: format!("{}-{:016x}", kind.as_str(), spec.seed),
            kind,
            meta: InstanceMeta {
                size_class: spec.size_class,
                distribution: spec.distribution,
                directed: graph.is_directed(),
                seed: spec.seed,
            },
            graph,
            labels,
            scheme,
            gdl,
            query_args: query,
            graph_text,
            query_text,
            prompt_text,
            answer: solution.answer,
            trace: solution.trace,
            attempts: attempt,
        });
    }
    Err(FactoryError::Infeasible { kind, seed: spec.seed, attempts: MAX_ATTEMPTS, last })
}

/// Question sentence with query nodes filled in.
pub fn render_query(kind: TaskKind, query: &QueryArgs, labels: &NodeLabels) -> String {
    let join = |nodes: &Option<Vec<usize>>| {
        let names: Vec<&str> = nodes.iter().flatten().map(|&n| labels.get(n)).collect();
        format!("[{}]", names.join(", "))
    };
    let mut text = template(kind.as_str(), "question").to_string();
    if let Some(u) = query.u {
        text = text.replace("{u}", labels.get(u));
    }
    if let Some(v) = query.v {
        text = text.replace("{v}", labels.get(v));
    }
    text.replace("{left}", &join(&query.left)).replace("{right}", &join(&query.right))
}

/// Full prompt: instruction, graph description, question and answer format.
pub fn render_prompt(kind: TaskKind, graph_text: &str, query: &QueryArgs, labels: &NodeLabels) -> String {
    template("layout", "prompt")
        .replace("\\n", "\n")
        .replace("{intro}", template(kind.as_str(), "intro"))
        .replace("{format}", template("format", shape_key(kind.shape())))
        .replace("{question}", &render_query(kind, query, labels))
        .replace("{graph}", graph_text)
}

type Drawn = Option<(Graph, QueryArgs)>;

fn draw(kind: TaskKind, spec: &GenSpec, rng: &mut ForgeRng) -> Result<Drawn, GenError> {
    use TaskKind::*;
    if kind == Bipartite {
        return Ok(draw_bipartite(spec, rng));
    }
    if kind == TopologicalSort {
        let undirected = GenSpec { directed: false, ..*spec };
        let g = orient_acyclic(&sample_graph(&undirected, rng)?, rng);
        return Ok(Some((g, QueryArgs::none())));
    }
    let mut g = sample_graph(spec, rng)?;
    let n = g.node_count();
    let drawn = match kind {
        Neighbor | Degree | Predecessor | ConnectedComponent => Some(QueryArgs::node(rng.gen_range(0..n))),
        CommonNeighbor | Jaccard => {
            let (u, v) = distinct_pair(n, rng);
            Some(QueryArgs::pair(u, v))
        }
        ClusteringCoefficient => {
            let ok: Vec<usize> = (0..n).filter(|&u| g.degree(u) >= 2).collect();
            ok.choose(rng).map(|&u| QueryArgs::node(u))
        }
        Edge => {
            if rng.gen_bool(0.5) {
                let edges: Vec<(usize, usize)> = g.edges().map(|(u, v, _)| (u, v)).collect();
                edges.choose(rng).map(|&(u, v)| {
                    if !g.is_directed() && rng.gen_bool(0.5) {
                        QueryArgs::pair(v, u)
                    } else {
                        QueryArgs::pair(u, v)
                    }
                })
            } else {
                let free: Vec<(usize, usize)> = ordered_pairs(n).filter(|&(u, v)| !g.has_edge(u, v)).collect();
                free.choose(rng).map(|&(u, v)| QueryArgs::pair(u, v))
            }
        }
        ShortestPath => {
            let pairs = reachable_pairs(&g);
            pairs.choose(rng).map(|&(u, v)| QueryArgs::pair(u, v))
        }
        MaximumFlow => {
            let pairs = reachable_pairs(&g);
            match pairs.choose(rng) {
                Some(&(u, v)) => Some(QueryArgs::pair(u, v)),
                None => {
                    let (u, v) = distinct_pair(n, rng);
                    Some(QueryArgs::pair(u, v))
                }
            }
        }
        Connectivity => {
            let want = rng.gen_bool(0.5);
            let (u, v) = distinct_pair(n, rng);
            if g.reachable_from(u)[v] != want {
                if want {
                    let pairs = reachable_pairs(&g);
                    return Ok(pairs.choose(rng).map(|&(u, v)| (g, QueryArgs::pair(u, v))));
                }
                cut_between(&mut g, u, v, rng);
            }
            Some(QueryArgs::pair(u, v))
        }
        Cycle => {
            if rng.gen_bool(0.5) {
                plant_cycle(&mut g, rng);
            } else {
                g = if g.is_directed() { orient_acyclic(&g, rng) } else { spanning_forest(&g) };
            }
            Some(QueryArgs::none())
        }
        Dfs | Bfs => g.is_weakly_connected().then(|| QueryArgs::node(rng.gen_range(0..n))),
        Diameter | Mst => g.is_weakly_connected().then(QueryArgs::none),
        PageRank => Some(QueryArgs::none()),
        EulerPath => {
            repair_parity(&mut g, rng);
            (g.edge_count() > 0 && g.is_weakly_connected()).then(QueryArgs::none)
        }
        HamiltonianPath => {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(rng);
            for w in order.windows(2) {
                if !g.has_edge(w[0], w[1]) {
                    g.add_edge(w[0], w[1], None).expect("checked absent");
                }
            }
            Some(QueryArgs::none())
        }
        Bipartite | TopologicalSort => unreachable!("handled above"),
    };
    Ok(drawn.map(|q| (g, q)))
}

fn distinct_pair(n: usize, rng: &mut impl Rng) -> (usize, usize) {
    let u = rng.gen_range(0..n);
    let mut v = rng.gen_range(0..n - 1);
    if v >= u {
        v += 1;
    }
    (u, v)
}

fn ordered_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
}

fn reachable_pairs(g: &Graph) -> Vec<(usize, usize)> {
    let n = g.node_count();
    (0..n)
        .flat_map(|u| {
            let reach = g.reachable_from(u);
            (0..n).filter(move |&v| v != u && reach[v]).map(move |v| (u, v))
        })
        .collect()
}

/// Deletes every edge leaving a random node set that holds `u` but not `v`.
fn cut_between(g: &mut Graph, u: usize, v: usize, rng: &mut impl Rng) {
    let n = g.node_count();
    let side: Vec<bool> = (0..n).map(|x| x == u || (x != v && rng.gen_bool(0.5))).collect();
    let crossing: Vec<(usize, usize)> = g
        .edges()
        .filter(|&(a, b, _)| if g.is_directed() { side[a] && !side[b] } else { side[a] != side[b] })
        .map(|(a, b, _)| (a, b))
        .collect();
    for (a, b) in crossing {
        g.remove_edge(a, b);
    }
}

fn plant_cycle(g: &mut Graph, rng: &mut impl Rng) {
    let n = g.node_count();
    let len = rng.gen_range(3..=n.min(6));
    let mut nodes: Vec<usize> = (0..n).collect();
    nodes.shuffle(rng);
    for i in 0..len {
        let (a, b) = (nodes[i], nodes[(i + 1) % len]);
        if !g.has_edge(a, b) {
            g.add_edge(a, b, None).expect("checked absent");
        }
    }
}

fn spanning_forest(g: &Graph) -> Graph {
    let n = g.node_count();
    let mut forest = Graph::new(n, false);
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &y in g.neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    forest.add_edge(x, y, None).expect("tree edge");
                    queue.push_back(y);
                }
            }
        }
    }
    forest
}

/// Toggles edges between random pairs of odd-degree nodes until at most two remain.
fn repair_parity(g: &mut Graph, rng: &mut impl Rng) {
    let mut odd: Vec<usize> = (0..g.node_count()).filter(|&u| g.degree(u) % 2 == 1).collect();
    odd.shuffle(rng);
    while odd.len() > 2 {
        let (a, b) = (odd.pop().expect("len > 2"), odd.pop().expect("len > 2"));
        if !g.remove_edge(a, b) {
            g.add_edge(a, b, None).expect("absent pair");
        }
    }
}

fn draw_bipartite(spec: &GenSpec, rng: &mut impl Rng) -> Drawn {
    let (lo, hi) = spec.size_class.node_range();
    let n = spec.params.node_count.unwrap_or_else(|| rng.gen_range(lo..=hi));
    if n < 2 {
        return None;
    }
    let left_size = rng.gen_range((n / 3).max(1)..=(2 * n / 3).max(1));
    let mut nodes: Vec<usize> = (0..n).collect();
    nodes.shuffle(rng);
    let (mut left, mut right) = (nodes[..left_size].to_vec(), nodes[left_size..].to_vec());
    left.sort_unstable();
    right.sort_unstable();
    let p = spec.params.er_p.unwrap_or_else(|| {
        let (a, b) = spec.size_class.default_er_p_range();
        rng.gen_range(a..=b)
    });
    let mut g = Graph::new(n, false);
    for &l in &left {
        for &r in &right {
            if rng.gen_bool(p) {
                g.add_edge(l, r, None).expect("fresh pair");
            }
        }
    }
    (g.edge_count() > 0).then(|| (g, QueryArgs::parts(left, right)))
}
