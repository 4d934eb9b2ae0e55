//! Simple graph container used by every other module.
//!
//! Nodes are dense indices `0..n`. Undirected edges are stored once with
//! `u < v`; directed edges keep their orientation. Edge weights, when the
//! graph is weighted, are integers in `[1, 10]`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MIN_WEIGHT: u32 = 1;
pub const MAX_WEIGHT: u32 = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("node {node} out of range for a graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("weight {0} outside [1, 10]")]
    BadWeight(u32),
    #[error("weighted graph requires a weight for edge ({0}, {1})")]
    MissingWeight(usize, usize),
    #[error("unweighted graph cannot carry a weight on edge ({0}, {1})")]
    UnexpectedWeight(usize, usize),
    #[error("graph must have at least one node")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    directed: bool,
    weighted: bool,
    // key is (u, v) with u < v when undirected; value is the weight (0 when unweighted)
    edges: BTreeMap<(usize, usize), u32>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize, directed: bool) -> Self {
        Self::with_weighting(n, directed, false)
    }

    pub fn new_weighted(n: usize, directed: bool) -> Self {
        Self::with_weighting(n, directed, true)
    }

    fn with_weighting(n: usize, directed: bool, weighted: bool) -> Self {
        Self {
            n,
            directed,
            weighted,
            edges: BTreeMap::new(),
            out_adj: vec![Vec::new(); n],
            in_adj: vec![Vec::new(); n],
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn key(&self, u: usize, v: usize) -> (usize, usize) {
        if self.directed || u < v {
            (u, v)
        } else {
            (v, u)
        }
    }

    fn check_node(&self, node: usize) -> Result<(), GraphError> {
        if node < self.n {
            Ok(())
        } else {
            Err(GraphError::NodeOutOfRange { node, n: self.n })
        }
    }

    /// Adds an edge. `weight` must be `Some` exactly when the graph is weighted.
    pub fn add_edge(&mut self, u: usize, v: usize, weight: Option<u32>) -> Result<(), GraphError> {
        self.check_node(u)?;
        self.check_node(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let w = match (self.weighted, weight) {
            (true, Some(w)) if (MIN_WEIGHT..=MAX_WEIGHT).contains(&w) => w,
            (true, Some(w)) => return Err(GraphError::BadWeight(w)),
            (true, None) => return Err(GraphError::MissingWeight(u, v)),
            (false, Some(_)) => return Err(GraphError::UnexpectedWeight(u, v)),
            (false, None) => 0,
        };
        let key = self.key(u, v);
        if self.edges.contains_key(&key) {
            return Err(GraphError::DuplicateEdge(u, v));
        }
        self.edges.insert(key, w);
        insert_sorted(&mut self.out_adj[u], v);
        insert_sorted(&mut self.in_adj[v], u);
        if !self.directed {
            insert_sorted(&mut self.out_adj[v], u);
            insert_sorted(&mut self.in_adj[u], v);
        }
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if u >= self.n || v >= self.n {
            return false;
        }
        let key = self.key(u, v);
        if self.edges.remove(&key).is_none() {
            return false;
        }
        remove_sorted(&mut self.out_adj[u], v);
        remove_sorted(&mut self.in_adj[v], u);
        if !self.directed {
            remove_sorted(&mut self.out_adj[v], u);
            remove_sorted(&mut self.in_adj[u], v);
        }
        true
    }

    /// True if `u -> v` is an edge (either orientation when undirected).
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && u != v && self.edges.contains_key(&self.key(u, v))
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<u32> {
        if !self.weighted || u >= self.n || v >= self.n {
            return None;
        }
        self.edges.get(&self.key(u, v)).copied()
    }

    /// Out-neighbors on directed graphs, all neighbors otherwise; ascending.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.out_adj[u]
    }

    /// In-neighbors on directed graphs, all neighbors otherwise; ascending.
    pub fn predecessors(&self, u: usize) -> &[usize] {
        &self.in_adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.out_adj[u].len()
    }

    /// Neighbors ignoring orientation, ascending and deduplicated.
    pub fn undirected_neighbors(&self, u: usize) -> Vec<usize> {
        if !self.directed {
            return self.out_adj[u].clone();
        }
        let set: BTreeSet<usize> = self.out_adj[u].iter().chain(&self.in_adj[u]).copied().collect();
        set.into_iter().collect()
    }

    /// Edges in canonical order: `(u, v, weight)`, sorted by `(u, v)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Option<u32>)> + '_ {
        let weighted = self.weighted;
        self.edges.iter().map(move |(&(u, v), &w)| (u, v, weighted.then_some(w)))
    }

    /// Replaces every weight via `f(u, v)`, turning the graph into a weighted one.
    pub fn map_weights(&self, mut f: impl FnMut(usize, usize) -> u32) -> Result<Graph, GraphError> {
        let mut out = Graph::new_weighted(self.n, self.directed);
        for (u, v, _) in self.edges() {
            out.add_edge(u, v, Some(f(u, v)))?;
        }
        Ok(out)
    }

    /// Drops all weights.
    pub fn unweighted(&self) -> Graph {
        let mut out = Graph::new(self.n, self.directed);
        for (u, v, _) in self.edges() {
            out.add_edge(u, v, None).expect("edges of a valid graph");
        }
        out
    }

    /// Nodes reachable from `start` following edge orientation, including `start`.
    pub fn reachable_from(&self, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(u) = queue.pop_front() {
            for &v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    /// Weakly connected component id per node, numbered by smallest member.
    pub fn weak_components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.n];
        let mut next = 0;
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let mut queue = VecDeque::from([s]);
            comp[s] = next;
            while let Some(u) = queue.pop_front() {
                for v in self.undirected_neighbors(u) {
                    if comp[v] == usize::MAX {
                        comp[v] = next;
                        queue.push_back(v);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn is_weakly_connected(&self) -> bool {
        self.weak_components().iter().all(|&c| c == 0)
    }
}

fn insert_sorted(list: &mut Vec<usize>, x: usize) {
    if let Err(pos) = list.binary_search(&x) {
        list.insert(pos, x);
    }
}

fn remove_sorted(list: &mut Vec<usize>, x: usize) {
    if let Ok(pos) = list.binary_search(&x) {
        list.remove(pos);
    }
}

/// Plain serialized form: `{n, directed, edges: [[u, v] | [u, v, w]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphRaw {
    pub n: usize,
    pub directed: bool,
    pub edges: Vec<Vec<u32>>,
}

impl From<&Graph> for GraphRaw {
    fn from(g: &Graph) -> Self {
        let edges = g
            .edges()
            .map(|(u, v, w)| match w {
                Some(w) => vec![u as u32, v as u32, w],
                None => vec![u as u32, v as u32],
            })
            .collect();
        GraphRaw { n: g.node_count(), directed: g.is_directed(), edges }
    }
}

impl TryFrom<&GraphRaw> for Graph {
    type Error = GraphError;

    fn try_from(raw: &GraphRaw) -> Result<Self, Self::Error> {
        if raw.n == 0 {
            return Err(GraphError::Empty);
        }
        let weighted = raw.edges.first().is_some_and(|e| e.len() == 3);
        let mut g = Graph::with_weighting(raw.n, raw.directed, weighted);
        for e in &raw.edges {
            let (u, v) = (e[0] as usize, e[1] as usize);
            match e.len() {
                2 => g.add_edge(u, v, None)?,
                3 => g.add_edge(u, v, Some(e[2]))?,
                _ => return Err(GraphError::MissingWeight(u, v)),
            }
        }
        Ok(g)
    }
}
