//! Seeded random graph generation.
//!
//! Three structure models are supported:
//!
//! - **ER**: every unordered pair (ordered pair when directed) is an edge
//!   independently with probability `p`.
//! - **BA**: preferential attachment. The first `m` nodes form a clique;
//!   each later node attaches to `m` distinct earlier nodes chosen with
//!   probability proportional to degree. The edge count is therefore exactly
//!   `C(m, 2) + m * (n - m)`.
//! - **SmallWorld**: a ring lattice where each node links to its `k / 2`
//!   nearest neighbors on each side, after which every lattice edge is
//!   rewired with probability `beta` to a uniformly chosen new endpoint.
//!
//! BA and SmallWorld are built undirected; a directed request gives each
//! edge a uniformly random orientation.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, MAX_WEIGHT, MIN_WEIGHT};

/// Random stream type used throughout the crate.
pub type ForgeRng = ChaCha8Rng;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("invalid distribution parameter: {0}")]
    Parameter(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Distribution {
    #[serde(rename = "er")]
    Er,
    #[serde(rename = "ba")]
    Ba,
    #[serde(rename = "small_world")]
    SmallWorld,
}

impl Distribution {
    pub const ALL: [Distribution; 3] = [Distribution::Er, Distribution::Ba, Distribution::SmallWorld];

    pub fn as_str(self) -> &'static str {
        match self {
            Distribution::Er => "er",
            Distribution::Ba => "ba",
            Distribution::SmallWorld => "small_world",
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Distribution {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "er" | "erdos_renyi" => Ok(Distribution::Er),
            "ba" | "barabasi_albert" => Ok(Distribution::Ba),
            "small_world" | "sw" | "smallworld" => Ok(Distribution::SmallWorld),
            other => Err(format!("unknown distribution '{other}'")),
        }
    }
}

/// Node-count band of a generated graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SizeClass {
    Mini,
    Small,
    Medium,
    Large,
}

impl SizeClass {
    pub const ALL: [SizeClass; 4] = [SizeClass::Mini, SizeClass::Small, SizeClass::Medium, SizeClass::Large];

    /// Inclusive node-count range.
    pub fn node_range(self) -> (usize, usize) {
        match self {
            SizeClass::Mini => (5, 7),
            SizeClass::Small => (8, 15),
            SizeClass::Medium => (16, 25),
            SizeClass::Large => (26, 35),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SizeClass::Mini => "mini",
            SizeClass::Small => "small",
            SizeClass::Medium => "medium",
            SizeClass::Large => "large",
        }
    }

    pub(crate) fn default_er_p_range(self) -> (f64, f64) {
        match self {
            SizeClass::Mini | SizeClass::Small => (0.15, 0.5),
            SizeClass::Medium | SizeClass::Large => (0.08, 0.3),
        }
    }
}

impl fmt::Display for SizeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SizeClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mini" | "tiny" => Ok(SizeClass::Mini),
            "small" => Ok(SizeClass::Small),
            "medium" => Ok(SizeClass::Medium),
            "large" => Ok(SizeClass::Large),
            other => Err(format!("unknown size class '{other}'")),
        }
    }
}

/// Optional overrides for the structure models. `None` means "sample the default".
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct DistParams {
    pub node_count: Option<usize>,
    pub er_p: Option<f64>,
    pub ba_m: Option<usize>,
    pub sw_k: Option<usize>,
    pub sw_beta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub distribution: Distribution,
    pub size_class: SizeClass,
    pub directed: bool,
    pub weighted: bool,
    pub seed: u64,
    #[serde(default)]
    pub params: DistParams,
}

impl GenSpec {
    pub fn new(distribution: Distribution, size_class: SizeClass, directed: bool, seed: u64) -> Self {
        Self { distribution, size_class, directed, weighted: false, seed, params: DistParams::default() }
    }

    pub fn rng(&self) -> ForgeRng {
        ForgeRng::seed_from_u64(self.seed)
    }
}

const SW_DEFAULT_BETA: f64 = 0.3;

/// Samples a graph according to `spec`, drawing from `rng`.
pub fn sample_graph(spec: &GenSpec, rng: &mut impl Rng) -> Result<Graph, GenError> {
    let (lo, hi) = spec.size_class.node_range();
    let n = match spec.params.node_count {
        Some(0) => return Err(GenError::Parameter("node_count must be positive".into())),
        Some(n) => n,
        None => rng.gen_range(lo..=hi),
    };
    let graph = match spec.distribution {
        Distribution::Er => {
            let p = match spec.params.er_p {
                Some(p) if (0.0..=1.0).contains(&p) => p,
                Some(p) => return Err(GenError::Parameter(format!("ER p = {p} not in [0, 1]"))),
                None => {
                    let (a, b) = spec.size_class.default_er_p_range();
                    rng.gen_range(a..=b)
                }
            };
            erdos_renyi(n, p, spec.directed, rng)
        }
        Distribution::Ba => {
            let m = spec.params.ba_m.unwrap_or_else(|| rng.gen_range(2..=3));
            if m == 0 || m >= n {
                return Err(GenError::Parameter(format!("BA m = {m} requires 1 <= m < n = {n}")));
            }
            orient(barabasi_albert(n, m, rng), spec.directed, rng)
        }
        Distribution::SmallWorld => {
            let k = spec.params.sw_k.unwrap_or_else(|| if rng.gen_bool(0.5) { 2 } else { 4 });
            let beta = spec.params.sw_beta.unwrap_or(SW_DEFAULT_BETA);
            if k == 0 || !k.is_multiple_of(2) || k >= n {
                return Err(GenError::Parameter(format!(
                    "small-world k = {k} must be even, positive and below n = {n}"
                )));
            }
            if !(0.0..=1.0).contains(&beta) {
                return Err(GenError::Parameter(format!("small-world beta = {beta} not in [0, 1]")));
            }
            orient(watts_strogatz(n, k, beta, rng), spec.directed, rng)
        }
    };
    if spec.weighted {
        Ok(assign_weights(&graph, rng))
    } else {
        Ok(graph)
    }
}

/// Gives every edge an independent uniform weight in `[1, 10]`, in edge order.
pub fn assign_weights(graph: &Graph, rng: &mut impl Rng) -> Graph {
    graph.map_weights(|_, _| rng.gen_range(MIN_WEIGHT..=MAX_WEIGHT)).expect("weights drawn inside the valid range")
}

pub fn erdos_renyi(n: usize, p: f64, directed: bool, rng: &mut impl Rng) -> Graph {
    let mut g = Graph::new(n, directed);
    for u in 0..n {
        for v in 0..n {
            let candidate = if directed { u != v } else { u < v };
            if candidate && rng.gen_bool(p) {
                g.add_edge(u, v, None).expect("fresh pair");
            }
        }
    }
    g
}

/// Preferential attachment on top of an `m`-clique seed.
pub fn barabasi_albert(n: usize, m: usize, rng: &mut impl Rng) -> Graph {
    let mut g = Graph::new(n, false);
    for u in 0..m {
        for v in u + 1..m {
            g.add_edge(u, v, None).expect("fresh pair");
        }
    }
    for new in m..n {
        let mut chosen: Vec<usize> = Vec::with_capacity(m);
        while chosen.len() < m {
            let weights: Vec<usize> = (0..new).map(|x| if chosen.contains(&x) { 0 } else { g.degree(x) }).collect();
            let total: usize = weights.iter().sum();
            let pick = if total == 0 {
                // Only possible for m = 1 before any edge exists.
                let free: Vec<usize> = (0..new).filter(|x| !chosen.contains(x)).collect();
                *free.choose(rng).expect("at least one free node")
            } else {
                let mut r = rng.gen_range(0..total);
                let mut pick = 0;
                for (x, &w) in weights.iter().enumerate() {
                    if r < w {
                        pick = x;
                        break;
                    }
                    r -= w;
                }
                pick
            };
            chosen.push(pick);
        }
        for t in chosen {
            g.add_edge(new, t, None).expect("distinct targets");
        }
    }
    g
}

pub fn watts_strogatz(n: usize, k: usize, beta: f64, rng: &mut impl Rng) -> Graph {
    let mut g = Graph::new(n, false);
    for u in 0..n {
        for j in 1..=k / 2 {
            let v = (u + j) % n;
            if !g.has_edge(u, v) {
                g.add_edge(u, v, None).expect("fresh ring edge");
            }
        }
    }
    for j in 1..=k / 2 {
        for u in 0..n {
            let v = (u + j) % n;
            if !g.has_edge(u, v) || !rng.gen_bool(beta) {
                continue;
            }
            let options: Vec<usize> = (0..n).filter(|&w| w != u && !g.has_edge(u, w)).collect();
            if let Some(&w) = options.choose(rng) {
                g.remove_edge(u, v);
                g.add_edge(u, w, None).expect("checked free");
            }
        }
    }
    g
}

/// Converts an undirected graph into a directed one with coin-flip orientations.
pub fn orient(graph: Graph, directed: bool, rng: &mut impl Rng) -> Graph {
    if !directed || graph.is_directed() {
        return graph;
    }
    let mut out = Graph::new(graph.node_count(), true);
    for (u, v, _) in graph.edges() {
        if rng.gen_bool(0.5) {
            out.add_edge(u, v, None).expect("fresh");
        } else {
            out.add_edge(v, u, None).expect("fresh");
        }
    }
    out
}

/// Orients every edge forward along a uniformly random node permutation,
/// which always yields a DAG. Opposite arcs of a directed input collapse
/// into one.
pub fn orient_acyclic(graph: &Graph, rng: &mut impl Rng) -> Graph {
    let n = graph.node_count();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut rank = vec![0; n];
    for (pos, &node) in order.iter().enumerate() {
        rank[node] = pos;
    }
    let mut out = Graph::new(n, true);
    for (u, v, _) in graph.edges() {
        let (a, b) = if rank[u] < rank[v] { (u, v) } else { (v, u) };
        if !out.has_edge(a, b) {
            out.add_edge(a, b, None).expect("fresh");
        }
    }
    out
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Derives an independent stream seed from a base seed and a path of indices,
/// so per-sample generation does not depend on evaluation order.
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    path.iter().fold(splitmix64(base), |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(d: Distribution, s: SizeClass, directed: bool, seed: u64) -> GenSpec {
        GenSpec::new(d, s, directed, seed)
    }

    #[test]
    fn er_mini_has_five_to_seven_nodes() {
        let s = spec(Distribution::Er, SizeClass::Mini, false, 7);
        let g = sample_graph(&s, &mut s.rng()).unwrap();
        assert!((5..=7).contains(&g.node_count()));
    }

    #[test]
    fn er_zero_probability_is_empty() {
        let mut s = spec(Distribution::Er, SizeClass::Small, true, 1);
        s.params.er_p = Some(0.0);
        let g = sample_graph(&s, &mut s.rng()).unwrap();
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn ba_rejects_m_not_below_n() {
        let mut s = spec(Distribution::Ba, SizeClass::Mini, false, 1);
        s.params.node_count = Some(3);
        s.params.ba_m = Some(3);
        assert!(matches!(sample_graph(&s, &mut s.rng()), Err(GenError::Parameter(_))));
    }

    #[test]
    fn small_world_rejects_odd_k() {
        let mut s = spec(Distribution::SmallWorld, SizeClass::Mini, false, 1);
        s.params.sw_k = Some(3);
        assert!(sample_graph(&s, &mut s.rng()).is_err());
    }

    #[test]
    fn small_world_without_rewiring_is_a_ring_lattice() {
        let mut s = spec(Distribution::SmallWorld, SizeClass::Small, false, 5);
        s.params.sw_k = Some(4);
        s.params.sw_beta = Some(0.0);
        let g = sample_graph(&s, &mut s.rng()).unwrap();
        assert_eq!(g.edge_count(), 2 * g.node_count());
        assert!((0..g.node_count()).all(|u| g.degree(u) == 4));
    }

    #[test]
    fn weights_are_deterministic_and_in_range() {
        let mut g = Graph::new(2, false);
        g.add_edge(0, 1, None).unwrap();
        let a = assign_weights(&g, &mut ForgeRng::seed_from_u64(3));
        let b = assign_weights(&g, &mut ForgeRng::seed_from_u64(3));
        assert_eq!(a, b);
        let w = a.weight(0, 1).unwrap();
        assert!((1..=10).contains(&w));
    }

    #[test]
    fn orient_acyclic_preserves_edge_count() {
        let s = spec(Distribution::Er, SizeClass::Small, false, 9);
        let mut rng = s.rng();
        let g = sample_graph(&s, &mut rng).unwrap();
        let d = orient_acyclic(&g, &mut rng);
        assert_eq!(d.edge_count(), g.edge_count());
        assert!(d.is_directed());
    }

    #[test]
    fn derived_seeds_differ_per_path() {
        assert_ne!(derive_seed(1, &[0]), derive_seed(1, &[1]));
        assert_ne!(derive_seed(1, &[0, 1]), derive_seed(1, &[1, 0]));
        assert_eq!(derive_seed(5, &[2, 3]), derive_seed(5, &[2, 3]));
    }
}
