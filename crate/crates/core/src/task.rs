//! Task kinds, their answer shapes and query arguments.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The 21 graph reasoning tasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    Neighbor,
    Degree,
    Predecessor,
    PageRank,
    ClusteringCoefficient,
    CommonNeighbor,
    Jaccard,
    Edge,
    ShortestPath,
    Connectivity,
    MaximumFlow,
    Dfs,
    Bfs,
    Cycle,
    ConnectedComponent,
    Diameter,
    Bipartite,
    TopologicalSort,
    Mst,
    EulerPath,
    HamiltonianPath,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnswerShape {
    Bool,
    Int,
    Float,
    Node,
    NodeList,
    NodeSet,
    EdgeList,
}

/// What a task needs from the graph beyond its structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryArity {
    None,
    Node,
    Pair,
    Parts,
}

impl TaskKind {
    pub const ALL: [TaskKind; 21] = [
        TaskKind::Neighbor,
        TaskKind::Degree,
        TaskKind::Predecessor,
        TaskKind::PageRank,
        TaskKind::ClusteringCoefficient,
        TaskKind::CommonNeighbor,
        TaskKind::Jaccard,
        TaskKind::Edge,
        TaskKind::ShortestPath,
        TaskKind::Connectivity,
        TaskKind::MaximumFlow,
        TaskKind::Dfs,
        TaskKind::Bfs,
        TaskKind::Cycle,
        TaskKind::ConnectedComponent,
        TaskKind::Diameter,
        TaskKind::Bipartite,
        TaskKind::TopologicalSort,
        TaskKind::Mst,
        TaskKind::EulerPath,
        TaskKind::HamiltonianPath,
    ];

    /// Tasks held out of training data.
    pub const OUT_OF_DOMAIN: [TaskKind; 4] =
        [TaskKind::Bfs, TaskKind::Cycle, TaskKind::ClusteringCoefficient, TaskKind::EulerPath];

    pub fn in_domain() -> Vec<TaskKind> {
        Self::ALL.into_iter().filter(|k| !k.is_out_of_domain()).collect()
    }

    pub fn is_out_of_domain(self) -> bool {
        Self::OUT_OF_DOMAIN.contains(&self)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TaskKind::Neighbor => "neighbor",
            TaskKind::Degree => "degree",
            TaskKind::Predecessor => "predecessor",
            TaskKind::PageRank => "page_rank",
            TaskKind::ClusteringCoefficient => "clustering_coefficient",
            TaskKind::CommonNeighbor => "common_neighbor",
            TaskKind::Jaccard => "jaccard",
            TaskKind::Edge => "edge",
            TaskKind::ShortestPath => "shortest_path",
            TaskKind::Connectivity => "connectivity",
            TaskKind::MaximumFlow => "maximum_flow",
            TaskKind::Dfs => "dfs",
            TaskKind::Bfs => "bfs",
            TaskKind::Cycle => "cycle",
            TaskKind::ConnectedComponent => "connected_component",
            TaskKind::Diameter => "diameter",
            TaskKind::Bipartite => "bipartite",
            TaskKind::TopologicalSort => "topological_sort",
            TaskKind::Mst => "mst",
            TaskKind::EulerPath => "euler_path",
            TaskKind::HamiltonianPath => "hamiltonian_path",
        }
    }

    pub fn shape(self) -> AnswerShape {
        use TaskKind::*;
        match self {
            Edge | Connectivity | Cycle => AnswerShape::Bool,
            Degree | CommonNeighbor | ShortestPath | MaximumFlow | Diameter | Mst => AnswerShape::Int,
            ClusteringCoefficient | Jaccard => AnswerShape::Float,
            PageRank => AnswerShape::Node,
            Dfs | Bfs | TopologicalSort | EulerPath | HamiltonianPath => AnswerShape::NodeList,
            Neighbor | Predecessor | ConnectedComponent => AnswerShape::NodeSet,
            Bipartite => AnswerShape::EdgeList,
        }
    }

    pub fn arity(self) -> QueryArity {
        use TaskKind::*;
        match self {
            Neighbor | Degree | Predecessor | ClusteringCoefficient | Dfs | Bfs | ConnectedComponent => {
                QueryArity::Node
            }
            CommonNeighbor | Jaccard | Edge | ShortestPath | Connectivity | MaximumFlow => QueryArity::Pair,
            Bipartite => QueryArity::Parts,
            PageRank | Cycle | Diameter | TopologicalSort | Mst | EulerPath | HamiltonianPath => QueryArity::None,
        }
    }

    /// Kinds judged by replaying the algorithm's discipline rather than by equality.
    pub fn is_sequence_validated(self) -> bool {
        matches!(
            self,
            TaskKind::Dfs | TaskKind::Bfs | TaskKind::TopologicalSort | TaskKind::EulerPath | TaskKind::HamiltonianPath
        )
    }

    /// Kinds whose graphs carry edge weights.
    pub fn is_weighted(self) -> bool {
        matches!(self, TaskKind::ShortestPath | TaskKind::MaximumFlow | TaskKind::Mst)
    }
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TaskKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_lowercase().replace(['-', ' '], "_");
        let alias = match norm.as_str() {
            "pagerank" => "page_rank",
            "clustering" => "clustering_coefficient",
            "max_flow" | "maxflow" => "maximum_flow",
            "topo_sort" | "toposort" => "topological_sort",
            "euler" => "euler_path",
            "hamiltonian" => "hamiltonian_path",
            "component" => "connected_component",
            other => other,
        };
        Self::ALL.into_iter().find(|k| k.as_str() == alias).ok_or_else(|| format!("unknown task '{s}'"))
    }
}

/// Query arguments. Serialized as an object with only the relevant keys.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryArgs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<Vec<usize>>,
}

impl QueryArgs {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn node(u: usize) -> Self {
        Self { u: Some(u), ..Self::default() }
    }

    pub fn pair(u: usize, v: usize) -> Self {
        Self { u: Some(u), v: Some(v), ..Self::default() }
    }

    pub fn parts(left: Vec<usize>, right: Vec<usize>) -> Self {
        Self { left: Some(left), right: Some(right), ..Self::default() }
    }
}
