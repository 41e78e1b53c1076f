//! Cluster solutions and their validation.

use std::fmt;

use crate::graph::{VertexSet, Weight, WeightedGraph};

/// A vertex set inducing a cluster graph, together with its clusters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterSolution {
    pub vertices: VertexSet,
    pub clusters: Vec<VertexSet>,
    pub weight: Weight,
}

impl ClusterSolution {
    pub fn empty(g: &WeightedGraph) -> Self {
        ClusterSolution {
            vertices: g.empty_set(),
            clusters: Vec::new(),
            weight: 0,
        }
    }

    /// Assembles a solution from a list of clusters. Empty clusters are
    /// dropped and clusters are sorted by smallest vertex. Nothing is
    /// validated here; see [`validate_solution`].
    pub fn from_clusters(g: &WeightedGraph, clusters: impl IntoIterator<Item = VertexSet>) -> Self {
        let mut clusters: Vec<VertexSet> = clusters.into_iter().filter(|c| !c.is_empty()).collect();
        clusters.sort_by_key(|c| c.first());
        let mut vertices = g.empty_set();
        for c in &clusters {
            vertices.union_with(c);
        }
        let weight = clusters.iter().map(|c| g.weight_of(c)).sum();
        ClusterSolution {
            vertices,
            clusters,
            weight,
        }
    }

    /// Splits `s` into the components of G[S].
    pub fn from_vertex_set(g: &WeightedGraph, s: &VertexSet) -> Self {
        ClusterSolution::from_clusters(g, g.components(s))
    }

    /// V(G) \ S.
    pub fn deleted(&self, g: &WeightedGraph) -> VertexSet {
        g.vertex_set().difference(&self.vertices)
    }

    pub fn has_cluster(&self, c: &VertexSet) -> bool {
        self.clusters.iter().any(|x| x == c)
    }
}

/// First violated solution invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolutionViolation {
    WrongHost { expected: usize, found: usize },
    EmptyCluster(usize),
    OverlappingClusters(usize, usize),
    VertexSetMismatch,
    NotAClique(usize),
    EdgeBetweenClusters(usize, usize),
    WeightMismatch { reported: Weight, actual: Weight },
}

impl fmt::Display for SolutionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolutionViolation::WrongHost { expected, found } => {
                write!(
                    f,
                    "solution sized for {found} vertices, graph has {expected}"
                )
            }
            SolutionViolation::EmptyCluster(i) => write!(f, "cluster {i} is empty"),
            SolutionViolation::OverlappingClusters(i, j) => {
                write!(f, "clusters {i} and {j} overlap")
            }
            SolutionViolation::VertexSetMismatch => {
                write!(f, "vertex set is not the union of the clusters")
            }
            SolutionViolation::NotAClique(i) => write!(f, "cluster {i} is not a clique"),
            SolutionViolation::EdgeBetweenClusters(i, j) => {
                write!(f, "edge between clusters {i} and {j}")
            }
            SolutionViolation::WeightMismatch { reported, actual } => {
                write!(f, "reported weight {reported} but clusters weigh {actual}")
            }
        }
    }
}

/// Checks that the clusters partition the vertex set, each cluster is a
/// clique, no edge joins two clusters, and the weight field is exact.
pub fn validate_solution(g: &WeightedGraph, s: &ClusterSolution) -> Result<(), SolutionViolation> {
    let host = |x: &VertexSet| x.capacity() != g.n();
    if host(&s.vertices) || s.clusters.iter().any(host) {
        let found = std::iter::once(&s.vertices)
            .chain(&s.clusters)
            .map(|x| x.capacity())
            .find(|&c| c != g.n())
            .unwrap_or(0);
        return Err(SolutionViolation::WrongHost {
            expected: g.n(),
            found,
        });
    }
    let mut union = g.empty_set();
    for (i, c) in s.clusters.iter().enumerate() {
        if c.is_empty() {
            return Err(SolutionViolation::EmptyCluster(i));
        }
        if c.intersects(&union) {
            let j = s.clusters[..i]
                .iter()
                .position(|d| d.intersects(c))
                .expect("overlap has a witness");
            return Err(SolutionViolation::OverlappingClusters(j, i));
        }
        union.union_with(c);
    }
    if union != s.vertices {
        return Err(SolutionViolation::VertexSetMismatch);
    }
    for (i, c) in s.clusters.iter().enumerate() {
        if !g.is_clique(c) {
            return Err(SolutionViolation::NotAClique(i));
        }
    }
    for (i, c) in s.clusters.iter().enumerate() {
        let reach = g.open_neighborhood(c);
        for (j, d) in s.clusters.iter().enumerate().skip(i + 1) {
            if reach.intersects(d) {
                return Err(SolutionViolation::EdgeBetweenClusters(i, j));
            }
        }
    }
    let actual = g.weight_of(&s.vertices);
    if actual != s.weight {
        return Err(SolutionViolation::WeightMismatch {
            reported: s.weight,
            actual,
        });
    }
    Ok(())
}
