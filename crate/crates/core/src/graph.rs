//! Vertex-weighted undirected simple graphs backed by word-packed bitsets.

use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

/// Dense 0-based vertex index, stable within one graph.
pub type VertexId = usize;

/// Nonnegative scaled integer weight.
pub type Weight = u64;

/// Largest admissible total weight of a graph. Keeping totals inside `i64`
/// lets the set-function optimizer negate values without overflow.
pub const MAX_TOTAL_WEIGHT: Weight = i64::MAX as Weight;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(VertexId, VertexId),
    #[error("total vertex weight exceeds {MAX_TOTAL_WEIGHT}")]
    WeightOverflow,
}

/// A set of vertices of a host graph on `capacity()` vertices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(FixedBitSet);

impl VertexSet {
    pub fn new(n: usize) -> Self {
        VertexSet(FixedBitSet::with_capacity(n))
    }

    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        VertexSet(bits)
    }

    pub fn from_vertices<I: IntoIterator<Item = VertexId>>(n: usize, vertices: I) -> Self {
        let mut s = Self::new(n);
        for v in vertices {
            s.insert(v);
        }
        s
    }

    /// Number of vertices of the host graph.
    pub fn capacity(&self) -> usize {
        self.0.len()
    }

    pub fn insert(&mut self, v: VertexId) {
        self.0.insert(v);
    }

    pub fn remove(&mut self, v: VertexId) {
        self.0.set(v, false);
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.contains(v)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    /// Vertices in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.0.ones()
    }

    pub fn first(&self) -> Option<VertexId> {
        self.0.minimum()
    }

    pub fn to_vec(&self) -> Vec<VertexId> {
        self.iter().collect()
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.0.union_with(&other.0);
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        self.0.intersect_with(&other.0);
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        self.0.difference_with(&other.0);
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.0.intersection_count(&other.0)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        !self.is_disjoint(other)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Undirected simple graph with a nonnegative weight per vertex.
///
/// Immutable once built. Adjacency is symmetric, loop-free and stored as one
/// bitset row per vertex.
#[derive(Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    adjacency: Vec<VertexSet>,
    weights: Vec<Weight>,
    edge_count: usize,
    total_weight: Weight,
}

impl WeightedGraph {
    /// Builds a graph from weights and an edge list. Rejects self-loops,
    /// parallel edges, out-of-range endpoints and totals above
    /// [`MAX_TOTAL_WEIGHT`].
    pub fn from_edges<I>(weights: Vec<Weight>, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let n = weights.len();
        let total_weight = weights
            .iter()
            .try_fold(0u64, |acc, &w| acc.checked_add(w))
            .filter(|&t| t <= MAX_TOTAL_WEIGHT)
            .ok_or(GraphError::WeightOverflow)?;
        let mut adjacency = vec![VertexSet::new(n); n];
        let mut edge_count = 0;
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if adjacency[u].contains(v) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            adjacency[u].insert(v);
            adjacency[v].insert(u);
            edge_count += 1;
        }
        Ok(WeightedGraph {
            adjacency,
            weights,
            edge_count,
            total_weight,
        })
    }

    /// Unit-weight graph on `n` vertices.
    pub fn unit<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        Self::from_edges(vec![1; n], edges)
    }

    /// Same adjacency, new weights.
    pub fn with_weights(&self, weights: Vec<Weight>) -> Result<Self, GraphError> {
        assert_eq!(weights.len(), self.n(), "weight vector length mismatch");
        Self::from_edges(weights, self.edges())
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn weight(&self, v: VertexId) -> Weight {
        self.weights[v]
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn total_weight(&self) -> Weight {
        self.total_weight
    }

    /// Open neighborhood N(v).
    pub fn neighbors(&self, v: VertexId) -> &VertexSet {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adjacency[u].contains(v)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.adjacency[u]
                .iter()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::new(self.n())
    }

    /// N[X], the union of closed neighborhoods over `x`.
    pub fn closed_neighborhood(&self, x: &VertexSet) -> VertexSet {
        let mut out = x.clone();
        for v in x.iter() {
            out.union_with(&self.adjacency[v]);
        }
        out
    }

    /// N(X) = N[X] \ X.
    pub fn open_neighborhood(&self, x: &VertexSet) -> VertexSet {
        let mut out = self.closed_neighborhood(x);
        out.difference_with(x);
        out
    }

    /// w(X). Cannot overflow: the total is bounded at construction.
    pub fn weight_of(&self, x: &VertexSet) -> Weight {
        x.iter().map(|v| self.weights[v]).sum()
    }

    /// G[X] relabeled to `0..|X|`, with the map from new ids to old ids.
    pub fn induced_subgraph(&self, x: &VertexSet) -> (WeightedGraph, Vec<VertexId>) {
        let old_ids = x.to_vec();
        let mut new_id = vec![usize::MAX; self.n()];
        for (i, &v) in old_ids.iter().enumerate() {
            new_id[v] = i;
        }
        let weights = old_ids.iter().map(|&v| self.weights[v]).collect();
        let edges: Vec<_> = self
            .edges()
            .filter(|&(u, v)| x.contains(u) && x.contains(v))
            .map(|(u, v)| (new_id[u], new_id[v]))
            .collect();
        let sub = WeightedGraph::from_edges(weights, edges)
            .expect("induced subgraph of a valid graph is valid");
        (sub, old_ids)
    }

    /// Connected components of G[X], each as a vertex set, ordered by their
    /// smallest vertex.
    pub fn components(&self, x: &VertexSet) -> Vec<VertexSet> {
        let mut unseen = x.clone();
        let mut out = Vec::new();
        while let Some(start) = unseen.first() {
            let mut comp = self.empty_set();
            let mut frontier = vec![start];
            unseen.remove(start);
            comp.insert(start);
            while let Some(u) = frontier.pop() {
                let next = self.adjacency[u].intersection(&unseen);
                for w in next.iter() {
                    unseen.remove(w);
                    comp.insert(w);
                    frontier.push(w);
                }
            }
            out.push(comp);
        }
        out
    }

    /// Component of G[X] containing `v`.
    pub fn component_of(&self, x: &VertexSet, v: VertexId) -> VertexSet {
        let mut comp = self.empty_set();
        if !x.contains(v) {
            return comp;
        }
        comp.insert(v);
        let mut frontier = vec![v];
        while let Some(u) = frontier.pop() {
            let mut next = self.adjacency[u].intersection(x);
            next.difference_with(&comp);
            for w in next.iter() {
                comp.insert(w);
                frontier.push(w);
            }
        }
        comp
    }

    pub fn is_clique(&self, x: &VertexSet) -> bool {
        let k = x.len();
        x.iter()
            .all(|v| self.adjacency[v].intersection_len(x) == k - 1)
    }

    /// True iff every component of G[S] is a clique.
    ///
    /// Equivalent local test: adjacent vertices of S have equal closed
    /// neighborhoods inside S.
    pub fn is_cluster_graph(&self, s: &VertexSet) -> bool {
        s.iter().all(|v| {
            let mut closed = self.adjacency[v].intersection(s);
            closed.insert(v);
            self.adjacency[v].intersection(s).iter().all(|u| {
                let mut other = self.adjacency[u].intersection(s);
                other.insert(u);
                other == closed
            })
        })
    }
}

impl fmt::Debug for WeightedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightedGraph")
            .field("n", &self.n())
            .field("weights", &self.weights)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::figure1;
    use proptest::prelude::*;

    fn set(n: usize, vs: &[VertexId]) -> VertexSet {
        VertexSet::from_vertices(n, vs.iter().copied())
    }

    fn p3() -> WeightedGraph {
        WeightedGraph::unit(3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn closed_neighborhood_examples() {
        let g = p3();
        assert_eq!(g.closed_neighborhood(&set(3, &[1])), set(3, &[0, 1, 2]));
        assert!(g.closed_neighborhood(&set(3, &[])).is_empty());
        let f = figure1();
        assert_eq!(f.closed_neighborhood(&set(14, &[0])), set(14, &[0, 1, 2]));
    }

    #[test]
    fn weight_of_examples() {
        let g = WeightedGraph::unit(5, []).unwrap();
        assert_eq!(g.weight_of(&g.vertex_set()), 5);
        assert_eq!(g.weight_of(&g.empty_set()), 0);
        let h = WeightedGraph::from_edges(vec![3, 7], [(0, 1)]).unwrap();
        assert_eq!(h.weight_of(&h.vertex_set()), 10);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            WeightedGraph::unit(2, [(0, 0)]).unwrap_err(),
            GraphError::SelfLoop(0)
        );
        assert_eq!(
            WeightedGraph::unit(2, [(0, 1), (1, 0)]).unwrap_err(),
            GraphError::DuplicateEdge(0, 1)
        );
        assert!(matches!(
            WeightedGraph::unit(2, [(0, 2)]),
            Err(GraphError::VertexOutOfRange { vertex: 2, n: 2 })
        ));
        assert_eq!(
            WeightedGraph::from_edges(vec![u64::MAX, 1], []).unwrap_err(),
            GraphError::WeightOverflow
        );
    }

    #[test]
    fn induced_subgraph_examples() {
        let f = figure1();
        let (all, map) = f.induced_subgraph(&f.vertex_set());
        assert_eq!(all, f);
        assert_eq!(map, (0..14).collect::<Vec<_>>());

        let (null, map) = f.induced_subgraph(&f.empty_set());
        assert_eq!(null.n(), 0);
        assert!(map.is_empty());

        let (sub, map) = f.induced_subgraph(&set(14, &[10, 11, 12, 13]));
        assert_eq!(map, vec![10, 11, 12, 13]);
        let edges: Vec<_> = sub.edges().map(|(u, v)| (map[u], map[v])).collect();
        assert_eq!(
            edges,
            vec![(10, 11), (10, 12), (11, 12), (11, 13), (12, 13)]
        );
    }

    #[test]
    fn components_examples() {
        let g = p3();
        assert_eq!(g.components(&g.vertex_set()), vec![g.vertex_set()]);
        assert!(g.components(&g.empty_set()).is_empty());
        let e = WeightedGraph::unit(2, []).unwrap();
        assert_eq!(
            e.components(&e.vertex_set()),
            vec![set(2, &[0]), set(2, &[1])]
        );
    }

    #[test]
    fn clique_and_cluster_examples() {
        let g = p3();
        assert!(g.is_clique(&set(3, &[2])));
        assert!(!g.is_clique(&set(3, &[0, 2])));
        assert!(figure1().is_clique(&set(14, &[0, 1, 2])));

        assert!(g.is_cluster_graph(&g.empty_set()));
        assert!(!g.is_cluster_graph(&g.vertex_set()));
        let two_triangles =
            WeightedGraph::unit(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert!(two_triangles.is_cluster_graph(&two_triangles.vertex_set()));
    }

    fn has_induced_p3(g: &WeightedGraph, s: &VertexSet) -> bool {
        let vs = s.to_vec();
        for &a in &vs {
            for &b in &vs {
                for &c in &vs {
                    if a < c
                        && a != b
                        && b != c
                        && g.has_edge(a, b)
                        && g.has_edge(b, c)
                        && !g.has_edge(a, c)
                    {
                        return true;
                    }
                }
            }
        }
        false
    }

    fn arb_graph() -> impl Strategy<Value = (WeightedGraph, Vec<bool>)> {
        (1usize..=12).prop_flat_map(|n| {
            (
                proptest::collection::vec(0u64..10, n),
                proptest::collection::vec(any::<bool>(), n * (n - 1) / 2),
                proptest::collection::vec(any::<bool>(), n),
            )
                .prop_map(move |(w, e, mask)| {
                    let mut edges = Vec::new();
                    let mut k = 0;
                    for u in 0..n {
                        for v in u + 1..n {
                            if e[k] {
                                edges.push((u, v));
                            }
                            k += 1;
                        }
                    }
                    (WeightedGraph::from_edges(w, edges).unwrap(), mask)
                })
        })
    }

    proptest! {
        #[test]
        fn cluster_graph_iff_no_induced_p3((g, mask) in arb_graph()) {
            let s = VertexSet::from_vertices(g.n(), (0..g.n()).filter(|&v| mask[v]));
            prop_assert_eq!(g.is_cluster_graph(&s), !has_induced_p3(&g, &s));
        }

        #[test]
        fn neighborhood_and_partition_laws((g, mask) in arb_graph()) {
            let x = VertexSet::from_vertices(g.n(), (0..g.n()).filter(|&v| mask[v]));
            let closed = g.closed_neighborhood(&x);
            prop_assert!(x.is_subset(&closed));
            prop_assert_eq!(closed == x, g.open_neighborhood(&x).is_empty());

            let comps = g.components(&x);
            let mut union = g.empty_set();
            for c in &comps {
                prop_assert!(union.is_disjoint(c));
                union.union_with(c);
            }
            prop_assert_eq!(&union, &x);

            let rest = g.vertex_set().difference(&x);
            prop_assert_eq!(g.weight_of(&x) + g.weight_of(&rest), g.total_weight());
        }
    }
}
