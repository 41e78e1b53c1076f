//! Bottom-up dynamic program over a rooted clique tree.
//!
//! For every node K the table stores ψ(G_K), the weight of a maximum
//! cluster subgraph of G_K. Either the optimum avoids K, and ψ(G_K) is the
//! sum over the children, or its cluster meeting K lies inside some node Q
//! of the subtree and contains some v ∈ Q ∩ K \ P(K). In the second case the
//! cluster is X ∪ {v} for the X maximizing the supermodular function
//!
//! ```text
//! f_v(X) = w(X ∪ {v}) + ψ(G_K - N[X ∪ {v}])
//! ```
//!
//! and the residual term is a sum of table entries: G_K - N[C] splits into
//! the graphs G_Z of the highest subtree nodes Z untouched by N[C].

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::chordal::{validate_clique_tree, CliqueTree, NodeId, TreeViolation};
use crate::graph::{VertexId, VertexSet, Weight, WeightedGraph};
use crate::solution::ClusterSolution;
use crate::supermodular::{
    maximize_supermodular, MaximizerConfig, Method, OptimizeError, OracleError, SetFunction,
};

#[derive(Debug, Error)]
pub enum DpError {
    #[error("invalid clique tree: {0}")]
    InvalidTree(TreeViolation),
    #[error("inner maximization at node {node}: {source}")]
    Optimizer {
        node: NodeId,
        #[source]
        source: OptimizeError,
    },
}

/// Precondition failure of [`ChordalDp::evaluate_f`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContractError {
    #[error("node {q} is not in the subtree of node {k}")]
    NotInSubtree { k: NodeId, q: NodeId },
    #[error("vertex {v} is not in Q ∩ K \\ P(K)")]
    BadAnchor { v: VertexId },
    #[error("X is not a subset of Q \\ (P(K) ∪ {{v}})")]
    BadSubset,
    #[error("table entries below node {0} are not computed")]
    Incomplete(NodeId),
}

/// How the optimum at a node was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeChoice {
    ChildrenSum,
    Cluster {
        q: NodeId,
        v: VertexId,
        x: VertexSet,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpEntry {
    pub psi: Weight,
    pub choice: NodeChoice,
}

/// ψ(G_K) and its witness choice per clique-tree node.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DpTable {
    entries: Vec<Option<DpEntry>>,
}

impl DpTable {
    pub fn new(nodes: usize) -> Self {
        DpTable {
            entries: vec![None; nodes],
        }
    }

    pub fn get(&self, k: NodeId) -> Option<&DpEntry> {
        self.entries[k].as_ref()
    }

    pub fn psi(&self, k: NodeId) -> Option<Weight> {
        self.get(k).map(|e| e.psi)
    }

    pub fn set(&mut self, k: NodeId, entry: DpEntry) {
        self.entries[k] = Some(entry);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Surviving maximal subtrees of T_K after deleting a vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualDecomposition {
    pub roots: Vec<NodeId>,
    pub value: Weight,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DpStats {
    /// Inner maximizations, one per (K, Q, v).
    pub maximizations: u64,
    /// Oracle calls to f_v.
    pub evaluations: u64,
    pub exhaustive: u64,
    pub min_norm_point: u64,
}

#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    pub maximizer: MaximizerConfig,
}

/// The solver state for one graph and clique tree.
pub struct ChordalDp<'a> {
    graph: &'a WeightedGraph,
    tree: &'a CliqueTree,
    table: DpTable,
    stats: DpStats,
}

/// One inner maximization problem: anchor `v` in node `q`, evaluated at
/// node `k` over ground set Q \ (P(K) ∪ {v}).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FvInstance {
    pub k: NodeId,
    pub q: NodeId,
    pub v: VertexId,
    pub ground: Vec<VertexId>,
}

/// f_v as a [`SetFunction`] over indices into `ground`.
pub struct FvOracle<'s, 'a> {
    dp: &'s ChordalDp<'a>,
    instance: &'s FvInstance,
    calls: u64,
}

impl SetFunction for FvOracle<'_, '_> {
    fn ground_size(&self) -> usize {
        self.instance.ground.len()
    }

    fn evaluate(&mut self, subset: &FixedBitSet) -> Result<i64, OracleError> {
        self.calls += 1;
        let mut cluster = self.dp.graph.empty_set();
        cluster.insert(self.instance.v);
        for i in subset.ones() {
            cluster.insert(self.instance.ground[i]);
        }
        // Total weight fits in i64 by construction.
        Ok(self.dp.cluster_value(self.instance.k, &cluster) as i64)
    }
}

impl<'a> ChordalDp<'a> {
    /// Validates the tree and prepares an empty table.
    pub fn new(graph: &'a WeightedGraph, tree: &'a CliqueTree) -> Result<Self, DpError> {
        validate_clique_tree(graph, tree).map_err(DpError::InvalidTree)?;
        Ok(ChordalDp {
            graph,
            tree,
            table: DpTable::new(tree.len()),
            stats: DpStats::default(),
        })
    }

    pub fn table(&self) -> &DpTable {
        &self.table
    }

    pub fn stats(&self) -> &DpStats {
        &self.stats
    }

    pub fn tree(&self) -> &CliqueTree {
        self.tree
    }

    pub fn graph(&self) -> &WeightedGraph {
        self.graph
    }

    fn psi(&self, z: NodeId) -> Weight {
        self.table
            .psi(z)
            .expect("descendant entries are computed before their ancestors")
    }

    /// Fills the whole table bottom-up.
    pub fn solve(&mut self, opts: &SolveOptions) -> Result<Weight, DpError> {
        let order: Vec<NodeId> = self.tree.postorder().collect();
        for k in order {
            let entry = self.node_value(k, opts)?;
            self.table.set(k, entry);
        }
        Ok(self.psi(self.tree.root()))
    }

    /// Nodes Q of T_K with Q ∩ K \ P(K) ≠ ∅, by increasing id. The nodes
    /// containing a fixed vertex of K form a connected subtree through K, so
    /// a search from K that only enters such nodes finds them all.
    pub fn candidate_nodes(&self, k: NodeId) -> Vec<NodeId> {
        let private = self.tree.private_part(k);
        let mut out = vec![k];
        let mut stack = vec![k];
        while let Some(z) = stack.pop() {
            for &c in self.tree.children(z) {
                if self.tree.clique(c).intersects(&private) {
                    out.push(c);
                    stack.push(c);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Every (Q, v) inner maximization at node `k`, in tie-breaking order.
    pub fn fv_instances(&self, k: NodeId) -> Vec<FvInstance> {
        let private = self.tree.private_part(k);
        let parent = self.tree.parent(k).map(|p| self.tree.clique(p));
        let mut out = Vec::new();
        for q in self.candidate_nodes(k) {
            let q_clique = self.tree.clique(q);
            let mut base = q_clique.clone();
            if let Some(p) = parent {
                base.difference_with(p);
            }
            for v in q_clique.intersection(&private).iter() {
                let ground = base.iter().filter(|&u| u != v).collect();
                out.push(FvInstance { k, q, v, ground });
            }
        }
        out
    }

    /// The oracle for one instance. Requires all entries strictly below `k`.
    pub fn oracle<'s>(&'s self, instance: &'s FvInstance) -> FvOracle<'s, 'a> {
        FvOracle {
            dp: self,
            instance,
            calls: 0,
        }
    }

    /// Evaluates both branches of the recurrence at `k`. ChildrenSum wins
    /// ties; cluster candidates are compared in (Q, v, X) order.
    pub fn node_value(&mut self, k: NodeId, opts: &SolveOptions) -> Result<DpEntry, DpError> {
        let children_sum: Weight = self.tree.children(k).iter().map(|&c| self.psi(c)).sum();
        let mut best = DpEntry {
            psi: children_sum,
            choice: NodeChoice::ChildrenSum,
        };
        for instance in self.fv_instances(k) {
            let mut oracle = self.oracle(&instance);
            let result = maximize_supermodular(&mut oracle, &opts.maximizer)
                .map_err(|source| DpError::Optimizer { node: k, source })?;
            let calls = oracle.calls;
            self.stats.maximizations += 1;
            self.stats.evaluations += calls;
            match result.method {
                Method::Exhaustive => self.stats.exhaustive += 1,
                Method::MinNormPoint => self.stats.min_norm_point += 1,
            }
            let value = result.value as Weight;
            if value > best.psi {
                let x = VertexSet::from_vertices(
                    self.graph.n(),
                    result.argmax.ones().map(|i| instance.ground[i]),
                );
                best = DpEntry {
                    psi: value,
                    choice: NodeChoice::Cluster {
                        q: instance.q,
                        v: instance.v,
                        x,
                    },
                };
            }
        }
        Ok(best)
    }

    /// w(C) + ψ(G_K - N[C]).
    fn cluster_value(&self, k: NodeId, cluster: &VertexSet) -> Weight {
        let removed = self.graph.closed_neighborhood(cluster);
        self.graph.weight_of(cluster) + self.residual_decompose(k, &removed).value
    }

    /// f_v(X) with its preconditions checked.
    pub fn evaluate_f(
        &self,
        k: NodeId,
        q: NodeId,
        v: VertexId,
        x: &VertexSet,
    ) -> Result<Weight, ContractError> {
        if !self.tree.subtree_nodes(k).contains(&q) {
            return Err(ContractError::NotInSubtree { k, q });
        }
        let private = self.tree.private_part(k);
        if !self.tree.clique(q).contains(v) || !private.contains(v) {
            return Err(ContractError::BadAnchor { v });
        }
        let mut allowed = self.tree.clique(q).clone();
        if let Some(p) = self.tree.parent(k) {
            allowed.difference_with(self.tree.clique(p));
        }
        allowed.remove(v);
        if !x.is_subset(&allowed) {
            return Err(ContractError::BadSubset);
        }
        if let Some(z) = self
            .tree
            .subtree_nodes(k)
            .into_iter()
            .find(|&z| z != k && self.table.psi(z).is_none())
        {
            return Err(ContractError::Incomplete(z));
        }
        let mut cluster = x.clone();
        cluster.insert(v);
        Ok(self.cluster_value(k, &cluster))
    }

    /// Highest nodes Z of T_K \ {K} whose V(G_Z) avoids `removed`, and the
    /// sum of their table values.
    pub fn residual_decompose(&self, k: NodeId, removed: &VertexSet) -> ResidualDecomposition {
        let mut roots = Vec::new();
        let mut value = 0;
        let mut stack: Vec<NodeId> = self.tree.children(k).iter().rev().copied().collect();
        while let Some(z) = stack.pop() {
            if self.tree.subtree_vertices(z).is_disjoint(removed) {
                roots.push(z);
                value += self.psi(z);
            } else {
                stack.extend(self.tree.children(z).iter().rev().copied());
            }
        }
        ResidualDecomposition { roots, value }
    }

    /// Walks the stored choices from the root to an optimal solution.
    pub fn reconstruct(&self) -> ClusterSolution {
        let mut clusters = Vec::new();
        let mut stack = vec![self.tree.root()];
        while let Some(k) = stack.pop() {
            let entry = self.table.get(k).expect("table is complete");
            match &entry.choice {
                NodeChoice::ChildrenSum => stack.extend(self.tree.children(k).iter().copied()),
                NodeChoice::Cluster { v, x, .. } => {
                    let mut cluster = x.clone();
                    cluster.insert(*v);
                    let removed = self.graph.closed_neighborhood(&cluster);
                    stack.extend(self.residual_decompose(k, &removed).roots);
                    clusters.push(cluster);
                }
            }
        }
        ClusterSolution::from_clusters(self.graph, clusters)
    }
}

/// Output of [`solve_chordal`].
#[derive(Clone, Debug)]
pub struct ChordalOutcome {
    pub value: Weight,
    pub solution: ClusterSolution,
    pub table: DpTable,
    pub stats: DpStats,
}

/// Maximum-weight cluster subgraph of a chordal graph, given a clique tree.
pub fn solve_chordal(
    g: &WeightedGraph,
    t: &CliqueTree,
    opts: &SolveOptions,
) -> Result<ChordalOutcome, DpError> {
    let mut dp = ChordalDp::new(g, t)?;
    let value = dp.solve(opts)?;
    let solution = dp.reconstruct();
    debug_assert_eq!(solution.weight, value);
    Ok(ChordalOutcome {
        value,
        solution,
        table: dp.table,
        stats: dp.stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chordal::{clique_tree_of, CliqueTree};
    use crate::fixtures::*;
    use crate::oracle::{brute_g, brute_psi};
    use crate::solution::validate_solution;

    fn set(n: usize, vs: &[usize]) -> VertexSet {
        VertexSet::from_vertices(n, vs.iter().copied())
    }

    fn solve(g: &WeightedGraph) -> ChordalOutcome {
        let t = clique_tree_of(g).unwrap();
        solve_chordal(g, &t, &SolveOptions::default()).unwrap()
    }

    #[test]
    fn complete_graph_keeps_everything() {
        let g = complete(5).with_weights(vec![4, 0, 2, 9, 1]).unwrap();
        let out = solve(&g);
        assert_eq!(out.value, 16);
        assert_eq!(out.solution.clusters.len(), 1);
    }

    #[test]
    fn disjoint_cliques_keep_everything() {
        let g = WeightedGraph::unit(6, [(0, 1), (1, 2), (0, 2), (3, 4)]).unwrap();
        let out = solve(&g);
        assert_eq!(out.value, 6);
        assert_eq!(out.solution.deleted(&g), g.empty_set());
        assert_eq!(out.solution.clusters.len(), 3);
    }

    #[test]
    fn single_clique_reconstructs_one_cluster() {
        let g = complete(3);
        let out = solve(&g);
        assert_eq!(out.solution.clusters, vec![g.vertex_set()]);
    }

    #[test]
    fn two_far_apart_cliques_give_two_clusters() {
        // Triangles {0,1,2} and {4,5,6} joined through vertex 3.
        let g = WeightedGraph::from_edges(
            vec![5, 5, 5, 1, 5, 5, 5],
            [
                (0, 1),
                (1, 2),
                (0, 2),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 6),
                (4, 6),
            ],
        )
        .unwrap();
        let out = solve(&g);
        assert_eq!(out.value, 30);
        assert_eq!(
            out.solution.clusters,
            vec![set(7, &[0, 1, 2]), set(7, &[4, 5, 6])]
        );
    }

    #[test]
    fn leaf_entries_follow_the_leaf_formula() {
        let g = figure1().with_weights((1..=14).collect()).unwrap();
        let t = clique_tree_of(&g).unwrap();
        let out = solve_chordal(&g, &t, &SolveOptions::default()).unwrap();
        for z in 0..t.len() {
            if t.children(z).is_empty() {
                assert_eq!(out.table.psi(z), Some(g.weight_of(&t.private_part(z))));
            }
        }
    }

    #[test]
    fn zero_weights_prefer_children_sum() {
        let g = path(4).with_weights(vec![0; 4]).unwrap();
        let out = solve(&g);
        assert_eq!(out.value, 0);
        for k in 0..out.table.len() {
            assert_eq!(out.table.get(k).unwrap().choice, NodeChoice::ChildrenSum);
        }
        assert!(out.solution.clusters.is_empty());
    }

    #[test]
    fn figure1_matches_brute_force() {
        let g = figure1();
        let out = solve(&g);
        let (brute, _) = brute_psi(&g).unwrap();
        assert_eq!(out.value, brute);
        assert_eq!(validate_solution(&g, &out.solution), Ok(()));
    }

    #[test]
    fn invalid_tree_is_rejected() {
        let g = path(3);
        let t = CliqueTree::from_parts(3, vec![g.vertex_set()], vec![], 0).unwrap();
        assert!(matches!(
            solve_chordal(&g, &t, &SolveOptions::default()),
            Err(DpError::InvalidTree(_))
        ));
    }

    fn figure1_dp() -> (WeightedGraph, CliqueTree) {
        let g = figure1();
        let t = clique_tree_of(&g).unwrap();
        (g, t)
    }

    #[test]
    fn evaluate_f_examples() {
        let (g, t) = figure1_dp();
        let mut dp = ChordalDp::new(&g, &t).unwrap();
        dp.solve(&SolveOptions::default()).unwrap();
        let root = t.root();
        assert_eq!(t.clique(root), &set(14, &[0, 1, 2]));
        let value = dp.evaluate_f(root, root, 0, &set(14, &[1, 2])).unwrap();
        assert_eq!(
            value,
            brute_g(&g, &set(14, &[0, 1, 2]), &set(14, &[0, 1, 2]))
                .unwrap()
                .0
        );

        // Contract violations.
        assert_eq!(
            dp.evaluate_f(root, root, 0, &set(14, &[0])),
            Err(ContractError::BadSubset)
        );
        assert_eq!(
            dp.evaluate_f(root, root, 5, &set(14, &[])),
            Err(ContractError::BadAnchor { v: 5 })
        );
        let leaf = (0..t.len()).find(|&z| t.children(z).is_empty()).unwrap();
        assert!(matches!(
            dp.evaluate_f(leaf, root, 0, &set(14, &[])),
            Err(ContractError::NotInSubtree { .. })
        ));

        // Single node over a clique.
        let k = complete(3).with_weights(vec![2, 3, 4]).unwrap();
        let tk = clique_tree_of(&k).unwrap();
        let mut dk = ChordalDp::new(&k, &tk).unwrap();
        dk.solve(&SolveOptions::default()).unwrap();
        assert_eq!(dk.evaluate_f(0, 0, 1, &set(3, &[])).unwrap(), 3);
        assert_eq!(dk.evaluate_f(0, 0, 1, &set(3, &[0, 2])).unwrap(), 9);
    }

    #[test]
    fn residual_examples() {
        let (g, t) = figure1_dp();
        let mut dp = ChordalDp::new(&g, &t).unwrap();
        dp.solve(&SolveOptions::default()).unwrap();
        let root = t.root();
        let everything = g.vertex_set();
        let r = dp.residual_decompose(root, &everything);
        assert!(r.roots.is_empty());
        assert_eq!(r.value, 0);

        let removed = g.closed_neighborhood(&set(14, &[0, 1, 2]));
        let r = dp.residual_decompose(root, &removed);
        let mut union = g.empty_set();
        for &z in &r.roots {
            assert!(union.is_disjoint(t.subtree_vertices(z)));
            union.union_with(t.subtree_vertices(z));
        }
        assert_eq!(union, everything.difference(&removed));
        // Star-shaped: each child subtree of a single-clique hub either fully
        // survives or is touched.
        for &c in t.children(root) {
            let inside = r.roots.contains(&c);
            assert_eq!(inside, t.subtree_vertices(c).is_disjoint(&removed));
        }
    }

    #[test]
    fn candidate_nodes_cover_all_intersecting_nodes() {
        let (g, t) = figure1_dp();
        let dp = ChordalDp::new(&g, &t).unwrap();
        for k in 0..t.len() {
            let private = t.private_part(k);
            let mut brute: Vec<NodeId> = t
                .subtree_nodes(k)
                .into_iter()
                .filter(|&q| t.clique(q).intersects(&private))
                .collect();
            brute.sort_unstable();
            assert_eq!(dp.candidate_nodes(k), brute);
        }
    }
}
