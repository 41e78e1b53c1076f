//! Brute-force ground truth and an executable check of the supermodularity
//! argument for g.
//!
//! Everything here is independent of the clique-tree machinery: ψ and g are
//! computed by enumerating cluster subgraphs directly.

use thiserror::Error;

use crate::graph::{VertexSet, Weight, WeightedGraph};
use crate::solution::{validate_solution, ClusterSolution};

/// Largest graph the enumerators accept by default.
pub const BRUTE_CAP: usize = 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {n} vertices, brute force is capped at {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("clique of {size} vertices exceeds the cap of {cap}")]
    CliqueTooLarge { size: usize, cap: usize },
    #[error("K is not a clique")]
    NotAClique,
    #[error("X is not a subset of K")]
    NotASubset,
    #[error("A1 and A2 are comparable")]
    Comparable,
}

/// Exhaustive search over vertex subsets inducing cluster graphs.
///
/// Subsets are grown vertex by vertex; cluster graphs are closed under
/// taking induced subgraphs, so extending only feasible prefixes still
/// visits every feasible set. A branch stops once even taking every
/// remaining vertex cannot beat the incumbent.
struct Enumerator {
    adj: Vec<u32>,
    weights: Vec<Weight>,
    order: Vec<usize>,
    suffix: Vec<Weight>,
    best: Weight,
    best_set: u32,
}

impl Enumerator {
    fn run(g: &WeightedGraph, allowed: &VertexSet) -> (Weight, u32) {
        let n = g.n();
        let adj: Vec<u32> = (0..n)
            .map(|v| g.neighbors(v).iter().fold(0u32, |m, u| m | 1 << u))
            .collect();
        let order: Vec<usize> = allowed.iter().collect();
        let mut suffix = vec![0; order.len() + 1];
        for i in (0..order.len()).rev() {
            suffix[i] = suffix[i + 1] + g.weight(order[i]);
        }
        let mut e = Enumerator {
            adj,
            weights: g.weights().to_vec(),
            order,
            suffix,
            best: 0,
            best_set: 0,
        };
        e.search(0, 0, 0);
        (e.best, e.best_set)
    }

    fn can_join(&self, s: u32, v: usize) -> bool {
        let touched = self.adj[v] & s;
        if touched == 0 {
            return true;
        }
        let u = touched.trailing_zeros() as usize;
        touched == (self.adj[u] & s) | 1 << u
    }

    fn search(&mut self, i: usize, s: u32, weight: Weight) {
        if weight > self.best {
            self.best = weight;
            self.best_set = s;
        }
        if i == self.order.len() || weight + self.suffix[i] <= self.best {
            return;
        }
        let v = self.order[i];
        if self.can_join(s, v) {
            self.search(i + 1, s | 1 << v, weight + self.weights[v]);
        }
        self.search(i + 1, s, weight);
    }
}

fn set_of_mask(n: usize, mask: u32) -> VertexSet {
    VertexSet::from_vertices(n, (0..n).filter(|&v| mask >> v & 1 == 1))
}

fn check_cap(g: &WeightedGraph, cap: usize) -> Result<(), OracleError> {
    if g.n() > cap.min(32) {
        return Err(OracleError::TooLarge { n: g.n(), cap });
    }
    Ok(())
}

/// ψ(G) and an optimal solution, by enumeration.
pub fn brute_psi(g: &WeightedGraph) -> Result<(Weight, ClusterSolution), OracleError> {
    brute_psi_capped(g, BRUTE_CAP)
}

pub fn brute_psi_capped(
    g: &WeightedGraph,
    cap: usize,
) -> Result<(Weight, ClusterSolution), OracleError> {
    check_cap(g, cap)?;
    let (value, mask) = Enumerator::run(g, &g.vertex_set());
    let sol = ClusterSolution::from_vertex_set(g, &set_of_mask(g.n(), mask));
    Ok((value, sol))
}

/// g(X): the best weight of a solution of `h` in which `x` is a cluster,
/// i.e. `x ⊆ S` and `N(x) ∩ S = ∅`. For a clique `x` such solutions are
/// exactly `x` plus a cluster subgraph of `h - N[x]`. `x = ∅` imposes no
/// constraint.
pub fn brute_g(
    h: &WeightedGraph,
    k: &VertexSet,
    x: &VertexSet,
) -> Result<(Weight, ClusterSolution), OracleError> {
    check_cap(h, BRUTE_CAP)?;
    if !h.is_clique(k) {
        return Err(OracleError::NotAClique);
    }
    if !x.is_subset(k) {
        return Err(OracleError::NotASubset);
    }
    let allowed = h.vertex_set().difference(&h.closed_neighborhood(x));
    let (rest, mask) = Enumerator::run(h, &allowed);
    let mut s = set_of_mask(h.n(), mask);
    s.union_with(x);
    let sol = ClusterSolution::from_vertex_set(h, &s);
    Ok((rest + h.weight_of(x), sol))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

/// Bipartite graph on the clusters of two solutions; two clusters are
/// adjacent when some edge of the host graph joins them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InteractionGraph {
    pub nodes: Vec<(Side, VertexSet)>,
    pub edges: Vec<(usize, usize)>,
    pub a1: usize,
    pub a2: usize,
}

impl InteractionGraph {
    fn neighbors(&self, skip: Option<(usize, usize)>) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for &(a, b) in &self.edges {
            if skip == Some((a, b)) || skip == Some((b, a)) {
                continue;
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    fn reach(&self, start: usize, skip: Option<(usize, usize)>) -> Vec<bool> {
        let adj = self.neighbors(skip);
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.iter().any(|&e| e == (a, b) || e == (b, a))
    }

    /// No edge joins two clusters of the same solution.
    pub fn is_bipartite(&self) -> bool {
        self.edges
            .iter()
            .all(|&(a, b)| self.nodes[a].0 != self.nodes[b].0)
    }

    pub fn is_connected(&self) -> bool {
        self.nodes.is_empty() || self.reach(0, None).into_iter().all(|x| x)
    }

    /// Removing the edge separates its endpoints.
    pub fn is_bridge(&self, a: usize, b: usize) -> bool {
        self.has_edge(a, b) && !self.reach(a, Some((a, b)))[b]
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edges.len() + 1 == self.nodes.len()
    }

    /// Nodes on `start`'s side once the edge `a`–`b` is removed.
    pub fn side_without(&self, a: usize, b: usize, start: usize) -> Vec<bool> {
        self.reach(start, Some((a, b)))
    }
}

/// Builds the interaction graph of `s1` and `s2`. Clusters of `s1` come
/// first, in their stored order, then those of `s2`. Returns `None` unless
/// `a1` is a cluster of `s1` and `a2` one of `s2`.
pub fn build_interaction_graph(
    h: &WeightedGraph,
    s1: &ClusterSolution,
    s2: &ClusterSolution,
    a1: &VertexSet,
    a2: &VertexSet,
) -> Option<InteractionGraph> {
    let first = s1.clusters.iter().position(|c| c == a1)?;
    let second = s2.clusters.iter().position(|c| c == a2)? + s1.clusters.len();
    let nodes: Vec<(Side, VertexSet)> = s1
        .clusters
        .iter()
        .map(|c| (Side::First, c.clone()))
        .chain(s2.clusters.iter().map(|c| (Side::Second, c.clone())))
        .collect();
    // Vertices with a neighbor in each cluster.
    let reach: Vec<VertexSet> = nodes
        .iter()
        .map(|(_, c)| {
            let mut r = h.empty_set();
            for v in c.iter() {
                r.union_with(h.neighbors(v));
            }
            r
        })
        .collect();
    let mut edges = Vec::new();
    for (a, r) in reach.iter().enumerate() {
        for (b, (_, c)) in nodes.iter().enumerate().skip(a + 1) {
            if r.intersects(c) {
                edges.push((a, b));
            }
        }
    }
    Some(InteractionGraph {
        nodes,
        edges,
        a1: first,
        a2: second,
    })
}

/// Transcript of the exchange argument for one pair (A1, A2).
#[derive(Clone, Debug)]
pub struct Theorem2Report {
    pub g_a1: Weight,
    pub g_a2: Weight,
    pub g_union: Weight,
    pub g_intersection: Weight,
    /// Optimal solutions for A1 and A2, restricted to the component of
    /// H[S1 ∪ S2] that contains A1 ∪ A2.
    pub s1: ClusterSolution,
    pub s2: ClusterSolution,
    pub interaction: InteractionGraph,
    pub s_union: ClusterSolution,
    pub s_intersection: ClusterSolution,
    pub no_shared_cluster: bool,
    pub bipartite: bool,
    pub connected: bool,
    pub a1a2_edge: bool,
    pub bridge: bool,
    pub s_union_valid: bool,
    pub s_intersection_valid: bool,
    pub union_is_cluster: bool,
    pub intersection_is_cluster: bool,
    pub weight_identity: bool,
    pub lower_bounds_hold: bool,
    /// Observed only; not part of [`Theorem2Report::passed`].
    pub interaction_is_tree: bool,
}

impl Theorem2Report {
    pub fn failures(&self) -> Vec<&'static str> {
        [
            (
                self.no_shared_cluster,
                "a clique is a cluster of both solutions",
            ),
            (self.bipartite, "interaction graph is not bipartite"),
            (self.connected, "interaction graph is disconnected"),
            (
                self.a1a2_edge,
                "A1 and A2 are not adjacent in the interaction graph",
            ),
            (self.bridge, "A1A2 is not a bridge"),
            (self.s_union_valid, "S_union is not a solution"),
            (
                self.s_intersection_valid,
                "S_intersection is not a solution",
            ),
            (self.union_is_cluster, "A1 ∪ A2 is not a cluster of S_union"),
            (
                self.intersection_is_cluster,
                "A1 ∩ A2 is not a cluster of S_intersection",
            ),
            (
                self.weight_identity,
                "w(S_union) + w(S_intersection) != w(S1) + w(S2)",
            ),
            (
                self.lower_bounds_hold,
                "extended solutions exceed g(A1 ∪ A2) or g(A1 ∩ A2)",
            ),
        ]
        .into_iter()
        .filter(|(ok, _)| !ok)
        .map(|(_, msg)| msg)
        .collect()
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }
}

/// Replays the exchange argument on concrete optimal solutions.
///
/// S1 and S2 are the enumeration-first optima for A1 and A2. The instance
/// is restricted to S1 ∪ S2 and to the component containing A1 ∪ A2; there
/// the interaction graph is built, the bridge A1A2 is removed, and the two
/// sides are recombined into S∪ (S1-clusters on A1's side, S2-clusters on
/// A2's side) and S∩ (the rest plus A1 ∩ A2).
pub fn check_theorem2_construction(
    h: &WeightedGraph,
    k: &VertexSet,
    a1: &VertexSet,
    a2: &VertexSet,
) -> Result<Theorem2Report, OracleError> {
    check_cap(h, BRUTE_CAP)?;
    if !h.is_clique(k) {
        return Err(OracleError::NotAClique);
    }
    if !a1.is_subset(k) || !a2.is_subset(k) {
        return Err(OracleError::NotASubset);
    }
    if a1.is_subset(a2) || a2.is_subset(a1) {
        return Err(OracleError::Comparable);
    }
    let (g_a1, s1_full) = brute_g(h, k, a1)?;
    let (g_a2, s2_full) = brute_g(h, k, a2)?;
    let union_set = a1.union(a2);
    let inter_set = a1.intersection(a2);
    let (g_union, _) = brute_g(h, k, &union_set)?;
    let (g_intersection, _) = brute_g(h, k, &inter_set)?;

    let domain = s1_full.vertices.union(&s2_full.vertices);
    let anchor = a1.first().expect("incomparable sets are nonempty");
    let comp = h.component_of(&domain, anchor);
    let restrict = |s: &ClusterSolution| {
        ClusterSolution::from_clusters(h, s.clusters.iter().filter(|c| c.is_subset(&comp)).cloned())
    };
    let s1 = restrict(&s1_full);
    let s2 = restrict(&s2_full);

    let no_shared_cluster = !s1.clusters.iter().any(|c| s2.has_cluster(c));
    let interaction = build_interaction_graph(h, &s1, &s2, a1, a2)
        .expect("A1 and A2 are clusters of their restricted solutions");
    let (n1, n2) = (interaction.a1, interaction.a2);
    let bipartite = interaction.is_bipartite();
    let connected = interaction.is_connected();
    let a1a2_edge = interaction.has_edge(n1, n2);
    let bridge = interaction.is_bridge(n1, n2);

    let side1 = interaction.side_without(n1, n2, n1);
    let side2 = interaction.side_without(n1, n2, n2);
    let mut s_union = h.empty_set();
    let mut s_inter = inter_set.clone();
    for (i, (side, c)) in interaction.nodes.iter().enumerate() {
        let to_union = match side {
            Side::First => side1[i],
            Side::Second => side2[i],
        };
        let to_inter = match side {
            Side::First => side2[i],
            Side::Second => side1[i],
        };
        if to_union {
            s_union.union_with(c);
        }
        if to_inter {
            s_inter.union_with(c);
        }
    }
    let s_union = ClusterSolution::from_vertex_set(h, &s_union);
    let s_intersection = ClusterSolution::from_vertex_set(h, &s_inter);
    let s_union_valid =
        validate_solution(h, &s_union).is_ok() && h.is_cluster_graph(&s_union.vertices);
    let s_intersection_valid = validate_solution(h, &s_intersection).is_ok()
        && h.is_cluster_graph(&s_intersection.vertices);
    let union_is_cluster = s_union.has_cluster(&union_set);
    let intersection_is_cluster = inter_set.is_empty() || s_intersection.has_cluster(&inter_set);
    let weight_identity = s_union.weight + s_intersection.weight == s1.weight + s2.weight;

    // Outside the component both solutions keep their own clusters.
    let outside1 = s1_full.vertices.difference(&comp);
    let outside2 = s2_full.vertices.difference(&comp);
    let ext_union = s_union.vertices.union(&outside1);
    let ext_inter = s_intersection.vertices.union(&outside2);
    let ext_ok = h.is_cluster_graph(&ext_union)
        && h.is_cluster_graph(&ext_inter)
        && h.open_neighborhood(&union_set).is_disjoint(&ext_union)
        && h.open_neighborhood(&inter_set).is_disjoint(&ext_inter);
    let lower_bounds_hold = ext_ok
        && h.weight_of(&ext_union) <= g_union
        && h.weight_of(&ext_inter) <= g_intersection
        && h.weight_of(&ext_union) + h.weight_of(&ext_inter) == g_a1 + g_a2;

    Ok(Theorem2Report {
        g_a1,
        g_a2,
        g_union,
        g_intersection,
        interaction_is_tree: interaction.is_tree(),
        s1,
        s2,
        interaction,
        s_union,
        s_intersection,
        no_shared_cluster,
        bipartite,
        connected,
        a1a2_edge,
        bridge,
        s_union_valid,
        s_intersection_valid,
        union_is_cluster,
        intersection_is_cluster,
        weight_identity,
        lower_bounds_hold,
    })
}

/// A pair of subsets of K violating the supermodular inequality for g.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GViolation {
    pub a1: VertexSet,
    pub a2: VertexSet,
    pub lhs: Weight,
    pub rhs: Weight,
}

pub const G_CHECK_MAX_N: usize = 18;
pub const G_CHECK_MAX_K: usize = 8;

/// Checks g(A1 ∪ A2) + g(A1 ∩ A2) ≥ g(A1) + g(A2) for every pair of subsets
/// of `k`.
pub fn check_supermodularity_of_g(
    h: &WeightedGraph,
    k: &VertexSet,
) -> Result<Option<GViolation>, OracleError> {
    check_cap(h, G_CHECK_MAX_N)?;
    if k.len() > G_CHECK_MAX_K {
        return Err(OracleError::CliqueTooLarge {
            size: k.len(),
            cap: G_CHECK_MAX_K,
        });
    }
    let members = k.to_vec();
    let subset = |mask: usize| {
        VertexSet::from_vertices(
            h.n(),
            members
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v),
        )
    };
    let total = 1usize << members.len();
    let values = (0..total)
        .map(|mask| brute_g(h, k, &subset(mask)).map(|r| r.0))
        .collect::<Result<Vec<_>, _>>()?;
    for a in 0..total {
        for b in a + 1..total {
            let lhs = values[a | b] + values[a & b];
            let rhs = values[a] + values[b];
            if lhs < rhs {
                return Ok(Some(GViolation {
                    a1: subset(a),
                    a2: subset(b),
                    lhs,
                    rhs,
                }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    fn set(n: usize, vs: &[usize]) -> VertexSet {
        VertexSet::from_vertices(n, vs.iter().copied())
    }

    /// Plain 2^n scan, independent of the pruned enumerator.
    fn naive_psi(g: &WeightedGraph) -> Weight {
        (0u32..1 << g.n())
            .map(|m| set_of_mask(g.n(), m))
            .filter(|s| g.is_cluster_graph(s))
            .map(|s| g.weight_of(&s))
            .max()
            .unwrap()
    }

    #[test]
    fn brute_psi_examples() {
        assert_eq!(brute_psi(&path(3)).unwrap().0, 2);
        // C4 by listing all 16 subsets: best is an edge or a non-adjacent
        // pair, weight 2.
        assert_eq!(naive_psi(&cycle(4)), 2);
        assert_eq!(brute_psi(&cycle(4)).unwrap().0, 2);
        let (value, sol) = brute_psi(&figure1()).unwrap();
        assert_eq!(value, naive_psi(&figure1()));
        assert_eq!(sol.weight, value);
        assert_eq!(validate_solution(&figure1(), &sol), Ok(()));
        assert!(matches!(
            brute_psi(&path(23)),
            Err(OracleError::TooLarge { n: 23, cap: 22 })
        ));
    }

    #[test]
    fn figure1_unit_psi_is_pinned() {
        // Frozen from the naive 2^14 scan above.
        assert_eq!(naive_psi(&figure1()), 11);
    }

    #[test]
    fn pruned_enumerator_matches_naive_scan() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.random_range(0..=10);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(0.4) {
                        edges.push((u, v));
                    }
                }
            }
            let w = (0..n).map(|_| rng.random_range(0..=10)).collect();
            let g = WeightedGraph::from_edges(w, edges).unwrap();
            assert_eq!(brute_psi(&g).unwrap().0, naive_psi(&g));
        }
    }

    #[test]
    fn brute_g_examples() {
        let g = figure1();
        let k = set(14, &[0, 1, 2]);
        assert_eq!(
            brute_g(&g, &k, &g.empty_set()).unwrap().0,
            brute_psi(&g).unwrap().0
        );
        let k4 = complete(4);
        assert_eq!(
            brute_g(&k4, &k4.vertex_set(), &k4.vertex_set()).unwrap().0,
            4
        );
        assert_eq!(
            brute_g(&g, &set(14, &[0, 1]), &set(14, &[2])),
            Err(OracleError::NotASubset)
        );
        assert_eq!(
            brute_g(&g, &set(14, &[0, 4]), &set(14, &[0])),
            Err(OracleError::NotAClique)
        );
    }

    #[test]
    fn figure2_values_are_supermodular() {
        let g = figure1();
        let k = set(14, &[0, 1, 2]);
        let val = |xs: &[usize]| brute_g(&g, &k, &set(14, xs)).unwrap().0;
        let (a1, a2, u, i) = (val(&[0, 1]), val(&[0, 2]), val(&[0, 1, 2]), val(&[0]));
        assert_eq!((a1, a2), (9, 9));
        assert!(u + i >= a1 + a2);
        assert_eq!(check_supermodularity_of_g(&g, &k), Ok(None));
    }

    #[test]
    fn singleton_clique_is_trivially_supermodular() {
        let g = figure1();
        assert_eq!(check_supermodularity_of_g(&g, &set(14, &[5])), Ok(None));
    }

    #[test]
    fn figure2_interaction_graph() {
        let g = figure1();
        let s1 = ClusterSolution::from_clusters(&g, FIGURE2_S1.iter().map(|c| set(14, c)));
        let s2 = ClusterSolution::from_clusters(&g, FIGURE2_S2.iter().map(|c| set(14, c)));
        assert_eq!(validate_solution(&g, &s1), Ok(()));
        assert_eq!(validate_solution(&g, &s2), Ok(()));
        let k = set(14, &[0, 1, 2]);
        assert_eq!(s1.weight, brute_g(&g, &k, &set(14, &[0, 1])).unwrap().0);
        assert_eq!(s2.weight, brute_g(&g, &k, &set(14, &[0, 2])).unwrap().0);

        let b =
            build_interaction_graph(&g, &s1, &s2, &set(14, &[0, 1]), &set(14, &[0, 2])).unwrap();
        assert_eq!(b.nodes.len(), 11);
        assert!(b.is_bipartite());
        assert!(b.is_bridge(b.a1, b.a2));
        assert!(b.is_tree());
        let index = |side: Side, c: &[usize]| {
            b.nodes
                .iter()
                .position(|(s, x)| *s == side && x == &set(14, c))
                .unwrap()
        };
        let mut expected: Vec<(usize, usize)> = FIGURE2_B_EDGES
            .iter()
            .map(|&(i, j)| {
                let a = index(Side::First, FIGURE2_S1[i]);
                let b = index(Side::Second, FIGURE2_S2[j]);
                (a.min(b), a.max(b))
            })
            .collect();
        expected.sort_unstable();
        let mut got = b.edges.clone();
        got.sort_unstable();
        assert_eq!(got, expected);
    }

    #[test]
    fn figure2_construction_passes() {
        let g = figure1();
        let r = check_theorem2_construction(
            &g,
            &set(14, &[0, 1, 2]),
            &set(14, &[0, 1]),
            &set(14, &[0, 2]),
        )
        .unwrap();
        assert!(r.passed(), "{:?}", r.failures());
    }

    #[test]
    fn nested_sets_are_refused() {
        let g = figure1();
        assert_eq!(
            check_theorem2_construction(
                &g,
                &set(14, &[0, 1, 2]),
                &set(14, &[0]),
                &set(14, &[0, 2])
            )
            .unwrap_err(),
            OracleError::Comparable
        );
    }

    #[test]
    fn interaction_graph_on_two_components() {
        // Before restriction, clusters in another component of H form their
        // own piece of B.
        let h = WeightedGraph::unit(5, [(0, 1), (3, 4)]).unwrap();
        let s1 = ClusterSolution::from_clusters(&h, [set(5, &[0]), set(5, &[3, 4])]);
        let s2 = ClusterSolution::from_clusters(&h, [set(5, &[1]), set(5, &[3])]);
        let b = build_interaction_graph(&h, &s1, &s2, &set(5, &[0]), &set(5, &[1])).unwrap();
        assert!(b.is_bipartite());
        assert!(!b.is_connected());
        assert!(b.is_bridge(b.a1, b.a2));
    }
}
