//! Dynamic program over a clique path.
//!
//! With cliques K_1, ..., K_ℓ in path order and K_0 = K_{ℓ+1} = ∅, let
//! G_p = G[(K_1 ∪ ... ∪ K_p) \ K_{p+1}]. Then
//!
//! ```text
//! ψ(G_p) = max_{0 ≤ i < p} ψ(G_i) + max_{i < j ≤ p} w(K_j \ (K_i ∪ K_{p+1}))
//! ```
//!
//! where the inner term is the rightmost cluster.

use thiserror::Error;

use crate::chordal::{validate_clique_tree, CliquePath, TreeViolation};
use crate::graph::{VertexSet, Weight, WeightedGraph};
use crate::solution::ClusterSolution;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntervalError {
    #[error("clique path is empty but the graph has {0} vertices")]
    Empty(usize),
    #[error("clique {0} is sized for a different graph")]
    WrongHost(usize),
    #[error("vertex {0} does not occupy a consecutive run of cliques")]
    NotConsecutive(usize),
    #[error("not a clique path of the graph: {0}")]
    Invalid(TreeViolation),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntervalChoice {
    /// p = 0.
    Base,
    /// Left part G_i and rightmost cluster taken from K_j.
    Split { i: usize, j: usize },
}

/// ψ(G_p) for p = 0..=ℓ, with the maximizing choice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalDpTable {
    pub psi: Vec<Weight>,
    pub choice: Vec<IntervalChoice>,
}

impl IntervalDpTable {
    pub fn len(&self) -> usize {
        self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psi.is_empty()
    }
}

/// K_j with the empty sentinels at 0 and ℓ + 1.
fn sentinel(path: &CliquePath, n: usize, j: usize) -> VertexSet {
    if j == 0 || j > path.len() {
        VertexSet::new(n)
    } else {
        path.cliques()[j - 1].clone()
    }
}

fn cluster_at(g: &WeightedGraph, path: &CliquePath, i: usize, j: usize, p: usize) -> VertexSet {
    let mut c = sentinel(path, g.n(), j);
    c.difference_with(&sentinel(path, g.n(), i));
    c.difference_with(&sentinel(path, g.n(), p + 1));
    c
}

/// max over i < j ≤ p of w(K_j \ (K_i ∪ K_{p+1})).
pub fn rightmost_cluster_weight(
    g: &WeightedGraph,
    path: &CliquePath,
    i: usize,
    p: usize,
) -> Weight {
    assert!(i < p && p <= path.len(), "need 0 <= i < p <= len");
    (i + 1..=p)
        .map(|j| g.weight_of(&cluster_at(g, path, i, j, p)))
        .max()
        .unwrap_or(0)
}

/// Range add, global max with leftmost argmax.
struct MaxTree {
    size: usize,
    max: Vec<Weight>,
    arg: Vec<usize>,
    lazy: Vec<Weight>,
}

impl MaxTree {
    fn new(size: usize) -> Self {
        let cap = 4 * size.max(1);
        let mut t = MaxTree {
            size,
            max: vec![0; cap],
            arg: vec![0; cap],
            lazy: vec![0; cap],
        };
        t.reset(1, 0, size.max(1) - 1);
        t
    }

    fn reset(&mut self, node: usize, lo: usize, hi: usize) {
        self.max[node] = 0;
        self.lazy[node] = 0;
        self.arg[node] = lo;
        if lo < hi {
            let mid = (lo + hi) / 2;
            self.reset(2 * node, lo, mid);
            self.reset(2 * node + 1, mid + 1, hi);
        }
    }

    fn clear(&mut self) {
        self.reset(1, 0, self.size.max(1) - 1);
    }

    fn add(&mut self, l: usize, r: usize, w: Weight) {
        self.add_rec(1, 0, self.size - 1, l, r, w);
    }

    fn add_rec(&mut self, node: usize, lo: usize, hi: usize, l: usize, r: usize, w: Weight) {
        if r < lo || hi < l {
            return;
        }
        if l <= lo && hi <= r {
            self.max[node] += w;
            self.lazy[node] += w;
            return;
        }
        let mid = (lo + hi) / 2;
        self.add_rec(2 * node, lo, mid, l, r, w);
        self.add_rec(2 * node + 1, mid + 1, hi, l, r, w);
        let (a, b) = (2 * node, 2 * node + 1);
        let (m, i) = if self.max[a] >= self.max[b] {
            (self.max[a], self.arg[a])
        } else {
            (self.max[b], self.arg[b])
        };
        self.max[node] = m + self.lazy[node];
        self.arg[node] = i;
    }

    fn top(&self) -> (Weight, usize) {
        (self.max[1], self.arg[1])
    }
}

fn check_path(g: &WeightedGraph, path: &CliquePath) -> Result<(), IntervalError> {
    if let Some(i) = path.cliques().iter().position(|k| k.capacity() != g.n()) {
        return Err(IntervalError::WrongHost(i));
    }
    if path.is_empty() {
        return if g.n() == 0 {
            Ok(())
        } else {
            Err(IntervalError::Empty(g.n()))
        };
    }
    if !path.is_consecutive() {
        let v = (0..g.n())
            .find(|&v| {
                let hits: Vec<usize> = (0..path.len())
                    .filter(|&j| path.cliques()[j].contains(v))
                    .collect();
                hits.windows(2).any(|w| w[1] != w[0] + 1)
            })
            .unwrap_or(0);
        return Err(IntervalError::NotConsecutive(v));
    }
    validate_clique_tree(g, &path.to_clique_tree(g)).map_err(IntervalError::Invalid)
}

/// ψ(G), an optimal solution, and the full table.
pub fn solve_interval(
    g: &WeightedGraph,
    path: &CliquePath,
) -> Result<(Weight, ClusterSolution, IntervalDpTable), IntervalError> {
    check_path(g, path)?;
    let l = path.len();
    let mut first = vec![usize::MAX; g.n()];
    let mut last = vec![0; g.n()];
    for (idx, k) in path.cliques().iter().enumerate() {
        for v in k.iter() {
            first[v] = first[v].min(idx + 1);
            last[v] = idx + 1;
        }
    }
    // Vertices grouped by first occurrence.
    let mut starting: Vec<Vec<usize>> = vec![Vec::new(); l + 2];
    for v in 0..g.n() {
        if first[v] != usize::MAX {
            starting[first[v]].push(v);
        }
    }

    let mut psi = vec![0; l + 1];
    let mut choice = vec![IntervalChoice::Base; l + 1];
    let mut tree = MaxTree::new(l);
    for p in 1..=l {
        tree.clear();
        let mut best: Option<(Weight, usize, usize)> = None;
        // u counts toward K_j \ (K_i ∪ K_{p+1}) exactly when
        // i < first(u) <= j <= last(u) <= p.
        for i in (0..p).rev() {
            for &u in &starting[i + 1] {
                if last[u] <= p {
                    tree.add(first[u] - 1, last[u] - 1, g.weight(u));
                }
            }
            let (w, at) = tree.top();
            // Positive entries lie in (i, p]; a zero maximum is attained at i + 1.
            let j = if w == 0 { i + 1 } else { at + 1 };
            let value = psi[i] + w;
            if best.is_none_or(|(b, _, _)| value >= b) {
                best = Some((value, i, j));
            }
        }
        let (value, i, j) = best.expect("p >= 1 has a candidate");
        psi[p] = value;
        choice[p] = IntervalChoice::Split { i, j };
    }

    let mut clusters = Vec::new();
    let mut p = l;
    while let IntervalChoice::Split { i, j } = choice[p] {
        clusters.push(cluster_at(g, path, i, j, p));
        p = i;
    }
    let solution = ClusterSolution::from_clusters(g, clusters);
    debug_assert_eq!(solution.weight, psi[l]);
    Ok((psi[l], solution, IntervalDpTable { psi, choice }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chordal::{clique_tree_of, try_clique_path, CLIQUE_PATH_BUDGET};
    use crate::fixtures::*;
    use crate::gen::{gen_interval, Family, GenConfig};
    use crate::oracle::brute_psi;
    use crate::solution::validate_solution;

    fn set(n: usize, vs: &[usize]) -> VertexSet {
        VertexSet::from_vertices(n, vs.iter().copied())
    }

    fn path_of(g: &WeightedGraph) -> CliquePath {
        let t = clique_tree_of(g).unwrap();
        try_clique_path(g, t.cliques(), CLIQUE_PATH_BUDGET)
            .path()
            .unwrap()
    }

    /// Direct O(ℓ³) evaluation of the recurrence.
    fn naive(g: &WeightedGraph, path: &CliquePath) -> Vec<Weight> {
        let l = path.len();
        let mut psi = vec![0; l + 1];
        for p in 1..=l {
            psi[p] = (0..p)
                .map(|i| psi[i] + rightmost_cluster_weight(g, path, i, p))
                .max()
                .unwrap();
        }
        psi
    }

    #[test]
    fn p3_and_p5() {
        let g = path(3);
        let (v, s, _) = solve_interval(&g, &path_of(&g)).unwrap();
        assert_eq!(v, 2);
        assert_eq!(validate_solution(&g, &s), Ok(()));
        let g = path(5);
        assert_eq!(solve_interval(&g, &path_of(&g)).unwrap().0, 4);
        assert_eq!(brute_psi(&g).unwrap().0, 4);
    }

    #[test]
    fn complete_graph_keeps_all() {
        let g = complete(6).with_weights(vec![3, 0, 7, 1, 1, 2]).unwrap();
        let (v, s, t) = solve_interval(&g, &path_of(&g)).unwrap();
        assert_eq!(v, 14);
        assert_eq!(s.deleted(&g), g.empty_set());
        assert_eq!(t.psi[0], 0);
        assert_eq!(t.choice[0], IntervalChoice::Base);
    }

    #[test]
    fn rightmost_examples() {
        let g = path(3);
        let p = CliquePath::new(vec![set(3, &[0, 1]), set(3, &[1, 2])]);
        assert_eq!(rightmost_cluster_weight(&g, &p, 1, 2), 1);
        assert_eq!(rightmost_cluster_weight(&g, &p, 0, 2), 2);
        // K_1 ⊆ K_0 ∪ K_2 fails, but K_1 \ K_2 = {0}.
        assert_eq!(rightmost_cluster_weight(&g, &p, 0, 1), 1);
        let h = complete(2);
        let q = CliquePath::new(vec![set(2, &[0, 1])]);
        assert_eq!(rightmost_cluster_weight(&h, &q, 0, 1), 2);
    }

    #[test]
    fn bad_paths_rejected() {
        let g = path(4);
        let p = CliquePath::new(vec![set(4, &[0, 1]), set(4, &[2, 3]), set(4, &[1, 2])]);
        assert_eq!(
            solve_interval(&g, &p).unwrap_err(),
            IntervalError::NotConsecutive(1)
        );
        let p = CliquePath::new(vec![set(4, &[0, 1]), set(4, &[1, 2])]);
        assert!(matches!(
            solve_interval(&g, &p),
            Err(IntervalError::Invalid(_))
        ));
        assert_eq!(
            solve_interval(&g, &CliquePath::new(vec![])).unwrap_err(),
            IntervalError::Empty(4)
        );
    }

    #[test]
    fn null_graph() {
        let g = WeightedGraph::unit(0, []).unwrap();
        assert_eq!(solve_interval(&g, &CliquePath::new(vec![])).unwrap().0, 0);
    }

    #[test]
    fn matches_naive_recurrence_and_brute_force() {
        for seed in 0..300 {
            let cfg = GenConfig {
                seed,
                n: 1 + (seed as usize % 14),
                family: Family::Interval,
                weight_range: (0, 10),
                ..Default::default()
            };
            let g = gen_interval(&cfg).unwrap();
            let p = path_of(&g);
            let (v, s, t) = solve_interval(&g, &p).unwrap();
            assert_eq!(t.psi, naive(&g, &p), "seed {seed}");
            assert_eq!(v, brute_psi(&g).unwrap().0, "seed {seed}");
            assert_eq!(validate_solution(&g, &s), Ok(()));
            assert_eq!(s.weight, v);
            for p_idx in 1..t.len() {
                let IntervalChoice::Split { i, j } = t.choice[p_idx] else {
                    panic!("split expected");
                };
                assert!(i < j && j <= p_idx);
                assert_eq!(
                    t.psi[p_idx],
                    t.psi[i] + g.weight_of(&cluster_at(&g, &p, i, j, p_idx))
                );
            }
        }
    }
}
