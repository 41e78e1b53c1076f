//! Chordality recognition, maximal cliques, clique trees and clique paths.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::graph::{VertexId, VertexSet, WeightedGraph};

/// Index of a clique-tree node.
pub type NodeId = usize;

/// A vertex ordering; once returned by [`recognize_chordal`] it is a
/// verified perfect elimination ordering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationOrdering {
    order: Vec<VertexId>,
    position: Vec<usize>,
}

impl EliminationOrdering {
    pub fn new(order: Vec<VertexId>) -> Self {
        let mut position = vec![usize::MAX; order.len()];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        EliminationOrdering { order, position }
    }

    pub fn order(&self) -> &[VertexId] {
        &self.order
    }

    pub fn position(&self, v: VertexId) -> usize {
        self.position[v]
    }

    /// Neighbors of `v` that come after it.
    pub fn later_neighbors(&self, g: &WeightedGraph, v: VertexId) -> Vec<VertexId> {
        g.neighbors(v)
            .iter()
            .filter(|&u| self.position[u] > self.position[v])
            .collect()
    }

    /// Checks the defining property: each vertex's later neighbors form a
    /// clique. On failure returns `(v, u, w)` with `u`, `w` later,
    /// nonadjacent neighbors of `v`.
    pub fn verify(&self, g: &WeightedGraph) -> Result<(), (VertexId, VertexId, VertexId)> {
        if self.order.len() != g.n() || self.position.contains(&usize::MAX) {
            panic!("ordering is not a permutation of the vertex set");
        }
        for &v in &self.order {
            let mut later = self.later_neighbors(g, v);
            later.sort_by_key(|&u| self.position[u]);
            if let Some((&parent, rest)) = later.split_first() {
                for &w in rest {
                    if !g.has_edge(parent, w) {
                        return Err((v, parent, w));
                    }
                }
            }
        }
        Ok(())
    }
}

/// An induced cycle of length at least four.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("graph is not chordal: induced cycle {cycle:?}")]
pub struct NotChordal {
    pub cycle: Vec<VertexId>,
}

/// True iff `cycle` is an induced cycle of length ≥ 4 in `g`.
pub fn is_hole(g: &WeightedGraph, cycle: &[VertexId]) -> bool {
    let k = cycle.len();
    if k < 4 {
        return false;
    }
    let distinct: HashSet<_> = cycle.iter().collect();
    if distinct.len() != k || cycle.iter().any(|&v| v >= g.n()) {
        return false;
    }
    for i in 0..k {
        for j in i + 1..k {
            let consecutive = j == i + 1 || (i == 0 && j == k - 1);
            if g.has_edge(cycle[i], cycle[j]) != consecutive {
                return false;
            }
        }
    }
    true
}

/// Maximum cardinality search; returns the visit order reversed, which is a
/// perfect elimination ordering exactly when the graph is chordal.
fn maximum_cardinality_search(g: &WeightedGraph) -> Vec<VertexId> {
    let n = g.n();
    let mut label = vec![0usize; n];
    let mut visited = vec![false; n];
    // Buckets of unvisited vertices keyed by label; stale entries skipped.
    let mut buckets: Vec<Vec<VertexId>> = vec![Vec::new(); n + 1];
    buckets[0] = (0..n).rev().collect();
    let mut top = 0;
    let mut visit = Vec::with_capacity(n);
    for _ in 0..n {
        let v = loop {
            match buckets[top].pop() {
                Some(v) if !visited[v] && label[v] == top => break v,
                Some(_) => continue,
                None => top -= 1,
            }
        };
        visited[v] = true;
        visit.push(v);
        for u in g.neighbors(v).iter() {
            if !visited[u] {
                label[u] += 1;
                buckets[label[u]].push(u);
                top = top.max(label[u]);
            }
        }
    }
    visit.reverse();
    visit
}

/// Shortest path from `from` to `to` inside G[allowed].
fn shortest_path(
    g: &WeightedGraph,
    allowed: &VertexSet,
    from: VertexId,
    to: VertexId,
) -> Option<Vec<VertexId>> {
    let mut pred = vec![usize::MAX; g.n()];
    let mut queue = VecDeque::from([from]);
    pred[from] = from;
    while let Some(u) = queue.pop_front() {
        if u == to {
            let mut path = vec![to];
            let mut x = to;
            while x != from {
                x = pred[x];
                path.push(x);
            }
            path.reverse();
            return Some(path);
        }
        for w in g.neighbors(u).intersection(allowed).iter() {
            if pred[w] == usize::MAX {
                pred[w] = u;
                queue.push_back(w);
            }
        }
    }
    None
}

/// Hole through `v` using nonadjacent neighbors `u`, `w`: `v` plus a
/// shortest `u`–`w` path avoiding the rest of N[v].
fn hole_through(g: &WeightedGraph, v: VertexId, u: VertexId, w: VertexId) -> Option<Vec<VertexId>> {
    let mut closed = g.neighbors(v).clone();
    closed.insert(v);
    let mut allowed = g.vertex_set().difference(&closed);
    allowed.insert(u);
    allowed.insert(w);
    let path = shortest_path(g, &allowed, u, w)?;
    let mut cycle = vec![v];
    cycle.extend(path);
    Some(cycle)
}

fn find_hole(g: &WeightedGraph, hint: (VertexId, VertexId, VertexId)) -> Vec<VertexId> {
    if let Some(c) = hole_through(g, hint.0, hint.1, hint.2) {
        return c;
    }
    for v in 0..g.n() {
        let nbrs = g.neighbors(v).to_vec();
        for (i, &u) in nbrs.iter().enumerate() {
            for &w in &nbrs[i + 1..] {
                if !g.has_edge(u, w) {
                    if let Some(c) = hole_through(g, v, u, w) {
                        return c;
                    }
                }
            }
        }
    }
    unreachable!("a graph without a perfect elimination ordering has a hole")
}

/// Returns a verified perfect elimination ordering, or an induced cycle of
/// length ≥ 4 certifying non-chordality.
pub fn recognize_chordal(g: &WeightedGraph) -> Result<EliminationOrdering, NotChordal> {
    let peo = EliminationOrdering::new(maximum_cardinality_search(g));
    match peo.verify(g) {
        Ok(()) => Ok(peo),
        Err(hint) => {
            let cycle = find_hole(g, hint);
            debug_assert!(is_hole(g, &cycle));
            Err(NotChordal { cycle })
        }
    }
}

/// Maximal cliques of a chordal graph from a perfect elimination ordering,
/// sorted lexicographically by their vertex lists.
///
/// The candidate clique of `v` is `{v} ∪ later(v)`; it fails to be maximal
/// exactly when some earlier `u` whose first later neighbor is `v` has one
/// more later neighbor than `v`.
pub fn maximal_cliques(g: &WeightedGraph, peo: &EliminationOrdering) -> Vec<VertexSet> {
    let n = g.n();
    let later: Vec<Vec<VertexId>> = (0..n).map(|v| peo.later_neighbors(g, v)).collect();
    let mut dominated = vec![false; n];
    for u in 0..n {
        if let Some(&parent) = later[u].iter().min_by_key(|&&x| peo.position(x)) {
            if later[u].len() == later[parent].len() + 1 {
                dominated[parent] = true;
            }
        }
    }
    let mut cliques: Vec<Vec<VertexId>> = (0..n)
        .filter(|&v| !dominated[v])
        .map(|v| {
            let mut c = later[v].clone();
            c.push(v);
            c.sort_unstable();
            c
        })
        .collect();
    cliques.sort();
    cliques
        .into_iter()
        .map(|c| VertexSet::from_vertices(n, c))
        .collect()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliqueTreeError {
    #[error("clique tree has no nodes")]
    Empty,
    #[error("root {0} out of range")]
    BadRoot(NodeId),
    #[error("edge {0}-{1} references a missing node")]
    BadEdge(NodeId, NodeId),
    #[error("node and edge counts do not form a tree")]
    NotATree,
}

/// A clique tree rooted at `root`, with parent links and the vertex sets
/// V(G_Z) = (⋃ T_Z) \ P(Z) precomputed for every node Z.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueTree {
    nodes: Vec<VertexSet>,
    edges: Vec<(NodeId, NodeId)>,
    root: NodeId,
    parent: Vec<Option<NodeId>>,
    children: Vec<Vec<NodeId>>,
    preorder: Vec<NodeId>,
    subtree_vertices: Vec<VertexSet>,
}

impl CliqueTree {
    /// Roots the tree spanned by `edges` at `root` and derives parents,
    /// children and subtree vertex sets. Only the tree shape is checked;
    /// clique-tree properties are left to [`validate_clique_tree`].
    pub fn from_parts(
        n: usize,
        nodes: Vec<VertexSet>,
        edges: Vec<(NodeId, NodeId)>,
        root: NodeId,
    ) -> Result<Self, CliqueTreeError> {
        let m = nodes.len();
        if m == 0 {
            return Err(CliqueTreeError::Empty);
        }
        if root >= m {
            return Err(CliqueTreeError::BadRoot(root));
        }
        if edges.len() + 1 != m {
            return Err(CliqueTreeError::NotATree);
        }
        let mut adj = vec![Vec::new(); m];
        for &(a, b) in &edges {
            if a >= m || b >= m || a == b {
                return Err(CliqueTreeError::BadEdge(a, b));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let mut parent = vec![None; m];
        let mut children = vec![Vec::new(); m];
        let mut seen = vec![false; m];
        let mut preorder = Vec::with_capacity(m);
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(z) = stack.pop() {
            preorder.push(z);
            for &y in adj[z].iter().rev() {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some(z);
                    children[z].push(y);
                    stack.push(y);
                }
            }
        }
        if preorder.len() != m {
            return Err(CliqueTreeError::NotATree);
        }
        for c in &mut children {
            c.sort_unstable();
        }
        let mut union_below: Vec<VertexSet> = nodes.clone();
        for &z in preorder.iter().rev() {
            if let Some(p) = parent[z] {
                let below = union_below[z].clone();
                union_below[p].union_with(&below);
            }
        }
        let subtree_vertices = (0..m)
            .map(|z| match parent[z] {
                Some(p) => union_below[z].difference(&nodes[p]),
                None => union_below[z].clone(),
            })
            .collect();
        debug_assert!(nodes.iter().all(|c| c.capacity() == n));
        Ok(CliqueTree {
            nodes,
            edges,
            root,
            parent,
            children,
            preorder,
            subtree_vertices,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn clique(&self, z: NodeId) -> &VertexSet {
        &self.nodes[z]
    }

    pub fn cliques(&self) -> &[VertexSet] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn parent(&self, z: NodeId) -> Option<NodeId> {
        self.parent[z]
    }

    pub fn children(&self, z: NodeId) -> &[NodeId] {
        &self.children[z]
    }

    /// V(G_Z).
    pub fn subtree_vertices(&self, z: NodeId) -> &VertexSet {
        &self.subtree_vertices[z]
    }

    /// Nodes with every parent before its children.
    pub fn preorder(&self) -> &[NodeId] {
        &self.preorder
    }

    /// Nodes with every child before its parent.
    pub fn postorder(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.preorder.iter().rev().copied()
    }

    /// K \ P(K), the vertices of `z` not shared with its parent.
    pub fn private_part(&self, z: NodeId) -> VertexSet {
        match self.parent[z] {
            Some(p) => self.nodes[z].difference(&self.nodes[p]),
            None => self.nodes[z].clone(),
        }
    }

    /// Nodes of T_Z.
    pub fn subtree_nodes(&self, z: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = vec![z];
        while let Some(y) = stack.pop() {
            out.push(y);
            stack.extend(self.children[y].iter().copied());
        }
        out
    }

    pub fn max_clique_size(&self) -> usize {
        self.nodes.iter().map(VertexSet::len).max().unwrap_or(0)
    }

    pub fn height(&self) -> usize {
        let mut depth = vec![0usize; self.len()];
        for &z in &self.preorder {
            if let Some(p) = self.parent[z] {
                depth[z] = depth[p] + 1;
            }
        }
        depth.into_iter().max().unwrap_or(0)
    }
}

/// Maximum-weight spanning tree of the clique intersection graph (weight
/// |K ∩ K'|), via Prim's algorithm. Rooted at the largest clique, lowest id
/// on ties.
pub fn build_clique_tree(g: &WeightedGraph, cliques: Vec<VertexSet>) -> CliqueTree {
    let m = cliques.len();
    if m == 0 {
        // Null graph: a single empty node keeps the tree nonempty.
        return CliqueTree::from_parts(g.n(), vec![g.empty_set()], Vec::new(), 0)
            .expect("single node tree");
    }
    let mut in_tree = vec![false; m];
    let mut best: Vec<Option<(usize, NodeId)>> = vec![None; m];
    let mut edges = Vec::with_capacity(m - 1);
    let mut current = 0;
    in_tree[0] = true;
    for _ in 1..m {
        for z in 0..m {
            if !in_tree[z] {
                let w = cliques[current].intersection_len(&cliques[z]);
                if best[z].is_none_or(|(bw, _)| w > bw) {
                    best[z] = Some((w, current));
                }
            }
        }
        let next = (0..m)
            .filter(|&z| !in_tree[z])
            .max_by_key(|&z| (best[z].map(|b| b.0), std::cmp::Reverse(z)))
            .expect("an outside node remains");
        let (_, attach) = best[next].expect("weight computed");
        edges.push((attach.min(next), attach.max(next)));
        in_tree[next] = true;
        current = next;
    }
    let root = (0..m)
        .max_by_key(|&z| (cliques[z].len(), std::cmp::Reverse(z)))
        .expect("nonempty");
    CliqueTree::from_parts(g.n(), cliques, edges, root).expect("spanning tree")
}

/// Recognizes and builds a clique tree in one step.
pub fn clique_tree_of(g: &WeightedGraph) -> Result<CliqueTree, NotChordal> {
    let peo = recognize_chordal(g)?;
    Ok(build_clique_tree(g, maximal_cliques(g, &peo)))
}

/// First violated clique-tree invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeViolation {
    TooManyNodes,
    NotAClique(NodeId),
    NotMaximal(NodeId),
    DuplicateNode(NodeId, NodeId),
    UncoveredVertex(VertexId),
    UncoveredEdge(VertexId, VertexId),
    DisconnectedSubtree(VertexId),
    WrongSubtreeVertices(NodeId),
    RootNotWholeGraph,
    ChildrenNotSeparated(NodeId, NodeId),
}

impl fmt::Display for TreeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeViolation::TooManyNodes => write!(f, "more nodes than vertices"),
            TreeViolation::NotAClique(z) => write!(f, "node {z} is not a clique"),
            TreeViolation::NotMaximal(z) => write!(f, "node {z} is not a maximal clique"),
            TreeViolation::DuplicateNode(a, b) => write!(f, "nodes {a} and {b} coincide"),
            TreeViolation::UncoveredVertex(v) => write!(f, "vertex {v} lies in no node"),
            TreeViolation::UncoveredEdge(u, v) => write!(f, "edge {u}-{v} lies in no node"),
            TreeViolation::DisconnectedSubtree(v) => {
                write!(f, "nodes containing vertex {v} are not connected")
            }
            TreeViolation::WrongSubtreeVertices(z) => {
                write!(f, "stored subtree vertex set of node {z} is wrong")
            }
            TreeViolation::RootNotWholeGraph => write!(f, "root subtree does not span the graph"),
            TreeViolation::ChildrenNotSeparated(a, b) => {
                write!(f, "subtrees of sibling nodes {a} and {b} touch")
            }
        }
    }
}

/// Exhaustively checks every clique-tree invariant.
///
/// Nodes must be distinct maximal cliques covering all vertices and edges,
/// and the nodes containing each vertex must be connected. By the Helly
/// property for subtrees this forces every maximal clique to be a node.
pub fn validate_clique_tree(g: &WeightedGraph, t: &CliqueTree) -> Result<(), TreeViolation> {
    let n = g.n();
    let m = t.len();
    if n == 0 {
        return Ok(());
    }
    if m > n {
        return Err(TreeViolation::TooManyNodes);
    }
    let mut seen = std::collections::HashMap::new();
    for z in 0..m {
        let k = t.clique(z);
        if k.is_empty() || !g.is_clique(k) {
            return Err(TreeViolation::NotAClique(z));
        }
        let mut common = g.vertex_set();
        for v in k.iter() {
            common.intersect_with(g.neighbors(v));
        }
        if !common.is_empty() {
            return Err(TreeViolation::NotMaximal(z));
        }
        if let Some(&prev) = seen.get(k) {
            return Err(TreeViolation::DuplicateNode(prev, z));
        }
        seen.insert(k.clone(), z);
    }
    let mut containing: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    for z in 0..m {
        for v in t.clique(z).iter() {
            containing[v].push(z);
        }
    }
    for (v, nodes) in containing.iter().enumerate() {
        if nodes.is_empty() {
            return Err(TreeViolation::UncoveredVertex(v));
        }
        // Connected iff exactly one containing node has its parent outside.
        let tops = nodes
            .iter()
            .filter(|&&z| t.parent(z).is_none_or(|p| !t.clique(p).contains(v)))
            .count();
        if tops != 1 {
            return Err(TreeViolation::DisconnectedSubtree(v));
        }
    }
    for (u, v) in g.edges() {
        if !containing[u].iter().any(|&z| t.clique(z).contains(v)) {
            return Err(TreeViolation::UncoveredEdge(u, v));
        }
    }
    // Recompute V(G_Z) from scratch.
    for z in 0..m {
        let mut union = g.empty_set();
        for y in t.subtree_nodes(z) {
            union.union_with(t.clique(y));
        }
        if let Some(p) = t.parent(z) {
            union.difference_with(t.clique(p));
        }
        if &union != t.subtree_vertices(z) {
            return Err(TreeViolation::WrongSubtreeVertices(z));
        }
    }
    if t.subtree_vertices(t.root()) != &g.vertex_set() {
        return Err(TreeViolation::RootNotWholeGraph);
    }
    for z in 0..m {
        let mut touched = g.empty_set();
        let mut owner: Vec<(NodeId, VertexSet)> = Vec::new();
        for &c in t.children(z) {
            let sv = t.subtree_vertices(c);
            if sv.intersects(&touched) {
                let other = owner
                    .iter()
                    .find(|(_, reach)| reach.intersects(sv))
                    .map(|(o, _)| *o)
                    .unwrap_or(c);
                return Err(TreeViolation::ChildrenNotSeparated(other, c));
            }
            let reach = g.closed_neighborhood(sv);
            touched.union_with(&reach);
            owner.push((c, reach));
        }
    }
    Ok(())
}

/// Cliques ordered so that each vertex occupies a consecutive run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliquePath {
    cliques: Vec<VertexSet>,
}

impl CliquePath {
    pub fn new(cliques: Vec<VertexSet>) -> Self {
        CliquePath { cliques }
    }

    pub fn cliques(&self) -> &[VertexSet] {
        &self.cliques
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    /// Consecutiveness of every vertex's occurrences.
    pub fn is_consecutive(&self) -> bool {
        let Some(first) = self.cliques.first() else {
            return true;
        };
        let mut closed = VertexSet::new(first.capacity());
        let mut prev = VertexSet::new(first.capacity());
        for k in &self.cliques {
            if k.intersects(&closed) {
                return false;
            }
            closed.union_with(&prev.difference(k));
            prev = k.clone();
        }
        true
    }

    /// As a clique tree: path edges, rooted at the first clique.
    pub fn to_clique_tree(&self, g: &WeightedGraph) -> CliqueTree {
        let edges = (1..self.len()).map(|i| (i - 1, i)).collect();
        CliqueTree::from_parts(g.n(), self.cliques.clone(), edges, 0).expect("path is a tree")
    }
}

/// Result of [`try_clique_path`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CliquePathOutcome {
    Path(CliquePath),
    /// Exhaustive search proved no arrangement exists.
    NotInterval,
    /// The search budget ran out before a decision.
    Undecided,
}

impl CliquePathOutcome {
    pub fn path(self) -> Option<CliquePath> {
        match self {
            CliquePathOutcome::Path(p) => Some(p),
            _ => None,
        }
    }
}

/// Default number of search states explored by [`try_clique_path`].
pub const CLIQUE_PATH_BUDGET: usize = 200_000;

struct PathSearch<'a> {
    cliques: &'a [VertexSet],
    /// For each vertex, how many unplaced cliques still contain it.
    remaining: Vec<usize>,
    placed: Vec<bool>,
    order: Vec<usize>,
    failed: HashSet<(Vec<bool>, usize)>,
    budget: usize,
    exhausted: bool,
}

impl PathSearch<'_> {
    fn place(&mut self, c: usize) {
        self.placed[c] = true;
        self.order.push(c);
        for v in self.cliques[c].iter() {
            self.remaining[v] -= 1;
        }
    }

    fn unplace(&mut self, c: usize) {
        self.placed[c] = false;
        self.order.pop();
        for v in self.cliques[c].iter() {
            self.remaining[v] += 1;
        }
    }

    /// Extends the current prefix. `closed` holds vertices whose run has
    /// ended and which may not reappear.
    fn extend(&mut self, closed: &VertexSet) -> bool {
        if self.order.len() == self.cliques.len() {
            return true;
        }
        if self.budget == 0 {
            self.exhausted = true;
            return false;
        }
        self.budget -= 1;
        let last = *self.order.last().expect("search starts with one clique");
        let key = (self.placed.clone(), last);
        if self.failed.contains(&key) {
            return false;
        }
        // Vertices of the last clique that still occur later must continue.
        let must: Vec<VertexId> = self.cliques[last]
            .iter()
            .filter(|&v| self.remaining[v] > 0)
            .collect();
        let mut candidates: Vec<usize> = (0..self.cliques.len())
            .filter(|&c| !self.placed[c])
            .filter(|&c| !self.cliques[c].intersects(closed))
            .filter(|&c| must.iter().all(|&v| self.cliques[c].contains(v)))
            .collect();
        candidates.sort_by_key(|&c| {
            std::cmp::Reverse(self.cliques[c].intersection_len(&self.cliques[last]))
        });
        for c in candidates {
            let mut next_closed = closed.clone();
            next_closed.union_with(&self.cliques[last].difference(&self.cliques[c]));
            self.place(c);
            if self.extend(&next_closed) {
                return true;
            }
            self.unplace(c);
            if self.exhausted {
                return false;
            }
        }
        self.failed.insert(key);
        false
    }
}

/// Searches for an ordering of the maximal cliques in which every vertex
/// occupies a consecutive run. Backtracking with memoized dead states;
/// complete unless `budget` search states are exhausted.
pub fn try_clique_path(
    g: &WeightedGraph,
    cliques: &[VertexSet],
    budget: usize,
) -> CliquePathOutcome {
    let m = cliques.len();
    if m <= 1 {
        return CliquePathOutcome::Path(CliquePath::new(cliques.to_vec()));
    }
    let mut count = vec![0usize; g.n()];
    for k in cliques {
        for v in k.iter() {
            count[v] += 1;
        }
    }
    // An end clique owns a vertex that appears nowhere else.
    let starts: Vec<usize> = (0..m)
        .filter(|&c| cliques[c].iter().any(|v| count[v] == 1))
        .collect();
    let mut search = PathSearch {
        cliques,
        remaining: count,
        placed: vec![false; m],
        order: Vec::with_capacity(m),
        failed: HashSet::new(),
        budget,
        exhausted: false,
    };
    for s in starts {
        search.place(s);
        if search.extend(&VertexSet::new(g.n())) {
            let path = CliquePath::new(search.order.iter().map(|&c| cliques[c].clone()).collect());
            debug_assert!(path.is_consecutive());
            return CliquePathOutcome::Path(path);
        }
        search.unplace(s);
        if search.exhausted {
            return CliquePathOutcome::Undecided;
        }
    }
    CliquePathOutcome::NotInterval
}
