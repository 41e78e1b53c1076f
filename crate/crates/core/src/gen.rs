//! Seeded instance generators.
//!
//! Chordal graphs come from subtree intersections on a random tree, interval
//! graphs from random integer intervals. All randomness is drawn from
//! ChaCha8 seeded with `seed`; structure uses stream 0, weights stream 1.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::chordal::{clique_tree_of, CliqueTree};
use crate::fixtures;
use crate::graph::{GraphError, Weight, WeightedGraph};

/// Recorded in serialized instances.
pub const RNG_ALGORITHM: &str = "chacha8";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Family {
    #[default]
    Chordal,
    Interval,
    Clique,
    Path,
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "chordal" => Ok(Family::Chordal),
            "interval" => Ok(Family::Interval),
            "clique" => Ok(Family::Clique),
            "path" => Ok(Family::Path),
            _ => Err(format!("unknown family `{s}`")),
        }
    }
}

/// Generator parameters.
///
/// For interval graphs `tree_nodes` is the number of integer coordinates
/// and `subtree_span` the maximum interval length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub seed: u64,
    pub n: usize,
    pub tree_nodes: usize,
    pub subtree_span: usize,
    pub weight_range: (i64, i64),
    pub family: Family,
    /// Upper bound on the number of vertices sharing a tree node, and hence
    /// on the clique number. Chordal family only.
    pub max_clique: Option<usize>,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            n: 16,
            tree_nodes: 8,
            subtree_span: 1,
            weight_range: (1, 1),
            family: Family::Chordal,
            max_clique: None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("n must be at least 1")]
    NoVertices,
    #[error("tree_nodes must be at least 1")]
    NoTreeNodes,
    #[error("weight range [{0}, {1}] is empty or negative")]
    BadWeightRange(i64, i64),
    #[error("every tree node is full (max_clique = {cap}) after {placed} vertices")]
    CapacityExhausted { cap: usize, placed: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn check(cfg: &GenConfig) -> Result<(), GenError> {
    if cfg.n == 0 {
        return Err(GenError::NoVertices);
    }
    if cfg.tree_nodes == 0 {
        return Err(GenError::NoTreeNodes);
    }
    let (lo, hi) = cfg.weight_range;
    if lo < 0 || hi < lo {
        return Err(GenError::BadWeightRange(lo, hi));
    }
    Ok(())
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Redraws vertex weights uniformly from `cfg.weight_range`.
pub fn gen_weights(cfg: &GenConfig, g: &WeightedGraph) -> Result<WeightedGraph, GenError> {
    let (lo, hi) = cfg.weight_range;
    if lo < 0 || hi < lo {
        return Err(GenError::BadWeightRange(lo, hi));
    }
    let mut r = rng(cfg.seed, 1);
    let w = (0..g.n())
        .map(|_| r.random_range(lo as Weight..=hi as Weight))
        .collect();
    Ok(g.with_weights(w)?)
}

/// Random recursive tree: node i attaches to a uniform earlier node.
fn random_tree(r: &mut ChaCha8Rng, nodes: usize) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); nodes];
    for i in 1..nodes {
        let p = r.random_range(0..i);
        adj[i].push(p);
        adj[p].push(i);
    }
    adj
}

/// Chordal graph as the intersection graph of random subtrees, with the
/// clique tree rebuilt from the graph itself.
pub fn gen_chordal(cfg: &GenConfig) -> Result<(WeightedGraph, CliqueTree), GenError> {
    check(cfg)?;
    let mut r = rng(cfg.seed, 0);
    let tree = random_tree(&mut r, cfg.tree_nodes);
    let cap = cfg.max_clique.unwrap_or(usize::MAX);
    let mut load = vec![0usize; cfg.tree_nodes];
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); cfg.tree_nodes];
    let mut dist = vec![usize::MAX; cfg.tree_nodes];
    for v in 0..cfg.n {
        let open: Vec<usize> = (0..cfg.tree_nodes).filter(|&z| load[z] < cap).collect();
        if open.is_empty() {
            return Err(GenError::CapacityExhausted { cap, placed: v });
        }
        let root = open[r.random_range(0..open.len())];
        let radius = r.random_range(0..=cfg.subtree_span);
        let mut ball = vec![root];
        let mut queue = VecDeque::from([root]);
        dist[root] = 0;
        while let Some(z) = queue.pop_front() {
            if dist[z] == radius {
                continue;
            }
            for &y in &tree[z] {
                if dist[y] == usize::MAX && load[y] < cap {
                    dist[y] = dist[z] + 1;
                    ball.push(y);
                    queue.push_back(y);
                }
            }
        }
        for &z in &ball {
            dist[z] = usize::MAX;
            load[z] += 1;
            members[z].push(v);
        }
    }
    let mut edges = Vec::new();
    for group in &members {
        for (a, &u) in group.iter().enumerate() {
            for &v in &group[a + 1..] {
                edges.push((u.min(v), u.max(v)));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let g = WeightedGraph::unit(cfg.n, edges)?;
    let g = gen_weights(cfg, &g)?;
    let t = clique_tree_of(&g).expect("subtree intersection graphs are chordal");
    Ok((g, t))
}

/// Intersection graph of `n` random closed integer intervals.
pub fn gen_interval(cfg: &GenConfig) -> Result<WeightedGraph, GenError> {
    check(cfg)?;
    let mut r = rng(cfg.seed, 0);
    let intervals: Vec<(usize, usize)> = (0..cfg.n)
        .map(|_| {
            let start = r.random_range(0..cfg.tree_nodes);
            let len = r.random_range(0..=cfg.subtree_span);
            (start, (start + len).min(cfg.tree_nodes - 1))
        })
        .collect();
    interval_graph(cfg, &intervals)
}

/// Intersection graph of explicit intervals, weighted from `cfg`.
pub fn interval_graph(
    cfg: &GenConfig,
    intervals: &[(usize, usize)],
) -> Result<WeightedGraph, GenError> {
    let mut edges = Vec::new();
    for (u, &(a, b)) in intervals.iter().enumerate() {
        for (v, &(c, d)) in intervals.iter().enumerate().skip(u + 1) {
            if a <= d && c <= b {
                edges.push((u, v));
            }
        }
    }
    let g = WeightedGraph::unit(intervals.len(), edges)?;
    gen_weights(cfg, &g)
}

/// Dispatches on `cfg.family`.
pub fn generate(cfg: &GenConfig) -> Result<WeightedGraph, GenError> {
    check(cfg)?;
    match cfg.family {
        Family::Chordal => Ok(gen_chordal(cfg)?.0),
        Family::Interval => gen_interval(cfg),
        Family::Clique => gen_weights(cfg, &fixtures::complete(cfg.n)),
        Family::Path => gen_weights(cfg, &fixtures::path(cfg.n)),
    }
}
