//! Instance families shared by the benchmarks.

use cvd_core::chordal::{clique_tree_of, try_clique_path, CliquePath, CLIQUE_PATH_BUDGET};
use cvd_core::gen::{gen_chordal, gen_interval, Family, GenConfig};
use cvd_core::{CliqueTree, WeightedGraph};

/// Chordal graph on `n` vertices with clique number at most 12.
pub fn bounded_chordal(n: usize, seed: u64) -> (WeightedGraph, CliqueTree) {
    gen_chordal(&GenConfig {
        seed,
        n,
        tree_nodes: (n / 2).max(1),
        subtree_span: 2,
        weight_range: (0, 10),
        family: Family::Chordal,
        max_clique: Some(12),
    })
    .expect("valid config")
}

/// Interval graph on `n` vertices at roughly constant density.
pub fn interval(n: usize, seed: u64) -> (WeightedGraph, CliquePath) {
    let g = gen_interval(&GenConfig {
        seed,
        n,
        tree_nodes: 2 * n,
        subtree_span: 6,
        weight_range: (0, 10),
        family: Family::Interval,
        max_clique: None,
    })
    .expect("valid config");
    let t = clique_tree_of(&g).expect("interval graphs are chordal");
    let p = try_clique_path(&g, t.cliques(), CLIQUE_PATH_BUDGET)
        .path()
        .expect("interval graphs have clique paths");
    (g, p)
}
