//! Small named instances used throughout the tests.

use crate::graph::{VertexId, WeightedGraph};

/// Edge list of the 14-vertex chordal example with 11 maximal cliques.
pub const FIGURE1_EDGES: [(VertexId, VertexId); 17] = [
    (3, 6),
    (1, 3),
    (5, 7),
    (1, 5),
    (1, 4),
    (0, 1),
    (1, 2),
    (0, 2),
    (2, 8),
    (2, 9),
    (10, 12),
    (2, 10),
    (11, 13),
    (2, 11),
    (10, 11),
    (11, 12),
    (12, 13),
];

/// Its maximal cliques.
pub const FIGURE1_CLIQUES: [&[VertexId]; 11] = [
    &[0, 1, 2],
    &[1, 4],
    &[1, 3],
    &[1, 5],
    &[3, 6],
    &[5, 7],
    &[2, 10, 11],
    &[10, 11, 12],
    &[11, 12, 13],
    &[2, 8],
    &[2, 9],
];

/// The two drawn optimal solutions for the clique {v0, v1, v2} with
/// A1 = {v0, v1} and A2 = {v0, v2}, as lists of clusters.
pub const FIGURE2_S1: [&[VertexId]; 6] = [&[0, 1], &[8], &[9], &[10, 11, 12], &[6], &[7]];
pub const FIGURE2_S2: [&[VertexId]; 5] = [&[0, 2], &[4], &[3, 6], &[5, 7], &[12, 13]];

/// Edges of the drawn interaction graph, as pairs of indices
/// (into `FIGURE2_S1`, into `FIGURE2_S2`).
pub const FIGURE2_B_EDGES: [(usize, usize); 10] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (4, 2),
    (0, 3),
    (5, 3),
    (1, 0),
    (2, 0),
    (3, 0),
    (3, 4),
];

pub fn figure1() -> WeightedGraph {
    WeightedGraph::unit(14, FIGURE1_EDGES).expect("fixture is a simple graph")
}

pub fn path(n: usize) -> WeightedGraph {
    WeightedGraph::unit(n, (1..n).map(|v| (v - 1, v))).unwrap()
}

pub fn cycle(n: usize) -> WeightedGraph {
    WeightedGraph::unit(n, (0..n).map(|v| (v, (v + 1) % n))).unwrap()
}

pub fn complete(n: usize) -> WeightedGraph {
    WeightedGraph::unit(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
}

pub fn star(leaves: usize) -> WeightedGraph {
    WeightedGraph::unit(leaves + 1, (1..=leaves).map(|v| (0, v))).unwrap()
}
