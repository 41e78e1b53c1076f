//! Text format for weighted graphs.
//!
//! ```text
//! c comment
//! p cvd <n> <m> <scale>
//! v <id> <decimal weight>
//! e <u> <v>
//! ```
//!
//! Ids are 1-based. `scale` is a power of ten; a weight `1.25` with scale
//! 100 is stored as 125. Vertices without a `v` line get weight 1.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{GraphError, Weight, WeightedGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("missing `p cvd` header")]
    MissingHeader,
    #[error("duplicate header")]
    DuplicateHeader,
    #[error("line before header")]
    BeforeHeader,
    #[error("malformed line")]
    Malformed,
    #[error("unknown line type `{0}`")]
    UnknownLine(String),
    #[error("scale {0} is not a positive power of ten")]
    BadScale(u64),
    #[error("vertex id {0} out of range")]
    BadId(usize),
    #[error("weight `{0}` is not a nonnegative decimal representable at this scale")]
    BadWeight(String),
    #[error("weight for vertex {0} given twice")]
    DuplicateWeight(usize),
    #[error("header declares {declared} edges, found {found}")]
    EdgeCount { declared: usize, found: usize },
    #[error("{0}")]
    Graph(GraphError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    /// 1-based; 0 for whole-file errors.
    pub line: usize,
    pub kind: ParseErrorKind,
}

/// A parsed graph with its weight scale.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: WeightedGraph,
    pub scale: u64,
}

fn digits_of(scale: u64) -> Option<u32> {
    let mut s = scale;
    let mut d = 0;
    while s > 1 {
        if !s.is_multiple_of(10) {
            return None;
        }
        s /= 10;
        d += 1;
    }
    (s == 1).then_some(d)
}

/// Parses a decimal string into an integer multiple of 10^-digits.
pub fn parse_decimal(s: &str, digits: u32) -> Option<Weight> {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    let all_digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
    if !all_digits(int) || !all_digits(frac) || frac.len() > digits as usize {
        return None;
    }
    let int: Weight = if int.is_empty() { 0 } else { int.parse().ok()? };
    let mut frac_val: Weight = if frac.is_empty() {
        0
    } else {
        frac.parse().ok()?
    };
    for _ in frac.len()..digits as usize {
        frac_val *= 10;
    }
    int.checked_mul(10u64.checked_pow(digits)?)?
        .checked_add(frac_val)
}

/// Renders a scaled integer as a decimal with the scale's digit count.
pub fn format_decimal(w: Weight, scale: u64) -> String {
    let digits = digits_of(scale).expect("scale is a power of ten") as usize;
    if digits == 0 {
        return w.to_string();
    }
    format!("{}.{:0digits$}", w / scale, w % scale)
}

pub fn parse_graph(text: &str) -> Result<GraphFile, ParseError> {
    let err = |line, kind| ParseError { line, kind };
    let mut header: Option<(usize, usize, u64, u32)> = None;
    let mut weights: Vec<Option<Weight>> = Vec::new();
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut tok = raw.split_whitespace();
        let Some(kind) = tok.next() else { continue };
        let fields: Vec<&str> = tok.collect();
        match kind {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(err(line, ParseErrorKind::DuplicateHeader));
                }
                let [fmt, n, m, scale] = fields[..] else {
                    return Err(err(line, ParseErrorKind::Malformed));
                };
                let (Ok(n), Ok(m), Ok(scale)) = (n.parse(), m.parse(), scale.parse::<u64>()) else {
                    return Err(err(line, ParseErrorKind::Malformed));
                };
                if fmt != "cvd" {
                    return Err(err(line, ParseErrorKind::Malformed));
                }
                let digits = digits_of(scale).ok_or(err(line, ParseErrorKind::BadScale(scale)))?;
                weights = vec![None; n];
                header = Some((n, m, scale, digits));
            }
            "v" | "e" => {
                let Some((n, _, _, digits)) = header else {
                    return Err(err(line, ParseErrorKind::BeforeHeader));
                };
                let [a, b] = fields[..] else {
                    return Err(err(line, ParseErrorKind::Malformed));
                };
                let id = |s: &str| -> Result<usize, ParseError> {
                    let v: usize = s
                        .parse()
                        .map_err(|_| err(line, ParseErrorKind::Malformed))?;
                    if v == 0 || v > n {
                        return Err(err(line, ParseErrorKind::BadId(v)));
                    }
                    Ok(v - 1)
                };
                let u = id(a)?;
                if kind == "v" {
                    let w = parse_decimal(b, digits)
                        .ok_or_else(|| err(line, ParseErrorKind::BadWeight(b.to_string())))?;
                    if weights[u].replace(w).is_some() {
                        return Err(err(line, ParseErrorKind::DuplicateWeight(u + 1)));
                    }
                } else {
                    edges.push((line, u, id(b)?));
                }
            }
            other => return Err(err(line, ParseErrorKind::UnknownLine(other.to_string()))),
        }
    }
    let (_, m, scale, _) = header.ok_or(err(0, ParseErrorKind::MissingHeader))?;
    if edges.len() != m {
        return Err(err(
            0,
            ParseErrorKind::EdgeCount {
                declared: m,
                found: edges.len(),
            },
        ));
    }
    let w: Vec<Weight> = weights.into_iter().map(|w| w.unwrap_or(scale)).collect();
    WeightedGraph::from_edges(w, edges.iter().map(|e| (e.1, e.2)))
        .map(|graph| GraphFile { graph, scale })
        .map_err(|e| {
            let line = match &e {
                GraphError::SelfLoop(v) => {
                    edges.iter().find(|x| x.1 == *v && x.2 == *v).map(|x| x.0)
                }
                GraphError::DuplicateEdge(a, b) => edges
                    .iter()
                    .filter(|x| (x.1.min(x.2), x.1.max(x.2)) == (*a.min(b), *a.max(b)))
                    .nth(1)
                    .map(|x| x.0),
                _ => None,
            };
            err(line.unwrap_or(0), ParseErrorKind::Graph(e))
        })
}

/// Serializes with one `v` line per vertex and edges in sorted order.
pub fn write_graph(g: &WeightedGraph, scale: u64) -> String {
    let mut out = String::new();
    writeln!(out, "p cvd {} {} {}", g.n(), g.edge_count(), scale).unwrap();
    for v in 0..g.n() {
        writeln!(out, "v {} {}", v + 1, format_decimal(g.weight(v), scale)).unwrap();
    }
    for (u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::figure1;
    use proptest::prelude::*;

    #[test]
    fn decimals() {
        assert_eq!(parse_decimal("1.25", 2), Some(125));
        assert_eq!(parse_decimal("3", 2), Some(300));
        assert_eq!(parse_decimal(".5", 1), Some(5));
        assert_eq!(parse_decimal("1.255", 2), None);
        assert_eq!(parse_decimal("-1", 0), None);
        assert_eq!(parse_decimal("", 0), None);
        assert_eq!(parse_decimal("1e3", 0), None);
        assert_eq!(format_decimal(125, 100), "1.25");
        assert_eq!(format_decimal(7, 100), "0.07");
        assert_eq!(format_decimal(7, 1), "7");
    }

    #[test]
    fn parses_with_defaults_and_comments() {
        let f = parse_graph("c hi\np cvd 3 2 10\nv 2 0.5\ne 1 2\n\ne 2 3\n").unwrap();
        assert_eq!(f.scale, 10);
        assert_eq!(f.graph.weights(), &[10, 5, 10]);
        assert!(f.graph.has_edge(0, 1) && f.graph.has_edge(1, 2));
    }

    #[test]
    fn diagnostics() {
        let kind = |t: &str| parse_graph(t).unwrap_err();
        assert_eq!(kind("e 1 2\n").kind, ParseErrorKind::BeforeHeader);
        assert_eq!(kind("").kind, ParseErrorKind::MissingHeader);
        assert_eq!(kind("p cvd 2 0 3\n").kind, ParseErrorKind::BadScale(3));
        assert_eq!(
            kind("p cvd 2 1 1\ne 1 3\n"),
            ParseError {
                line: 2,
                kind: ParseErrorKind::BadId(3)
            }
        );
        assert_eq!(
            kind("p cvd 2 0 1\nv 1 -2\n").kind,
            ParseErrorKind::BadWeight("-2".into())
        );
        assert_eq!(
            kind("p cvd 2 0 1\nv 1 2\nv 1 3\n").kind,
            ParseErrorKind::DuplicateWeight(1)
        );
        assert_eq!(
            kind("p cvd 2 2 1\ne 1 2\ne 2 1\n"),
            ParseError {
                line: 3,
                kind: ParseErrorKind::Graph(GraphError::DuplicateEdge(0, 1))
            }
        );
        assert_eq!(
            kind("p cvd 2 2 1\ne 1 2\n").kind,
            ParseErrorKind::EdgeCount {
                declared: 2,
                found: 1
            }
        );
        assert_eq!(
            kind("p cvd 2 0 1\nx\n").kind,
            ParseErrorKind::UnknownLine("x".into())
        );
    }

    #[test]
    fn figure1_round_trip() {
        let g = figure1();
        let f = parse_graph(&write_graph(&g, 1)).unwrap();
        assert_eq!(f.graph, g);
    }

    proptest! {
        #[test]
        fn round_trip(
            n in 1usize..12,
            raw in proptest::collection::vec((0usize..12, 0usize..12), 0..30),
            w in proptest::collection::vec(0u64..100_000, 12),
            digits in 0u32..4,
        ) {
            let mut edges: Vec<(usize, usize)> = raw
                .into_iter()
                .filter(|&(u, v)| u < n && v < n && u != v)
                .map(|(u, v)| (u.min(v), u.max(v)))
                .collect();
            edges.sort_unstable();
            edges.dedup();
            let g = WeightedGraph::from_edges(w[..n].to_vec(), edges).unwrap();
            let scale = 10u64.pow(digits);
            let f = parse_graph(&write_graph(&g, scale)).unwrap();
            prop_assert_eq!(f.graph, g);
            prop_assert_eq!(f.scale, scale);
        }
    }
}
