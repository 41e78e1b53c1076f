//! Machine-readable solve results.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Weight, WeightedGraph};
use crate::solution::{validate_solution, ClusterSolution, SolutionViolation};
use crate::solver::{Algorithm, Solved};

pub const SCHEMA_VERSION: u32 = 1;

/// Vertex ids are 1-based; weights are scaled integers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultReport {
    pub schema_version: u32,
    pub scale: u64,
    pub psi: Weight,
    pub deletion_weight: Weight,
    pub clusters: Vec<Vec<usize>>,
    pub deleted: Vec<usize>,
    pub algorithm: Algorithm,
    /// Phase name and elapsed microseconds.
    pub timings_us: Vec<(String, u64)>,
}

impl ResultReport {
    pub fn new(g: &WeightedGraph, solved: &Solved, scale: u64) -> Self {
        let s = &solved.solution;
        ResultReport {
            schema_version: SCHEMA_VERSION,
            scale,
            psi: s.weight,
            deletion_weight: g.total_weight() - s.weight,
            clusters: s
                .clusters
                .iter()
                .map(|c| c.iter().map(|v| v + 1).collect())
                .collect(),
            deleted: s.deleted(g).iter().map(|v| v + 1).collect(),
            algorithm: solved.algorithm,
            timings_us: solved
                .timings
                .iter()
                .map(|&(p, t)| (p.to_string(), t))
                .collect(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReportError {
    #[error("unsupported schema version {0}")]
    Schema(u32),
    #[error("vertex id {0} out of range")]
    BadId(usize),
    #[error("vertex {0} listed twice")]
    Repeated(usize),
    #[error("clusters and deleted vertices do not cover vertex {0}")]
    Uncovered(usize),
    #[error("{0}")]
    Invalid(SolutionViolation),
    #[error("psi is {reported} but the clusters weigh {actual}")]
    PsiMismatch { reported: Weight, actual: Weight },
    #[error("psi + deletion_weight = {sum}, expected w(V) = {total}")]
    DeletionMismatch { sum: Weight, total: Weight },
}

/// Checks a report against its graph and returns the solution it encodes.
pub fn verify_report(g: &WeightedGraph, r: &ResultReport) -> Result<ClusterSolution, ReportError> {
    if r.schema_version != SCHEMA_VERSION {
        return Err(ReportError::Schema(r.schema_version));
    }
    let mut seen = vec![false; g.n()];
    let mut mark = |id: usize| -> Result<usize, ReportError> {
        if id == 0 || id > g.n() {
            return Err(ReportError::BadId(id));
        }
        if std::mem::replace(&mut seen[id - 1], true) {
            return Err(ReportError::Repeated(id));
        }
        Ok(id - 1)
    };
    let mut clusters = Vec::new();
    for c in &r.clusters {
        let vs = c
            .iter()
            .map(|&id| mark(id))
            .collect::<Result<Vec<_>, _>>()?;
        clusters.push(crate::graph::VertexSet::from_vertices(g.n(), vs));
    }
    for &id in &r.deleted {
        mark(id)?;
    }
    if let Some(v) = seen.iter().position(|s| !s) {
        return Err(ReportError::Uncovered(v + 1));
    }
    let mut sol = ClusterSolution::from_clusters(g, clusters.iter().cloned());
    // Keep the listed order and the reported weight so validation sees
    // exactly what the file claims.
    sol.clusters = clusters;
    sol.weight = r.psi;
    match validate_solution(g, &sol) {
        Ok(()) => {}
        Err(SolutionViolation::WeightMismatch { reported, actual }) => {
            return Err(ReportError::PsiMismatch { reported, actual })
        }
        Err(e) => return Err(ReportError::Invalid(e)),
    }
    let total = g.total_weight();
    let sum = r.psi.saturating_add(r.deletion_weight);
    if sum != total {
        return Err(ReportError::DeletionMismatch { sum, total });
    }
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp::SolveOptions;
    use crate::fixtures::figure1;
    use crate::solver::{solve, AlgorithmChoice};

    fn report() -> (WeightedGraph, ResultReport) {
        let g = figure1();
        let s = solve(&g, AlgorithmChoice::Auto, &SolveOptions::default()).unwrap();
        let r = ResultReport::new(&g, &s, 1);
        (g, r)
    }

    #[test]
    fn own_output_verifies() {
        let (g, r) = report();
        assert_eq!(r.psi + r.deletion_weight, g.total_weight());
        let json = serde_json::to_string(&r).unwrap();
        let back: ResultReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        assert!(verify_report(&g, &back).is_ok());
    }

    #[test]
    fn tampering_detected() {
        let (g, r) = report();
        let mut bad = r.clone();
        bad.psi += 1;
        assert!(matches!(
            verify_report(&g, &bad),
            Err(ReportError::PsiMismatch { .. })
        ));
        let mut bad = r.clone();
        bad.deletion_weight += 1;
        assert!(matches!(
            verify_report(&g, &bad),
            Err(ReportError::DeletionMismatch { .. })
        ));
        let mut bad = r.clone();
        let moved = bad.deleted.pop().unwrap();
        bad.clusters[0].push(moved);
        assert!(matches!(
            verify_report(&g, &bad),
            Err(ReportError::Invalid(_)) | Err(ReportError::PsiMismatch { .. })
        ));
        let mut bad = r;
        bad.deleted.push(1);
        assert!(matches!(
            verify_report(&g, &bad),
            Err(ReportError::Repeated(_))
        ));
    }
}
