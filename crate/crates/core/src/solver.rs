//! End-to-end solving with algorithm routing and phase timings.

use std::time::Instant;

use thiserror::Error;

use crate::chordal::{
    build_clique_tree, maximal_cliques, recognize_chordal, try_clique_path, CliquePathOutcome,
    NotChordal, CLIQUE_PATH_BUDGET,
};
use crate::dp::{solve_chordal, DpError, DpStats, SolveOptions};
use crate::graph::{Weight, WeightedGraph};
use crate::interval::{solve_interval, IntervalError};
use crate::oracle::{brute_psi, OracleError};
use crate::solution::ClusterSolution;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum AlgorithmChoice {
    /// Interval DP when a clique path is found, chordal DP otherwise.
    #[default]
    Auto,
    Chordal,
    Interval,
    Brute,
}

impl std::str::FromStr for AlgorithmChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(AlgorithmChoice::Auto),
            "chordal" => Ok(AlgorithmChoice::Chordal),
            "interval" => Ok(AlgorithmChoice::Interval),
            "brute" => Ok(AlgorithmChoice::Brute),
            _ => Err(format!("unknown algorithm `{s}`")),
        }
    }
}

/// The algorithm that produced a result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Chordal,
    Interval,
    Brute,
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    NotChordal(#[from] NotChordal),
    #[error("graph is not an interval graph")]
    NotInterval,
    #[error("clique path search gave up after {0} states")]
    IntervalUndecided(usize),
    #[error(transparent)]
    Brute(#[from] OracleError),
    #[error(transparent)]
    Dp(#[from] DpError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

#[derive(Clone, Debug)]
pub struct Solved {
    pub value: Weight,
    pub solution: ClusterSolution,
    pub algorithm: Algorithm,
    /// Phase name and elapsed microseconds, in execution order.
    pub timings: Vec<(&'static str, u64)>,
    pub cliques: usize,
    pub max_clique: usize,
    pub dp_stats: Option<DpStats>,
}

struct Clock(Vec<(&'static str, u64)>, Instant);

impl Clock {
    fn new() -> Self {
        Clock(Vec::new(), Instant::now())
    }

    fn lap(&mut self, phase: &'static str) {
        let now = Instant::now();
        self.0.push((phase, (now - self.1).as_micros() as u64));
        self.1 = now;
    }
}

pub fn solve(
    g: &WeightedGraph,
    choice: AlgorithmChoice,
    opts: &SolveOptions,
) -> Result<Solved, SolveError> {
    let mut clock = Clock::new();
    if choice == AlgorithmChoice::Brute {
        let (value, solution) = brute_psi(g)?;
        clock.lap("brute");
        return Ok(Solved {
            value,
            solution,
            algorithm: Algorithm::Brute,
            timings: clock.0,
            cliques: 0,
            max_clique: 0,
            dp_stats: None,
        });
    }
    let peo = recognize_chordal(g)?;
    clock.lap("recognize");
    let cliques = maximal_cliques(g, &peo);
    let count = cliques.len();
    let max_clique = cliques.iter().map(|c| c.len()).max().unwrap_or(0);
    clock.lap("cliques");

    let path = match choice {
        AlgorithmChoice::Chordal => None,
        _ => {
            let outcome = try_clique_path(g, &cliques, CLIQUE_PATH_BUDGET);
            clock.lap("clique_path");
            match (outcome, choice) {
                (CliquePathOutcome::Path(p), _) => Some(p),
                (CliquePathOutcome::NotInterval, AlgorithmChoice::Interval) => {
                    return Err(SolveError::NotInterval)
                }
                (CliquePathOutcome::Undecided, AlgorithmChoice::Interval) => {
                    return Err(SolveError::IntervalUndecided(CLIQUE_PATH_BUDGET))
                }
                _ => None,
            }
        }
    };
    let solved = |value, solution, algorithm, timings, dp_stats| Solved {
        value,
        solution,
        algorithm,
        timings,
        cliques: count,
        max_clique,
        dp_stats,
    };
    if let Some(path) = path {
        let (value, solution, _) = solve_interval(g, &path)?;
        clock.lap("interval_dp");
        return Ok(solved(value, solution, Algorithm::Interval, clock.0, None));
    }
    let tree = build_clique_tree(g, cliques);
    clock.lap("clique_tree");
    let out = solve_chordal(g, &tree, opts)?;
    clock.lap("chordal_dp");
    Ok(solved(
        out.value,
        out.solution,
        Algorithm::Chordal,
        clock.0,
        Some(out.stats),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    #[test]
    fn routing() {
        let opts = SolveOptions::default();
        let s = solve(&path(5), AlgorithmChoice::Auto, &opts).unwrap();
        assert_eq!((s.value, s.algorithm), (4, Algorithm::Interval));
        let s = solve(&figure1(), AlgorithmChoice::Auto, &opts).unwrap();
        assert_eq!(s.algorithm, Algorithm::Chordal);
        assert_eq!(s.cliques, 11);
        assert!(matches!(
            solve(&figure1(), AlgorithmChoice::Interval, &opts),
            Err(SolveError::NotInterval)
        ));
        assert!(matches!(
            solve(&cycle(4), AlgorithmChoice::Chordal, &opts),
            Err(SolveError::NotChordal(_))
        ));
        assert_eq!(
            solve(&cycle(4), AlgorithmChoice::Brute, &opts)
                .unwrap()
                .value,
            2
        );
    }
}
