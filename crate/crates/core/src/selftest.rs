//! Randomized property suites over seeded instances.
//!
//! Each case is a pure function of its seed, so suites run in parallel and
//! are merged back in seed order. Worker count comes from `CVD_THREADS`
//! when set.

use std::path::{Path, PathBuf};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::chordal::CliqueTree;
use crate::dp::{solve_chordal, ChordalDp, SolveOptions};
use crate::format::write_graph;
use crate::gen::{gen_chordal, GenConfig};
use crate::graph::{VertexSet, WeightedGraph};
use crate::oracle::{brute_psi, check_supermodularity_of_g, check_theorem2_construction};
use crate::solution::validate_solution;
use crate::supermodular::{
    maximize_exhaustive, maximize_supermodular, MaximizerConfig, Method, MethodChoice,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Dp,
    Supermodular,
    Theorem2,
}

impl Suite {
    pub const ALL: [Suite; 3] = [Suite::Dp, Suite::Supermodular, Suite::Theorem2];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Dp => "dp",
            Suite::Supermodular => "supermodular",
            Suite::Theorem2 => "theorem2",
        }
    }
}

/// A failed case, with the instance that triggered it.
#[derive(Clone, Debug)]
pub struct CaseError {
    pub message: String,
    pub graph: Option<WeightedGraph>,
}

impl CaseError {
    fn new(message: impl Into<String>, graph: &WeightedGraph) -> Self {
        CaseError {
            message: message.into(),
            graph: Some(graph.clone()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseFailure {
    pub seed: u64,
    pub message: String,
    pub artifact: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: u64,
    pub failures: Vec<CaseFailure>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct SelftestConfig {
    pub first_seed: u64,
    pub seeds: u64,
    pub max_n: usize,
    /// Failing instances are written here when set.
    pub artifact_dir: Option<PathBuf>,
}

/// Generator settings for the instance behind `seed`.
pub fn instance_config(seed: u64, max_n: usize) -> GenConfig {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(7);
    let n = r.random_range(1..=max_n.max(1));
    GenConfig {
        seed,
        n,
        tree_nodes: r.random_range(1..=n),
        subtree_span: r.random_range(0..=2),
        weight_range: (0, 10),
        ..Default::default()
    }
}

pub fn instance(seed: u64, max_n: usize) -> (WeightedGraph, CliqueTree) {
    gen_chordal(&instance_config(seed, max_n)).expect("instance configs are valid")
}

/// solve_chordal against brute force, plus solution validity.
pub fn dp_case(g: &WeightedGraph, t: &CliqueTree) -> Result<(), CaseError> {
    let out = solve_chordal(g, t, &SolveOptions::default())
        .map_err(|e| CaseError::new(format!("solver error: {e}"), g))?;
    let (expected, _) = brute_psi(g).map_err(|e| CaseError::new(e.to_string(), g))?;
    if out.value != expected {
        return Err(CaseError::new(
            format!("solve_chordal = {}, brute force = {expected}", out.value),
            g,
        ));
    }
    validate_solution(g, &out.solution)
        .map_err(|e| CaseError::new(format!("invalid solution: {e}"), g))?;
    if out.solution.weight != out.value {
        return Err(CaseError::new("solution weight differs from value", g));
    }
    Ok(())
}

/// For every inner problem with at most `max_ground` elements, compares the
/// min-norm-point route (no exhaustive fallback) with enumeration. Returns
/// the number of problems compared.
pub fn fv_method_agreement(
    g: &WeightedGraph,
    t: &CliqueTree,
    max_ground: usize,
) -> Result<usize, CaseError> {
    let mut dp = ChordalDp::new(g, t).map_err(|e| CaseError::new(e.to_string(), g))?;
    dp.solve(&SolveOptions::default())
        .map_err(|e| CaseError::new(e.to_string(), g))?;
    let mnp = MaximizerConfig {
        method: MethodChoice::Force(Method::MinNormPoint),
        fallback_cap: 0,
        ..Default::default()
    };
    let mut compared = 0;
    for k in 0..t.len() {
        for inst in dp.fv_instances(k) {
            if inst.ground.len() > max_ground {
                continue;
            }
            let exact = maximize_exhaustive(&mut dp.oracle(&inst), max_ground)
                .map_err(|e| CaseError::new(e.to_string(), g))?;
            let got = maximize_supermodular(&mut dp.oracle(&inst), &mnp)
                .map_err(|e| CaseError::new(format!("node {k} anchor {}: {e}", inst.v), g))?;
            if got.method != Method::MinNormPoint || got.value != exact.value {
                return Err(CaseError::new(
                    format!(
                        "node {k} anchor {}: min-norm-point {} ({:?}), exhaustive {}",
                        inst.v, got.value, got.method, exact.value
                    ),
                    g,
                ));
            }
            compared += 1;
        }
    }
    Ok(compared)
}

/// A clique of at most `cap` vertices drawn from a random node of `t`,
/// preferring nodes with at least `min` vertices.
fn pick_clique(
    r: &mut ChaCha8Rng,
    g: &WeightedGraph,
    t: &CliqueTree,
    min: usize,
    cap: usize,
) -> Option<VertexSet> {
    let nodes: Vec<usize> = (0..t.len()).filter(|&z| t.clique(z).len() >= min).collect();
    let z = *nodes.choose(r)?;
    let mut vs = t.clique(z).to_vec();
    vs.shuffle(r);
    vs.truncate(cap);
    Some(VertexSet::from_vertices(g.n(), vs))
}

pub const SUPERMODULAR_K_CAP: usize = 6;

/// Instance plus clique K for the supermodularity checks of g.
pub fn supermodular_instance(seed: u64, max_n: usize) -> (WeightedGraph, VertexSet) {
    let (g, t) = instance(seed, max_n);
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(8);
    let k = pick_clique(&mut r, &g, &t, 0, SUPERMODULAR_K_CAP).expect("tree is nonempty");
    (g, k)
}

pub fn supermodular_case(g: &WeightedGraph, k: &VertexSet) -> Result<(), CaseError> {
    match check_supermodularity_of_g(g, k) {
        Ok(None) => Ok(()),
        Ok(Some(v)) => Err(CaseError::new(
            format!(
                "g(A1 ∪ A2) + g(A1 ∩ A2) = {} < {} = g(A1) + g(A2) for A1 = {:?}, A2 = {:?}",
                v.lhs, v.rhs, v.a1, v.a2
            ),
            g,
        )),
        Err(e) => Err(CaseError::new(e.to_string(), g)),
    }
}

/// Instance, clique K and incomparable A1, A2 ⊆ K. Retries derived
/// configurations until some clique has two vertices.
pub fn theorem2_instance(
    seed: u64,
    max_n: usize,
) -> (WeightedGraph, VertexSet, VertexSet, VertexSet) {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(9);
    for attempt in 0u64.. {
        let mut cfg = instance_config(seed.wrapping_add(attempt << 32), max_n.max(2));
        cfg.n = cfg.n.max(2);
        let (g, t) = gen_chordal(&cfg).expect("instance configs are valid");
        let Some(k) = pick_clique(&mut r, &g, &t, 2, SUPERMODULAR_K_CAP) else {
            continue;
        };
        let members = k.to_vec();
        let subset = |mask: u32| {
            VertexSet::from_vertices(
                g.n(),
                members
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &v)| v),
            )
        };
        let full = (1u32 << members.len()) - 1;
        loop {
            let (a, b) = (r.random_range(0..=full), r.random_range(0..=full));
            if a & !b != 0 && b & !a != 0 {
                return (g.clone(), k.clone(), subset(a), subset(b));
            }
        }
    }
    unreachable!()
}

pub fn theorem2_case(
    g: &WeightedGraph,
    k: &VertexSet,
    a1: &VertexSet,
    a2: &VertexSet,
) -> Result<(), CaseError> {
    let report =
        check_theorem2_construction(g, k, a1, a2).map_err(|e| CaseError::new(e.to_string(), g))?;
    if report.passed() {
        Ok(())
    } else {
        Err(CaseError::new(
            format!("A1 = {a1:?}, A2 = {a2:?}: {}", report.failures().join("; ")),
            g,
        ))
    }
}

pub fn run_case(suite: Suite, seed: u64, max_n: usize) -> Result<(), CaseError> {
    match suite {
        Suite::Dp => {
            let (g, t) = instance(seed, max_n);
            dp_case(&g, &t)
        }
        Suite::Supermodular => {
            let (g, k) = supermodular_instance(seed, max_n);
            supermodular_case(&g, &k)
        }
        Suite::Theorem2 => {
            let (g, k, a1, a2) = theorem2_instance(seed, max_n);
            theorem2_case(&g, &k, &a1, &a2)
        }
    }
}

fn dump(dir: &Path, suite: Suite, seed: u64, err: &CaseError) -> Option<PathBuf> {
    let g = err.graph.as_ref()?;
    std::fs::create_dir_all(dir).ok()?;
    let path = dir.join(format!("{}-seed{seed}.cvd", suite.name()));
    let body = format!("c seed {seed}\nc {}\n{}", err.message, write_graph(g, 1));
    std::fs::write(&path, body).ok()?;
    Some(path)
}

pub fn run_suite(suite: Suite, cfg: &SelftestConfig) -> SuiteReport {
    let seeds: Vec<u64> = (cfg.first_seed..cfg.first_seed + cfg.seeds).collect();
    let failures = seeds
        .par_iter()
        .filter_map(|&seed| {
            run_case(suite, seed, cfg.max_n).err().map(|e| CaseFailure {
                seed,
                artifact: cfg
                    .artifact_dir
                    .as_deref()
                    .and_then(|d| dump(d, suite, seed, &e)),
                message: e.message,
            })
        })
        .collect();
    SuiteReport {
        suite,
        cases: cfg.seeds,
        failures,
    }
}

/// Thread pool sized by `CVD_THREADS`, or rayon's default.
pub fn thread_pool() -> rayon::ThreadPool {
    let threads = std::env::var("CVD_THREADS")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(seeds: u64) -> SelftestConfig {
        SelftestConfig {
            first_seed: 0,
            seeds,
            max_n: 10,
            artifact_dir: None,
        }
    }

    #[test]
    fn suites_pass_on_small_ranges() {
        for suite in Suite::ALL {
            let r = run_suite(suite, &cfg(20));
            assert!(r.passed(), "{:?}", r.failures);
            assert_eq!(r.cases, 20);
        }
    }

    #[test]
    fn instances_are_reproducible() {
        assert_eq!(instance(5, 12).0, instance(5, 12).0);
        let (g, k, a1, a2) = theorem2_instance(3, 12);
        assert!(g.is_clique(&k));
        assert!(!a1.is_subset(&a2) && !a2.is_subset(&a1));
        assert!(a1.is_subset(&k) && a2.is_subset(&k));
    }

    #[test]
    fn failures_are_dumped() {
        let dir = std::env::temp_dir().join(format!("cvd-selftest-{}", std::process::id()));
        let err = CaseError::new("boom", &crate::fixtures::path(3));
        let p = dump(&dir, Suite::Dp, 4, &err).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert!(text.starts_with("c seed 4\nc boom\np cvd 3 2 1"));
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn fv_methods_agree_on_figure1() {
        let g = crate::fixtures::figure1();
        let t = crate::chordal::clique_tree_of(&g).unwrap();
        assert!(fv_method_agreement(&g, &t, 18).unwrap() > 0);
    }
}
