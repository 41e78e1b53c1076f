use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use cvd_core::chordal::{
    recognize_chordal, try_clique_path, CliquePathOutcome, CLIQUE_PATH_BUDGET,
};
use cvd_core::format::{parse_graph, write_graph, GraphFile};
use cvd_core::gen::{generate, Family, GenConfig, RNG_ALGORITHM};
use cvd_core::oracle::{brute_psi, BRUTE_CAP};
use cvd_core::report::{verify_report, ResultReport};
use cvd_core::selftest::{run_suite, thread_pool, SelftestConfig, Suite};
use cvd_core::{maximal_cliques, solve, AlgorithmChoice, SolveError, SolveOptions};

const EXIT_OK: u8 = 0;
const EXIT_FAILED: u8 = 1;
const EXIT_NOT_CHORDAL: u8 = 2;
const EXIT_BAD_INPUT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "cvd",
    version,
    about = "Maximum-weight cluster subgraphs of chordal graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Auto,
    Chordal,
    Interval,
    Brute,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Chordal,
    Interval,
    Clique,
    Path,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Dp,
    Supermodular,
    Theorem2,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Text,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a graph file; `-` reads stdin.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        algorithm: Algo,
        #[arg(long, value_enum, default_value = "json")]
        output: Output,
        /// Validate the solution and compare with brute force on small inputs.
        #[arg(long)]
        check: bool,
    },
    /// Check a JSON solution report against a graph file.
    Verify { graph: PathBuf, solution: PathBuf },
    /// Write a random instance to stdout.
    Gen {
        #[arg(long, value_enum, default_value = "chordal")]
        family: FamilyArg,
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Clique-tree nodes (chordal) or coordinate range (interval).
        #[arg(long)]
        tree_nodes: Option<usize>,
        /// Subtree radius (chordal) or maximum interval length (interval).
        #[arg(long, default_value_t = 2)]
        span: usize,
        #[arg(long, default_value_t = 0)]
        min_weight: i64,
        #[arg(long, default_value_t = 10)]
        max_weight: i64,
        #[arg(long)]
        max_clique: Option<usize>,
    },
    /// Report chordality, clique statistics and optionally interval structure.
    Check {
        file: PathBuf,
        #[arg(long)]
        interval: bool,
    },
    /// Run randomized property suites and print a JSON summary.
    Selftest {
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        first_seed: u64,
        #[arg(long, default_value_t = 16)]
        max_n: usize,
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        /// Directory for counterexample graph files.
        #[arg(long, default_value = "cvd-counterexamples")]
        artifacts: PathBuf,
    },
    /// Time the solver over generated instances.
    Bench {
        #[arg(long, value_enum, default_value = "chordal")]
        family: FamilyArg,
        #[arg(long, value_delimiter = ',', default_values_t = vec![100, 200, 400])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: TableFormat,
    },
}

fn read_graph(path: &Path) -> Result<GraphFile, String> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| format!("stdin: {e}"))?
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?
    };
    parse_graph(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn family(f: FamilyArg) -> Family {
    match f {
        FamilyArg::Chordal => Family::Chordal,
        FamilyArg::Interval => Family::Interval,
        FamilyArg::Clique => Family::Clique,
        FamilyArg::Path => Family::Path,
    }
}

fn ids(vs: impl Iterator<Item = usize>) -> String {
    vs.map(|v| (v + 1).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_solve(file: &Path, algorithm: Algo, output: Output, check: bool) -> Result<u8, String> {
    let f = read_graph(file)?;
    let g = &f.graph;
    let choice = match algorithm {
        Algo::Auto => AlgorithmChoice::Auto,
        Algo::Chordal => AlgorithmChoice::Chordal,
        Algo::Interval => AlgorithmChoice::Interval,
        Algo::Brute => AlgorithmChoice::Brute,
    };
    let solved = match solve(g, choice, &SolveOptions::default()) {
        Ok(s) => s,
        Err(SolveError::NotChordal(e)) => {
            eprintln!(
                "not chordal; chordless cycle: {}",
                ids(e.cycle.iter().copied())
            );
            return Ok(EXIT_NOT_CHORDAL);
        }
        Err(e @ (SolveError::NotInterval | SolveError::IntervalUndecided(_))) => {
            eprintln!("{e}");
            return Ok(EXIT_FAILED);
        }
        Err(SolveError::Brute(e)) => {
            eprintln!("{e}");
            return Ok(EXIT_BAD_INPUT);
        }
        Err(e) => return Err(e.to_string()),
    };
    let report = ResultReport::new(g, &solved, f.scale);
    match output {
        Output::Json => println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        ),
        Output::Text => {
            let mut out = String::new();
            let w = |x| cvd_core::format::format_decimal(x, f.scale);
            writeln!(out, "psi {}", w(report.psi)).unwrap();
            writeln!(out, "deletion_weight {}", w(report.deletion_weight)).unwrap();
            writeln!(
                out,
                "algorithm {}",
                format!("{:?}", report.algorithm).to_lowercase()
            )
            .unwrap();
            for c in &report.clusters {
                writeln!(
                    out,
                    "cluster {}",
                    c.iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                )
                .unwrap();
            }
            writeln!(
                out,
                "deleted {}",
                report
                    .deleted
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            )
            .unwrap();
            print!("{out}");
        }
    }
    if check {
        if let Err(e) = verify_report(g, &report) {
            eprintln!("check failed: {e}");
            return Ok(EXIT_FAILED);
        }
        if g.n() <= BRUTE_CAP {
            let (expected, _) = brute_psi(g).map_err(|e| e.to_string())?;
            if expected != solved.value {
                eprintln!(
                    "check failed: brute force gives {expected}, solver {}",
                    solved.value
                );
                return Ok(EXIT_FAILED);
            }
            eprintln!("check passed (brute force agrees)");
        } else {
            eprintln!(
                "check passed (solution valid; brute force skipped above {BRUTE_CAP} vertices)"
            );
        }
    }
    Ok(EXIT_OK)
}

fn cmd_verify(graph: &Path, solution: &Path) -> Result<u8, String> {
    let f = read_graph(graph)?;
    let text =
        std::fs::read_to_string(solution).map_err(|e| format!("{}: {e}", solution.display()))?;
    let report: ResultReport =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", solution.display()))?;
    match verify_report(&f.graph, &report) {
        Ok(_) => {
            println!("ok");
            Ok(EXIT_OK)
        }
        Err(e) => {
            println!("invalid: {e}");
            Ok(EXIT_FAILED)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen(
    fam: FamilyArg,
    n: usize,
    seed: u64,
    tree_nodes: Option<usize>,
    span: usize,
    weights: (i64, i64),
    max_clique: Option<usize>,
) -> Result<u8, String> {
    let family = family(fam);
    let cfg = GenConfig {
        seed,
        n,
        tree_nodes: tree_nodes.unwrap_or(match family {
            Family::Interval => 2 * n,
            _ => n.div_ceil(2),
        }),
        subtree_span: span,
        weight_range: weights,
        family,
        max_clique,
    };
    let g = generate(&cfg).map_err(|e| e.to_string())?;
    print!(
        "c rng {RNG_ALGORITHM} seed {seed} family {} n {n} tree_nodes {} span {span} weights {}..{}\n{}",
        format!("{family:?}").to_lowercase(),
        cfg.tree_nodes,
        weights.0,
        weights.1,
        write_graph(&g, 1)
    );
    Ok(EXIT_OK)
}

fn cmd_check(file: &Path, interval: bool) -> Result<u8, String> {
    let f = read_graph(file)?;
    let g = &f.graph;
    println!("vertices {} edges {}", g.n(), g.edge_count());
    let peo = match recognize_chordal(g) {
        Ok(p) => p,
        Err(e) => {
            println!("chordal no");
            println!("chordless cycle {}", ids(e.cycle.iter().copied()));
            return Ok(EXIT_NOT_CHORDAL);
        }
    };
    let cliques = maximal_cliques(g, &peo);
    println!("chordal yes");
    println!("elimination order {}", ids(peo.order().iter().copied()));
    println!("maximal cliques {}", cliques.len());
    println!(
        "max clique size {}",
        cliques.iter().map(|c| c.len()).max().unwrap_or(0)
    );
    if interval {
        match try_clique_path(g, &cliques, CLIQUE_PATH_BUDGET) {
            CliquePathOutcome::Path(p) => {
                println!("interval yes");
                for k in p.cliques() {
                    println!("path clique {}", ids(k.iter()));
                }
            }
            CliquePathOutcome::NotInterval => {
                println!("interval no");
                return Ok(EXIT_FAILED);
            }
            CliquePathOutcome::Undecided => {
                println!("interval undecided (search budget {CLIQUE_PATH_BUDGET} exhausted)");
                return Ok(EXIT_FAILED);
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_selftest(cfg: SelftestConfig, suite: SuiteArg) -> Result<u8, String> {
    let suites: Vec<Suite> = match suite {
        SuiteArg::Dp => vec![Suite::Dp],
        SuiteArg::Supermodular => vec![Suite::Supermodular],
        SuiteArg::Theorem2 => vec![Suite::Theorem2],
        SuiteArg::All => Suite::ALL.to_vec(),
    };
    let pool = thread_pool();
    let reports: Vec<_> = suites
        .into_iter()
        .map(|s| pool.install(|| run_suite(s, &cfg)))
        .collect();
    let ok = reports.iter().all(|r| r.passed());
    let summary = serde_json::json!({
        "passed": ok,
        "first_seed": cfg.first_seed,
        "seeds": cfg.seeds,
        "max_n": cfg.max_n,
        "suites": reports,
    });
    println!(
        "{}",
        serde_json::to_string_pretty(&summary).expect("summary serializes")
    );
    for r in &reports {
        for f in &r.failures {
            eprintln!(
                "{} seed {}: {}{}",
                r.suite.name(),
                f.seed,
                f.message,
                f.artifact
                    .as_ref()
                    .map(|p| format!(" ({})", p.display()))
                    .unwrap_or_default()
            );
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}

fn bench_config(family: Family, n: usize, seed: u64) -> GenConfig {
    match family {
        Family::Chordal => GenConfig {
            seed,
            n,
            tree_nodes: (n / 2).max(1),
            subtree_span: 2,
            weight_range: (0, 10),
            family,
            max_clique: Some(12),
        },
        Family::Interval => GenConfig {
            seed,
            n,
            tree_nodes: 2 * n,
            subtree_span: 6,
            weight_range: (0, 10),
            family,
            max_clique: None,
        },
        _ => GenConfig {
            seed,
            n,
            weight_range: (0, 10),
            family,
            ..Default::default()
        },
    }
}

fn cmd_bench(
    fam: FamilyArg,
    sizes: &[usize],
    reps: usize,
    seed: u64,
    format: TableFormat,
) -> Result<u8, String> {
    let family = family(fam);
    let header = "family,seed,n,edges,cliques,max_clique,algorithm,median_ms,evaluations,maximizations,phases_us";
    match format {
        TableFormat::Csv => println!("{header}"),
        TableFormat::Text => println!(
            "{:>8} {:>8} {:>8} {:>6} {:>10} {:>12} {:>12}",
            "n", "edges", "cliques", "omega", "median_ms", "evaluations", "algorithm"
        ),
    }
    for &n in sizes {
        let g = generate(&bench_config(family, n, seed)).map_err(|e| e.to_string())?;
        let mut times = Vec::new();
        let mut last = None;
        for _ in 0..reps.max(1) {
            let start = Instant::now();
            let s = solve(&g, AlgorithmChoice::Auto, &SolveOptions::default())
                .map_err(|e| e.to_string())?;
            times.push(start.elapsed().as_secs_f64() * 1e3);
            last = Some(s);
        }
        times.sort_by(f64::total_cmp);
        let median = times[times.len() / 2];
        let s = last.expect("at least one repetition");
        let (evals, maxes) = s
            .dp_stats
            .as_ref()
            .map(|d| (d.evaluations, d.maximizations))
            .unwrap_or((0, 0));
        match format {
            TableFormat::Csv => println!(
                "{},{seed},{n},{},{},{},{},{median:.3},{evals},{maxes},{}",
                format!("{family:?}").to_lowercase(),
                g.edge_count(),
                s.cliques,
                s.max_clique,
                format!("{:?}", s.algorithm).to_lowercase(),
                s.timings
                    .iter()
                    .map(|(p, t)| format!("{p}={t}"))
                    .collect::<Vec<_>>()
                    .join(";")
            ),
            TableFormat::Text => println!(
                "{n:>8} {:>8} {:>8} {:>6} {median:>10.3} {evals:>12} {:>12}",
                g.edge_count(),
                s.cliques,
                s.max_clique,
                format!("{:?}", s.algorithm).to_lowercase()
            ),
        }
    }
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve {
            file,
            algorithm,
            output,
            check,
        } => cmd_solve(&file, algorithm, output, check),
        Command::Verify { graph, solution } => cmd_verify(&graph, &solution),
        Command::Gen {
            family,
            n,
            seed,
            tree_nodes,
            span,
            min_weight,
            max_weight,
            max_clique,
        } => cmd_gen(
            family,
            n,
            seed,
            tree_nodes,
            span,
            (min_weight, max_weight),
            max_clique,
        ),
        Command::Check { file, interval } => cmd_check(&file, interval),
        Command::Selftest {
            seeds,
            first_seed,
            max_n,
            suite,
            artifacts,
        } => cmd_selftest(
            SelftestConfig {
                first_seed,
                seeds,
                max_n,
                artifact_dir: Some(artifacts),
            },
            suite,
        ),
        Command::Bench {
            family,
            sizes,
            reps,
            seed,
            format,
        } => cmd_bench(family, &sizes, reps, seed, format),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_BAD_INPUT)
        }
    }
}
