use cvd_core::format::{parse_graph, write_graph};
use cvd_core::gen::{gen_chordal, gen_interval, Family, GenConfig};
use cvd_core::oracle::brute_psi;
use cvd_core::report::{verify_report, ResultReport};
use cvd_core::{
    solve, validate_solution, AlgorithmChoice, SolveError, SolveOptions, WeightedGraph,
};

fn all_algorithms_agree(g: &WeightedGraph) -> u64 {
    let opts = SolveOptions::default();
    let brute = brute_psi(g).unwrap().0;
    for choice in [
        AlgorithmChoice::Auto,
        AlgorithmChoice::Chordal,
        AlgorithmChoice::Brute,
    ] {
        let s = solve(g, choice, &opts).unwrap();
        assert_eq!(s.value, brute, "{choice:?}");
        assert_eq!(validate_solution(g, &s.solution), Ok(()));
    }
    brute
}

#[test]
fn text_round_trip_then_solve() {
    for seed in 0..40 {
        let cfg = GenConfig {
            seed,
            n: 14,
            tree_nodes: 6,
            subtree_span: 2,
            weight_range: (0, 999),
            ..Default::default()
        };
        let (g, _) = gen_chordal(&cfg).unwrap();
        let text = write_graph(&g, 100);
        let f = parse_graph(&text).unwrap();
        assert_eq!(f.graph, g);
        let value = all_algorithms_agree(&f.graph);
        let s = solve(&f.graph, AlgorithmChoice::Auto, &SolveOptions::default()).unwrap();
        let r = ResultReport::new(&f.graph, &s, f.scale);
        assert_eq!(r.psi, value);
        assert!(verify_report(&f.graph, &r).is_ok());
    }
}

#[test]
fn interval_route_is_taken_and_correct() {
    for seed in 0..40 {
        let cfg = GenConfig {
            seed,
            n: 15,
            tree_nodes: 30,
            subtree_span: 5,
            weight_range: (0, 10),
            family: Family::Interval,
            ..Default::default()
        };
        let g = gen_interval(&cfg).unwrap();
        let s = solve(&g, AlgorithmChoice::Interval, &SolveOptions::default()).unwrap();
        assert_eq!(s.value, all_algorithms_agree(&g));
    }
}

#[test]
fn scaled_weights_from_text() {
    let text = "c two triangles sharing an edge\np cvd 4 5 100\nv 1 0.5\nv 2 1.25\nv 3 2\nv 4 0.75\ne 1 2\ne 1 3\ne 2 3\ne 2 4\ne 3 4\n";
    let f = parse_graph(text).unwrap();
    let s = solve(&f.graph, AlgorithmChoice::Auto, &SolveOptions::default()).unwrap();
    // Best cluster is {2, 3, 4}: 1.25 + 2 + 0.75.
    assert_eq!(s.value, 400);
}

#[test]
fn non_chordal_certificate_is_a_hole() {
    let g =
        WeightedGraph::unit(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)]).unwrap();
    let Err(SolveError::NotChordal(e)) =
        solve(&g, AlgorithmChoice::Chordal, &SolveOptions::default())
    else {
        panic!("expected a hole");
    };
    assert!(cvd_core::chordal::is_hole(&g, &e.cycle));
    assert_eq!(e.cycle.len(), 4);
}
