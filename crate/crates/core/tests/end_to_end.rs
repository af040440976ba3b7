//! Build-solve-verify round trips on small specifications.

use netgen_core::formulation::build;
use netgen_core::oracle;
use netgen_core::solver::{solve, MilpStatus, SolveOptions};
use netgen_core::spec::{Band, NetworkSpec, PropertyConstraint};
use netgen_core::verify::check_spec;

fn min_slack_opts() -> SolveOptions {
    SolveOptions {
        objective_floor: Some(0.0),
        ..Default::default()
    }
}

fn solve_spec(spec: &NetworkSpec) -> (MilpStatus, Option<f64>, Option<netgen_core::Graph>) {
    let out = build(spec).expect("build");
    let res = solve(&out.model, &min_slack_opts()).expect("solve");
    let graph = res.assignment.as_ref().map(|x| {
        out.registry
            .extract_graph(&|id| x[id.0])
            .expect("extract graph")
    });
    (res.status, res.objective, graph)
}

#[test]
fn triangle_from_degree_sequence() {
    let spec = NetworkSpec::new(
        3,
        vec![PropertyConstraint::DegreeSequence { values: vec![2, 2, 2] }],
    );
    let (status, obj, graph) = solve_spec(&spec);
    assert_eq!(status, MilpStatus::Optimal);
    assert!(obj.unwrap().abs() < 1e-6);
    let g = graph.unwrap();
    assert_eq!(g.num_edges(), 3);
    assert!(check_spec(&g, &spec, 1e-9).passed);
}

#[test]
fn nongraphical_sequence_slack_two() {
    let spec = NetworkSpec::new(
        4,
        vec![PropertyConstraint::DegreeSequence { values: vec![3, 3, 1, 1] }],
    );
    let out = build(&spec).unwrap();
    let res = solve(&out.model, &SolveOptions::default()).unwrap();
    assert_eq!(res.status, MilpStatus::Optimal);
    assert!((res.objective.unwrap() - 2.0).abs() < 1e-6, "slack {:?}", res.objective);
}

#[test]
fn path_spec_with_diameter() {
    let spec = NetworkSpec::new(
        4,
        vec![
            PropertyConstraint::DegreeSequence { values: vec![2, 2, 1, 1] },
            PropertyConstraint::Diameter { band: Band::point(3.0) },
        ],
    );
    let (status, obj, graph) = solve_spec(&spec);
    assert_eq!(status, MilpStatus::Optimal);
    assert!(obj.unwrap().abs() < 1e-6);
    assert!(check_spec(&graph.unwrap(), &spec, 1e-9).passed);
}

#[test]
fn apl_band_on_cycle() {
    // C5 has apl 1.5; ask for exactly that with the degree sequence fixed
    let spec = NetworkSpec::new(
        5,
        vec![
            PropertyConstraint::DegreeSequence { values: vec![2, 2, 2, 2, 2] },
            PropertyConstraint::AvgPathLength { band: Band::point(1.5) },
        ],
    );
    let (status, obj, graph) = solve_spec(&spec);
    assert_eq!(status, MilpStatus::Optimal);
    assert!(obj.unwrap().abs() < 1e-6);
    assert!(check_spec(&graph.unwrap(), &spec, 1e-9).passed);
}

#[test]
fn clustering_band_matches_oracle() {
    // degree sequence {2,2,2,2} admits C4 (cc 0) and K3+isolated is out;
    // demanding acc = 1 must therefore carry positive slack
    let spec = NetworkSpec::new(
        4,
        vec![
            PropertyConstraint::DegreeSequence { values: vec![2, 2, 2, 2] },
            PropertyConstraint::AvgClustering { band: Band::point(1.0) },
        ],
    );
    let out = build(&spec).unwrap();
    let res = solve(&out.model, &SolveOptions::default()).unwrap();
    assert_eq!(res.status, MilpStatus::Optimal);
    let expected = oracle::evaluate(&spec, 1e-9).unwrap().min_model_slack.unwrap();
    assert!(
        (res.objective.unwrap() - expected).abs() < 1e-6,
        "solver {:?} oracle {expected}",
        res.objective
    );
}

#[test]
fn solver_matches_oracle_on_mixed_specs() {
    let specs = vec![
        NetworkSpec::new(
            4,
            vec![
                PropertyConstraint::DegreeBounds { nodes: None, lo: 1.0, hi: 2.0 },
                PropertyConstraint::Diameter { band: Band::new(2.0, 3.0) },
            ],
        ),
        NetworkSpec::new(
            4,
            vec![
                PropertyConstraint::DegreeSequence { values: vec![3, 1, 1, 1] },
                PropertyConstraint::CharPathLength { band: Band::point(2.0) },
            ],
        ),
        NetworkSpec::new(
            5,
            vec![
                PropertyConstraint::DegreeSequence { values: vec![2, 2, 2, 1, 1] },
                PropertyConstraint::AvgPathLength { band: Band::new(1.8, 2.2) },
            ],
        ),
    ];
    for (k, spec) in specs.iter().enumerate() {
        let out = build(spec).unwrap();
        let res = solve(&out.model, &SolveOptions::default()).unwrap();
        let orc = oracle::evaluate(spec, 1e-9).unwrap();
        match orc.min_model_slack {
            Some(expected) => {
                assert_eq!(res.status, MilpStatus::Optimal, "spec {k}");
                assert!(
                    (res.objective.unwrap() - expected).abs() < 1e-6,
                    "spec {k}: solver {:?} oracle {expected}",
                    res.objective
                );
            }
            None => assert_eq!(res.status, MilpStatus::Infeasible, "spec {k}"),
        }
    }
}
