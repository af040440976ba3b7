//! `netgen` — generate small networks with prescribed collective properties.
//!
//! Subcommands cover the full workflow: `solve` runs the embedded MILP
//! solver, `export`/`import` bridge to external LP solvers through text
//! files, `enumerate` lists all non-isomorphic solutions, `oracle` brute
//! forces small instances, and `verify` re-checks a graph file against a
//! spec. Exit codes: 0 success with a satisfying graph, 1 verification
//! failure, 2 malformed specification, 3 specification provably
//! unattainable, 4 resource limit reached.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use netgen_core::formulation::{build, BuildOutput};
use netgen_core::graph::{canonical_key, compute_report, Graph};
use netgen_core::milp::VarId;
use netgen_core::oracle;
use netgen_core::solver::{enumerate_at_cutoff, MilpStatus, SolveOptions};
use netgen_core::spec::NetworkSpec;
use netgen_core::verify::check_spec;

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_BAD_SPEC: u8 = 2;
const EXIT_UNATTAINABLE: u8 = 3;
const EXIT_LIMIT: u8 = 4;

#[derive(Parser)]
#[command(name = "netgen", version, about = "Constraint-driven network generation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphFormat {
    Edgelist,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a specification with the embedded solver and emit a graph.
    Solve {
        spec: PathBuf,
        /// Wall-clock limit in seconds.
        #[arg(long)]
        time_limit: Option<f64>,
        /// Parallel LP evaluations per search batch.
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Force a single deterministic search order regardless of workers.
        #[arg(long)]
        seedless_deterministic: bool,
        /// Directory for the graph and run report (defaults to stdout only).
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "edgelist")]
        format: GraphFormat,
    },
    /// Write the MILP for a specification in LP text format.
    Export {
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Import an external solver's `name value` assignment and verify it.
    Import {
        spec: PathBuf,
        solution: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "edgelist")]
        format: GraphFormat,
    },
    /// Enumerate all non-isomorphic graphs attaining the specification.
    Enumerate {
        spec: PathBuf,
        /// Stop after this many isomorphism classes.
        #[arg(long, default_value_t = 1000)]
        limit: usize,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "edgelist")]
        format: GraphFormat,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Brute-force ground truth for small node counts.
    Oracle { spec: PathBuf },
    /// Re-check a graph file against a specification.
    Verify { spec: PathBuf, graph: PathBuf },
}

#[derive(Serialize)]
struct RunReport {
    status: String,
    objective: Option<f64>,
    total_slack: Option<f64>,
    slack_by_constraint: BTreeMap<String, f64>,
    nodes_explored: u64,
    wall_time_secs: f64,
    graph_edges: Option<Vec<(usize, usize)>>,
    verified: Option<bool>,
}

fn log_enabled() -> bool {
    std::env::var("NETGEN_LOG").map_or(false, |v| !v.is_empty() && v != "0")
}

macro_rules! logln {
    ($($arg:tt)*) => {
        if log_enabled() {
            eprintln!($($arg)*);
        }
    };
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_BAD_SPEC)
        }
    }
}

fn load_spec(path: &Path) -> Result<NetworkSpec, String> {
    let text =
        std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    NetworkSpec::from_json(&text).map_err(|e| format!("invalid spec: {e}"))
}

fn build_spec(spec: &NetworkSpec) -> Result<BuildOutput, String> {
    build(spec).map_err(|e| format!("invalid spec: {e}"))
}

fn write_graph(
    g: &Graph,
    dir: &Path,
    stem: &str,
    format: GraphFormat,
) -> Result<PathBuf, String> {
    std::fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    let (ext, text) = match format {
        GraphFormat::Edgelist => ("edgelist", g.to_edge_list()),
        GraphFormat::Dot => ("dot", g.to_dot()),
    };
    let path = dir.join(format!("{stem}.{ext}"));
    std::fs::write(&path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    Ok(path)
}

fn slack_breakdown(out: &BuildOutput, x: &[f64]) -> (f64, BTreeMap<String, f64>) {
    let mut by_group = BTreeMap::new();
    let mut total = 0.0;
    for g in &out.registry.slack_groups {
        let s: f64 = g.vars.iter().map(|id| x[id.0]).sum();
        total += s;
        by_group.insert(g.label.clone(), s);
    }
    (total, by_group)
}

fn print_summary(g: &Graph) {
    let r = compute_report(g);
    println!("graph: {} nodes, {} edges", g.n(), g.num_edges());
    let mut degs: Vec<usize> = r.degrees[1..].to_vec();
    degs.sort_unstable_by(|a, b| b.cmp(a));
    println!("degrees: {degs:?}");
    println!("avg clustering: {:.4}", r.avg_cc);
    if let Some(gcc) = r.global_cc {
        println!("global clustering: {gcc:.4}");
    }
    match (r.apl, r.diameter) {
        (Some(apl), Some(d)) => println!("avg path length: {apl:.4}, diameter: {d}"),
        _ => println!("graph is disconnected"),
    }
}

fn run(cmd: Command) -> Result<ExitCode, String> {
    match cmd {
        Command::Solve {
            spec,
            time_limit,
            workers,
            seedless_deterministic,
            out_dir,
            format,
        } => {
            let spec = load_spec(&spec)?;
            let opts = SolveOptions {
                time_limit: time_limit.map(Duration::from_secs_f64),
                workers: if seedless_deterministic { 1 } else { workers },
                ..Default::default()
            };
            let start = Instant::now();
            let outcome = netgen_core::pipeline::solve_spec(&spec, &opts, None)
                .map_err(|e| format!("solver failed: {e}"))?;
            let out = outcome.build;
            let res = outcome.result;
            let wall = start.elapsed().as_secs_f64();
            logln!(
                "model: {} variables, {} constraints",
                out.model.num_vars(),
                out.model.num_constraints()
            );
            logln!(
                "search: {} nodes in {wall:.2}s{}",
                res.nodes,
                if outcome.heuristic_used { " (primal heuristic)" } else { "" }
            );

            let (status_str, code, graph, total_slack, by_group, verified) = match res.status {
                MilpStatus::Infeasible => (
                    "infeasible".to_string(),
                    EXIT_UNATTAINABLE,
                    None,
                    None,
                    BTreeMap::new(),
                    None,
                ),
                MilpStatus::LimitReached => (
                    "limit_reached".to_string(),
                    EXIT_LIMIT,
                    None,
                    res.objective,
                    BTreeMap::new(),
                    None,
                ),
                MilpStatus::Optimal => {
                    let x = res.assignment.as_ref().unwrap();
                    let g = out
                        .registry
                        .extract_graph(&|id| x[id.0])
                        .map_err(|e| format!("graph extraction failed: {e}"))?;
                    let (total, by_group) = slack_breakdown(&out, x);
                    if out.min_slack_objective && total > 1e-6 {
                        (
                            "unattainable".to_string(),
                            EXIT_UNATTAINABLE,
                            Some(g),
                            Some(total),
                            by_group,
                            None,
                        )
                    } else {
                        let ok = check_spec(&g, &spec, 1e-9).passed;
                        (
                            "optimal".to_string(),
                            if ok { 0 } else { EXIT_VERIFY_FAILED },
                            Some(g),
                            Some(total),
                            by_group,
                            Some(ok),
                        )
                    }
                }
            };

            let report = RunReport {
                status: status_str.clone(),
                objective: res.objective,
                total_slack,
                slack_by_constraint: by_group,
                nodes_explored: res.nodes,
                wall_time_secs: wall,
                graph_edges: graph.as_ref().map(|g| g.edges().collect()),
                verified,
            };
            println!("status: {status_str}");
            if let Some(obj) = res.objective {
                println!("objective: {obj}");
            }
            if let Some(slack) = total_slack {
                println!("total slack: {slack}");
                if slack > 1e-6 {
                    for (label, s) in &report.slack_by_constraint {
                        if *s > 1e-9 {
                            println!("  deviation {label}: {s}");
                        }
                    }
                }
            }
            if let Some(g) = &graph {
                print_summary(g);
            }
            if let Some(dir) = out_dir {
                if let Some(g) = &graph {
                    let p = write_graph(g, &dir, "graph", format)?;
                    println!("wrote {}", p.display());
                }
                let rp = dir.join("report.json");
                std::fs::create_dir_all(&dir)
                    .map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
                std::fs::write(
                    &rp,
                    serde_json::to_string_pretty(&report).expect("report serializes"),
                )
                .map_err(|e| format!("cannot write {}: {e}", rp.display()))?;
                println!("wrote {}", rp.display());
            }
            Ok(ExitCode::from(code))
        }
        Command::Export { spec, out } => {
            let spec = load_spec(&spec)?;
            let built = build_spec(&spec)?;
            std::fs::write(&out, built.model.write_lp_format())
                .map_err(|e| format!("cannot write {}: {e}", out.display()))?;
            println!(
                "wrote {} ({} variables, {} constraints)",
                out.display(),
                built.model.num_vars(),
                built.model.num_constraints()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Import {
            spec,
            solution,
            out_dir,
            format,
        } => {
            let spec = load_spec(&spec)?;
            let built = build_spec(&spec)?;
            let text = std::fs::read_to_string(&solution)
                .map_err(|e| format!("cannot read {}: {e}", solution.display()))?;
            let values = built
                .model
                .parse_solution(&text)
                .map_err(|e| format!("invalid solution: {e}"))?;
            let lookup = |id: VarId| values.get(&id).copied().unwrap_or(0.0);
            let g = built
                .registry
                .extract_graph(&lookup)
                .map_err(|e| format!("graph extraction failed: {e}"))?;
            let mut x = vec![0.0; built.model.num_vars()];
            for (id, v) in &values {
                x[id.0] = *v;
            }
            let (total, by_group) = slack_breakdown(&built, &x);
            println!("imported total slack: {total}");
            for (label, s) in &by_group {
                if *s > 1e-9 {
                    println!("  deviation {label}: {s}");
                }
            }
            print_summary(&g);
            let ok = check_spec(&g, &spec, 1e-9).passed;
            println!("verification: {}", if ok { "passed" } else { "failed" });
            if let Some(dir) = out_dir {
                let p = write_graph(&g, &dir, "graph", format)?;
                println!("wrote {}", p.display());
            }
            if total > 1e-6 {
                Ok(ExitCode::from(EXIT_UNATTAINABLE))
            } else if ok {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(EXIT_VERIFY_FAILED))
            }
        }
        Command::Enumerate {
            spec,
            limit,
            out_dir,
            format,
            workers,
        } => {
            let spec = load_spec(&spec)?;
            let built = build_spec(&spec)?;
            if !built.min_slack_objective {
                return Err("enumeration requires the slack-minimization objective".into());
            }
            let opts = SolveOptions {
                workers,
                objective_floor: Some(0.0),
                ..Default::default()
            };
            let x_ids: Vec<VarId> = built.registry.x.values().copied().collect();
            // generous labeled cap; isomorphic duplicates are filtered below
            let labeled_cap = limit.saturating_mul(64).max(1024);
            let sols = enumerate_at_cutoff(&built.model, &x_ids, 1e-6, &opts, labeled_cap)
                .map_err(|e| format!("solver failed: {e}"))?;
            let mut seen = std::collections::BTreeSet::new();
            let mut reps: Vec<Graph> = Vec::new();
            for x in &sols {
                let g = built
                    .registry
                    .extract_graph(&|id| x[id.0])
                    .map_err(|e| format!("graph extraction failed: {e}"))?;
                let key = canonical_key(&g).map_err(|e| format!("canonical key: {e}"))?;
                if seen.insert(key) {
                    reps.push(g);
                    if reps.len() >= limit {
                        break;
                    }
                }
            }
            println!(
                "{} non-isomorphic graphs attain the specification",
                reps.len()
            );
            for (k, g) in reps.iter().enumerate() {
                let edges: Vec<(usize, usize)> = g.edges().collect();
                println!("graph {}: {:?}", k + 1, edges);
                if let Some(dir) = &out_dir {
                    write_graph(g, dir, &format!("graph_{}", k + 1), format)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle { spec } => {
            let spec = load_spec(&spec)?;
            let res = oracle::evaluate(&spec, 1e-9).map_err(|e| format!("oracle: {e}"))?;
            println!(
                "feasible isomorphism classes: {}",
                res.classes_feasible
            );
            println!("feasible labeled graphs: {}", res.labeled_feasible);
            match res.min_model_slack {
                Some(s) => println!("minimum model slack: {s}"),
                None => println!("minimum model slack: model infeasible for every graph"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { spec, graph } => {
            let spec = load_spec(&spec)?;
            let text = std::fs::read_to_string(&graph)
                .map_err(|e| format!("cannot read {}: {e}", graph.display()))?;
            let g = Graph::from_edge_list(&text).map_err(|e| format!("invalid graph: {e}"))?;
            if g.n() != spec.n {
                return Err(format!(
                    "graph has {} nodes but the spec requires {}",
                    g.n(),
                    spec.n
                ));
            }
            let report = check_spec(&g, &spec, 1e-9);
            for c in &report.checks {
                match (&c.passed, &c.reason) {
                    (true, _) => println!("PASS {}", c.description),
                    (false, Some(r)) => println!("FAIL {} ({r})", c.description),
                    (false, None) => println!("FAIL {}", c.description),
                }
            }
            if report.passed {
                println!("verification passed");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("verification failed");
                Ok(ExitCode::from(EXIT_VERIFY_FAILED))
            }
        }
    }
}
