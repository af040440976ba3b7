//! End-to-end solve orchestration: compile the specification, try the graph
//! primal heuristic, and fall back to branch and bound.
//!
//! For slack-minimization runs the objective is bounded below by zero, so a
//! heuristic graph with zero mirrored slack is already a certified optimum;
//! the auxiliary variables are then filled in directly from the graph (with
//! a pinned re-solve as a safety net), yielding a complete, model-feasible
//! assignment. When the heuristic finds nothing the full branch-and-bound
//! search runs with whatever time remains.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::formulation::{build, BuildError, BuildOutput};
use crate::graph::Graph;
use crate::heuristic;
use crate::reconstruct;
use crate::solver::{solve, MilpResult, MilpStatus, SolveError, SolveOptions};
use crate::spec::NetworkSpec;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

pub struct PipelineOutcome {
    pub build: BuildOutput,
    pub result: MilpResult,
    /// True when the assignment came from a heuristic graph rather than the
    /// tree search.
    pub heuristic_used: bool,
}

/// Default slice of the run spent on the primal heuristic.
fn default_heuristic_budget(time_limit: Option<Duration>) -> Duration {
    match time_limit {
        Some(tl) => (tl / 4).min(Duration::from_secs(60)),
        None => Duration::from_secs(10),
    }
}

pub fn solve_spec(
    spec: &NetworkSpec,
    opts: &SolveOptions,
    heuristic_budget: Option<Duration>,
) -> Result<PipelineOutcome, PipelineError> {
    let out = build(spec)?;
    let start = Instant::now();
    if out.min_slack_objective {
        let budget = heuristic_budget.unwrap_or_else(|| default_heuristic_budget(opts.time_limit));
        if let Some(g) = heuristic::find_zero_slack(spec, budget, 0) {
            // every auxiliary variable is determined by the graph, so first
            // try the closed-form assignment; pin the edges and re-solve
            // only if the construction cannot certify it
            if let Some(x) = reconstruct::assignment_for_graph(&out, spec, &g) {
                return Ok(PipelineOutcome {
                    build: out,
                    result: MilpResult {
                        status: MilpStatus::Optimal,
                        objective: Some(0.0),
                        assignment: Some(x),
                        nodes: 0,
                        best_bound: Some(0.0),
                    },
                    heuristic_used: true,
                });
            }
            if let Some(result) = pin_and_solve(&out, &g, opts, start)? {
                return Ok(PipelineOutcome {
                    build: out,
                    result,
                    heuristic_used: true,
                });
            }
        }
    }
    let mut rest = opts.clone();
    if out.min_slack_objective {
        // the slack sum is nonnegative, so zero is a valid stopping floor
        rest.objective_floor = rest.objective_floor.or(Some(0.0));
    }
    if let Some(tl) = opts.time_limit {
        rest.time_limit = Some(tl.saturating_sub(start.elapsed()));
    }
    let result = solve(&out.model, &rest)?;
    Ok(PipelineOutcome {
        build: out,
        result,
        heuristic_used: false,
    })
}

/// Re-solves with the edge variables fixed to the heuristic graph; returns
/// `None` unless that yields a zero-slack optimum (in which case the full
/// search is unnecessary).
fn pin_and_solve(
    out: &BuildOutput,
    g: &Graph,
    opts: &SolveOptions,
    start: Instant,
) -> Result<Option<MilpResult>, SolveError> {
    let mut model = out.model.clone();
    for (&(i, j), &id) in &out.registry.x {
        let v = if g.has_edge(i, j) { 1.0 } else { 0.0 };
        model.tighten_bounds(id, v, v)?;
    }
    let mut o = opts.clone();
    o.objective_floor = Some(0.0);
    if let Some(tl) = opts.time_limit {
        o.time_limit = Some(tl.saturating_sub(start.elapsed()));
    }
    let res = solve(&model, &o)?;
    Ok(match res.status {
        MilpStatus::Optimal if res.objective.is_some_and(|v| v.abs() <= 1e-6) => Some(res),
        _ => None,
    })
}
