//! Exact MILP solving: a bounded-variable simplex for the relaxations and a
//! deterministic branch-and-bound search over the binary columns.

mod bnb;
mod simplex;

pub use bnb::{
    enumerate_at_cutoff, solve, solve_relaxation, MilpResult, MilpStatus, SolveError,
    SolveOptions,
};
pub use simplex::{solve_lp, solve_lp_deadline, LpSolution, LpStatus, StandardForm};
