//! Generation of undirected simple graphs with prescribed collective
//! properties, by compiling a declarative specification into a mixed-integer
//! linear program, solving it exactly, and re-verifying every emitted graph
//! from its edge set alone.

pub mod formulation;
pub mod graph;
pub mod heuristic;
pub mod milp;
pub mod oracle;
pub mod pipeline;
pub mod reconstruct;
pub mod solver;
pub mod spec;
pub mod verify;

pub use formulation::{build, BuildError, BuildOutput, ModelBuilder, VariableRegistry};
pub use graph::{canonical_key, compute_report, Graph, GraphError, PropertyReport};
pub use milp::{MilpModel, ModelError, ObjSense, Sense, VarId, VarKind};
pub use spec::{
    Band, MotifMode, NetworkSpec, ObjectiveProperty, ObjectiveSpec, PropertyConstraint,
    SecondaryCriterion, SpecError, SymmetryConfig,
};
pub use verify::{check_spec, ConstraintCheck, VerifyReport};
