//! Pick interpolation for free holomorphic functions on basic free open
//! sets, after the domain `{ x : ||delta(x)|| < 1 }` of matrix tuples.
//!
//! The pipeline decides solvability of a one-point (or folded multi-point)
//! problem through algebra membership plus a Gram-matrix semidefinite
//! feasibility certificate, turns the certificate into a unitary colligation
//! whose transfer function solves the problem, parametrizes every solution
//! by a linear-fractional map, and extends functions off free varieties at
//! their variety norm. A classical one-variable Schur-recursion solver is
//! bundled as an independent cross-check.
//!
//! Start with [`pipeline::solve`], or see the `examples/` directory for one
//! runnable walkthrough per capability.

pub mod algebra;
pub mod certificate;
pub mod cli;
pub mod freepoly;
pub mod nevanlinna;
pub mod numerics;
pub mod oracle;
pub mod pipeline;
pub mod problem;
pub mod realization;
pub mod sampler;
pub mod tol;

pub use algebra::AlgebraBasis;
pub use certificate::{
    build_constraint_map, solve_feasibility, verify_certificate, GramCertificate,
};
pub use freepoly::{eval, in_domain, FreePoly, MatrixTuple, PolyMatrix, Word};
pub use nevanlinna::{build_parametrization, NevanlinnaData, Theta};
pub use numerics::{CMat, CVec, C64};
pub use oracle::{pick_matrix, schur_solve, ScalarPickData, SchurOutcome};
pub use pipeline::{Outcome, SolveOptions, SolvedBundle};
pub use problem::{PickProblem, Report};
pub use realization::{lurking_isometry, Realization};
pub use sampler::{estimate_sup, sample_domain, sample_variety, SampleConfig};
pub use tol::Tolerances;
