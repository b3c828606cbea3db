//! A problem with no holomorphic solution at all.
//!
//! No function (bounded or not) maps the 2x2 nilpotent Jordan cell to the
//! rank-one projection: every value at the cell must lie in the algebra it
//! generates, which is spanned by the identity and the cell itself. The
//! solver detects this through membership and exits before any feasibility
//! work.
//!
//! Run with: cargo run --release -p freepick --example reject_off_algebra

use freepick::freepoly::{MatrixTuple, PolyMatrix};
use freepick::numerics::{cx, CMat};
use freepick::pipeline::{solve, Outcome, SolveOptions};
use freepick::problem::PickProblem;
use freepick::{AlgebraBasis, Tolerances};

fn main() {
    let cell = CMat::from_row_slice(
        2,
        2,
        &[cx(0.0, 0.0), cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0)],
    );
    let projection = CMat::from_row_slice(
        2,
        2,
        &[cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0)],
    );
    let node = MatrixTuple::new(vec![cell]).unwrap();

    let tol = Tolerances::default();
    let basis = AlgebraBasis::compute(&node, &tol).unwrap();
    println!("algebra dimension at the Jordan cell: {}", basis.dim());
    let (_, residual) = basis.project(&projection).unwrap();
    println!("projection residual of the target: {residual:.6}");

    let problem = PickProblem {
        dims: 1,
        delta: PolyMatrix::scalar_var(1),
        node,
        target: projection,
        point_count: 1,
        gamma: Vec::new(),
    };
    let (outcome, report) = solve(&problem, &SolveOptions::default()).expect("pipeline");
    match outcome {
        Outcome::NotInAlgebra { residual } => {
            println!("status: {} (exit code {})", report.status, report.exit_code);
            println!("membership residual: {residual:.6}");
        }
        _ => panic!("the target must be rejected"),
    }
}
