//! Solve a two-node disk problem end to end.
//!
//! The two scalar conditions fold into one 2x2 diagonal node; the solver
//! decides feasibility, builds a transfer-function realization, and the
//! example checks the interpolation conditions and contractivity.
//!
//! Run with: cargo run --release -p freepick --example solve_two_point

use freepick::freepoly::{MatrixTuple, PolyMatrix};
use freepick::numerics::{cx, op_norm, CMat};
use freepick::pipeline::{solve, Outcome, SolveOptions};
use freepick::problem::PickProblem;

fn main() {
    // f(0) = 0 and f(1/2) = 1/4, inside the unit disk
    let nodes = [cx(0.0, 0.0), cx(0.5, 0.0)];
    let targets = [cx(0.0, 0.0), cx(0.25, 0.0)];

    let lambda = CMat::from_fn(2, 2, |r, c| if r == c { nodes[r] } else { cx(0.0, 0.0) });
    let w = CMat::from_fn(2, 2, |r, c| if r == c { targets[r] } else { cx(0.0, 0.0) });
    let problem = PickProblem {
        dims: 1,
        delta: PolyMatrix::scalar_var(1),
        node: MatrixTuple::new(vec![lambda]).unwrap(),
        target: w,
        point_count: 2,
        gamma: Vec::new(),
    };

    let opts = SolveOptions {
        seed: 7,
        ..SolveOptions::default()
    };
    let (outcome, report) = solve(&problem, &opts).expect("pipeline");
    let Outcome::Solved(bundle) = outcome else {
        panic!("this problem is classically solvable");
    };

    println!("status: {}", report.status);
    println!(
        "interpolation residual: {:.3e}",
        bundle.interpolation_residual
    );
    println!(
        "colligation size: {0}x{0}",
        bundle.realization.colligation().nrows()
    );

    for (z, want) in nodes.iter().zip(&targets) {
        let v = bundle
            .realization
            .eval(&MatrixTuple::scalars(&[*z]))
            .unwrap();
        println!("phi({z}) = {} (target {want})", v[(0, 0)]);
    }

    // the solution is a Schur-class function: check a few disk points
    let mut worst: f64 = 0.0;
    for k in 0..12 {
        let angle = k as f64 * 0.5236;
        let z = cx(0.93 * angle.cos(), 0.93 * angle.sin());
        let v = bundle
            .realization
            .eval(&MatrixTuple::scalars(&[z]))
            .unwrap();
        worst = worst.max(op_norm(&v).unwrap());
    }
    println!("largest |phi| on a circle of radius 0.93: {worst:.6}");
}
