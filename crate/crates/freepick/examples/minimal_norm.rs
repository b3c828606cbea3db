//! Minimal interpolation norm by bisection on the target scaling.
//!
//! The data `0 -> 0`, `1/2 -> 1/2` sits exactly on the solvability
//! boundary: the identity map is the only unit-ball solution, so the
//! minimal norm is one. Scaling the target up or down moves the norm
//! accordingly.
//!
//! Run with: cargo run --release -p freepick --example minimal_norm

use freepick::freepoly::{MatrixTuple, PolyMatrix};
use freepick::numerics::{cx, CMat};
use freepick::pipeline::{minimal_norm, SolveOptions};
use freepick::problem::PickProblem;

fn main() {
    for w2 in [0.25, 0.5, 0.7] {
        let lambda = CMat::from_row_slice(
            2,
            2,
            &[cx(0.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(0.5, 0.0)],
        );
        let w = CMat::from_row_slice(
            2,
            2,
            &[cx(0.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(w2, 0.0)],
        );
        let problem = PickProblem {
            dims: 1,
            delta: PolyMatrix::scalar_var(1),
            node: MatrixTuple::new(vec![lambda]).unwrap(),
            target: w,
            point_count: 2,
            gamma: Vec::new(),
        };
        let (norm, _) = minimal_norm(&problem, &SolveOptions::default()).expect("pipeline");
        println!("targets (0, {w2}): minimal interpolation norm {norm:.5}");
    }
}
