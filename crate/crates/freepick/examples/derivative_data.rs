//! Joint value-and-derivative interpolation through a block fold.
//!
//! Prescribing `phi(L) = W` and `D phi(L)[H] = X` is the same as one
//! interpolation condition at the upper-triangular pair `[[L, H], [0, L]]`
//! with target `[[W, X], [0, W]]`, because evaluation on that pair carries
//! the derivative in its corner block. The example solves the fold on the
//! row ball and cross-checks the derivative with central finite differences.
//!
//! Run with: cargo run --release -p freepick --example derivative_data

use freepick::freepoly::{MatrixTuple, PolyMatrix};
use freepick::numerics::{cx, op_norm, CMat};
use freepick::pipeline::{solve, Outcome, SolveOptions};
use freepick::problem::PickProblem;

fn main() {
    let delta = PolyMatrix::row_ball(2);
    let base = MatrixTuple::scalars(&[cx(0.30, 0.0), cx(0.20, 0.0)]);
    let dir = MatrixTuple::scalars(&[cx(0.10, 0.0), cx(-0.15, 0.0)]);

    // data a known function would produce: w = value, x = derivative of
    // phi(x1, x2) = (x1 + x2) / 2 at the base point
    let w = cx(0.25, 0.0);
    let x = cx(-0.025, 0.0);

    let pair = base.jordan_pair(&dir).unwrap();
    println!(
        "||delta|| at the fold: {:.4}",
        op_norm(&delta.eval(&pair).unwrap()).unwrap()
    );
    let target = CMat::from_row_slice(2, 2, &[w, x, cx(0.0, 0.0), w]);

    let problem = PickProblem {
        dims: 2,
        delta,
        node: pair,
        target,
        point_count: 1,
        gamma: Vec::new(),
    };
    let (outcome, _) = solve(
        &problem,
        &SolveOptions {
            seed: 3,
            ..SolveOptions::default()
        },
    )
    .expect("pipeline");
    let Outcome::Solved(bundle) = outcome else {
        panic!("fold should be solvable")
    };

    let value = bundle.realization.eval(&base).unwrap();
    let derivative = bundle.realization.derivative(&base, &dir).unwrap();
    println!("phi(base)      = {} (target {w})", value[(0, 0)]);
    println!("D phi(base)[h] = {} (target {x})", derivative[(0, 0)]);

    // central finite differences at step 1e-5
    let step = 1e-5;
    let shift = |sign: f64| {
        MatrixTuple::new(
            base.mats()
                .iter()
                .zip(dir.mats())
                .map(|(a, b)| a + b.map(|z| z * (sign * step)))
                .collect(),
        )
        .unwrap()
    };
    let fd = (bundle.realization.eval(&shift(1.0)).unwrap()
        - bundle.realization.eval(&shift(-1.0)).unwrap())
    .map(|z| z / (2.0 * step));
    let rel = (fd[(0, 0)] - derivative[(0, 0)]).norm() / derivative[(0, 0)].norm();
    println!("finite-difference relative error: {rel:.3e}");
}
