//! Norm-preserving extension off the diagonal variety of the bidisk.
//!
//! A one-variable Schur function is sampled at three diagonal points
//! `(z, z)` of the bidisk; the extension stage folds them into one node and
//! produces a free function on the whole bidisk that agrees with the
//! one-variable interpolant on the variety and stays in the unit ball on
//! noncommuting pairs.
//!
//! Run with: cargo run --release -p freepick --example extend_off_variety

use freepick::freepoly::{eval, FreePoly, MatrixTuple, PolyMatrix};
use freepick::numerics::{cx, op_norm, CMat, C64};
use freepick::pipeline::{extend, Outcome, SolveOptions};
use freepick::problem::PickProblem;
use freepick::sampler::{sample_domain, SampleConfig};

fn main() {
    let nodes = [cx(0.2, 0.0), cx(-0.35, 0.0), cx(0.5, 0.0)];
    // a Moebius map pulled inside the ball
    let f = |z: C64| (z + cx(0.3, 0.0)) / (cx(1.0, 0.0) + cx(0.3, 0.0) * z) * cx(0.9, 0.0);

    let lambda = CMat::from_fn(3, 3, |r, c| if r == c { nodes[r] } else { cx(0.0, 0.0) });
    let w = CMat::from_fn(3, 3, |r, c| if r == c { f(nodes[r]) } else { cx(0.0, 0.0) });
    let problem = PickProblem {
        dims: 2,
        delta: PolyMatrix::diag_vars(2),
        node: MatrixTuple::new(vec![lambda.clone(), lambda]).unwrap(),
        target: w,
        point_count: 3,
        gamma: vec![
            FreePoly::parse("x1 - x2", 2).unwrap(),
            FreePoly::parse("x1*x2 - x2*x1", 2).unwrap(),
        ],
    };

    let opts = SolveOptions {
        seed: 17,
        ..SolveOptions::default()
    };
    let (outcome, scale, report) = extend(&problem, &opts, None).expect("pipeline");
    let Outcome::Solved(bundle) = outcome else {
        panic!("stage should be solvable")
    };
    println!(
        "finite stage: {} points, scale {scale}",
        report.finite_stage.unwrap()
    );
    println!(
        "variety sup estimate: {:.6}",
        report.norms.sup_estimate.unwrap()
    );

    // held-out check: a non-normal T with spectrum among the nodes
    let t = CMat::from_row_slice(2, 2, &[nodes[0], cx(0.3, 0.1), cx(0.0, 0.0), nodes[2]]);
    let x = MatrixTuple::new(vec![t.clone(), t.clone()]).unwrap();
    let phi = bundle.realization.eval(&x).unwrap();

    // one-variable Lagrange interpolant through the same data
    let mut g = FreePoly::zero(1);
    for j in 0..3 {
        let mut lj = FreePoly::one(1);
        let mut denom = cx(1.0, 0.0);
        for m in 0..3 {
            if m != j {
                lj = lj.mul(&FreePoly::parse(&format!("x1 - ({})", nodes[m].re), 1).unwrap());
                denom *= nodes[j] - nodes[m];
            }
        }
        g = g.add(&lj.scale(f(nodes[j]) / denom));
    }
    let gt = eval(&g, &MatrixTuple::new(vec![t]).unwrap()).unwrap();
    println!(
        "held-out deviation from the 1-variable interpolant: {:.3e}",
        (phi - gt).norm()
    );

    let cfg = SampleConfig {
        seed: 23,
        max_size: 3,
        count: 40,
        ..SampleConfig::default()
    };
    let mut worst: f64 = 0.0;
    for x in sample_domain(bundle.realization.delta(), &cfg).unwrap() {
        worst = worst.max(op_norm(&bundle.realization.eval(&x).unwrap()).unwrap());
    }
    println!("largest ||phi|| over 40 noncommuting bidisk samples: {worst:.9}");
}
