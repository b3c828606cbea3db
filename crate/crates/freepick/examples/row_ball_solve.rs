//! Interpolation on the row ball in two noncommuting variables.
//!
//! The domain matrix has first column `x1, x2` and zeros elsewhere, so
//! membership means `x1* x1 + x2* x2 < 1`. The target comes from a hidden
//! transfer function and the solver recovers some unit-ball interpolant,
//! which is then stress-tested on random domain samples of sizes 1 to 4.
//!
//! Run with: cargo run --release -p freepick --example row_ball_solve

use freepick::freepoly::{MatrixTuple, PolyMatrix};
use freepick::numerics::{cx, fix_phases, op_norm, CMat};
use freepick::pipeline::{solve, Outcome, SolveOptions};
use freepick::problem::PickProblem;
use freepick::realization::Realization;
use freepick::sampler::{sample_domain, SampleConfig};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let delta = PolyMatrix::row_ball(2);

    // a random 2x2 pair scaled into the row ball
    let raw = MatrixTuple::new(
        (0..2)
            .map(|_| {
                CMat::from_fn(2, 2, |_, _| {
                    cx(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
                })
            })
            .collect(),
    )
    .unwrap();
    let norm = op_norm(&delta.eval(&raw).unwrap()).unwrap();
    let node = MatrixTuple::new(
        raw.mats()
            .iter()
            .map(|m| m.map(|z| z * (0.6 / norm)))
            .collect(),
    )
    .unwrap();

    // hidden reference function: the transfer function of a random unitary
    let q = {
        let a = CMat::from_fn(3, 3, |_, _| {
            cx(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        });
        let mut q = a.qr().q();
        fix_phases(&mut q);
        q
    };
    let hidden = Realization::from_parts(delta.clone(), 1, q);
    let target = hidden.eval(&node).unwrap().map(|z| z * 0.85);

    let problem = PickProblem {
        dims: 2,
        delta: delta.clone(),
        node: node.clone(),
        target: target.clone(),
        point_count: 1,
        gamma: Vec::new(),
    };
    let (outcome, _) = solve(
        &problem,
        &SolveOptions {
            seed: 5,
            ..SolveOptions::default()
        },
    )
    .expect("pipeline");
    let Outcome::Solved(bundle) = outcome else {
        panic!("solvable by construction")
    };

    println!("algebra dimension: {}", bundle.basis.dim());
    println!("gram basis size:   {}", bundle.certificate.n0);
    println!(
        "interpolation residual: {:.3e}",
        bundle.interpolation_residual
    );

    let cfg = SampleConfig {
        seed: 99,
        max_size: 4,
        count: 100,
        ..SampleConfig::default()
    };
    let mut worst: f64 = 0.0;
    for x in sample_domain(&delta, &cfg).unwrap() {
        let v = bundle.realization.eval(&x).unwrap();
        worst = worst.max(op_norm(&v).unwrap());
    }
    println!("largest ||phi(x)|| over 100 row-ball samples: {worst:.9}");
    println!("(the recovered phi need not equal the hidden one off the variety)");
}
