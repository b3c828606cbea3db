//! Sweep through the family of all solutions of one problem.
//!
//! A solvable problem has a linear-fractional parametrization
//! `phi = G11 + G12 Theta (I - G22 Theta)^(-1) G21` over contractive
//! parameters `Theta`. The example builds it for a one-node problem, prints
//! the central solution, and walks a circle of constant parameters; every
//! member interpolates the data and stays in the unit ball.
//!
//! Run with: cargo run --release -p freepick --example solution_family

use freepick::freepoly::{MatrixTuple, PolyMatrix};
use freepick::nevanlinna::Theta;
use freepick::numerics::{cx, CMat};
use freepick::pipeline::{parametrize, solve, Outcome, SolveOptions};
use freepick::problem::PickProblem;

fn main() {
    let z = cx(0.5, 0.0);
    let w = cx(0.25, 0.0);
    let problem = PickProblem {
        dims: 1,
        delta: PolyMatrix::scalar_var(1),
        node: MatrixTuple::scalars(&[z]),
        target: CMat::from_row_slice(1, 1, &[w]),
        point_count: 1,
        gamma: Vec::new(),
    };
    let opts = SolveOptions {
        seed: 11,
        ..SolveOptions::default()
    };
    let (outcome, _) = solve(&problem, &opts).expect("pipeline");
    let Outcome::Solved(bundle) = outcome else {
        panic!("solvable")
    };
    let family = parametrize(&problem, &bundle, &opts).expect("parametrization");
    println!("parameter space dimension: {}", family.m_dim());

    let probe = MatrixTuple::scalars(&[cx(-0.3, 0.2)]);
    let central = family.lft(&Theta::Zero, &probe).unwrap();
    println!("central solution at -0.3+0.2i: {}", central[(0, 0)]);

    for k in 0..6 {
        let angle = k as f64 * std::f64::consts::TAU / 6.0;
        let c = cx(0.8 * angle.cos(), 0.8 * angle.sin());
        let theta = Theta::Constant(CMat::from_row_slice(1, 1, &[c]));
        let at_node = family.lft(&theta, &problem.node).unwrap();
        let at_probe = family.lft(&theta, &probe).unwrap();
        println!(
            "theta = {c:.2}: phi(z) = {} (target {w}), phi(-0.3+0.2i) = {}",
            at_node[(0, 0)],
            at_probe[(0, 0)]
        );
    }
}
