//! Basics of the free polynomial layer: parsing, printing, evaluation on
//! matrix tuples, and the block evaluation that defines the domains.
//!
//! Run with: cargo run --release -p freepick --example free_polynomials

use freepick::freepoly::{eval, in_domain, poly_derivative, FreePoly, MatrixTuple, PolyMatrix};
use freepick::numerics::{cx, CMat};

fn main() {
    let commutator = FreePoly::parse("x1*x2 - x2*x1", 2).unwrap();
    println!("parsed:  {commutator}");
    println!("degree:  {}", commutator.degree());

    let p = FreePoly::parse("(x1 + 2i)*x1^2 - 0.5", 1).unwrap();
    println!("expanded: {p}");

    // evaluation is multiplicative on words and respects direct sums
    let a = CMat::from_row_slice(
        2,
        2,
        &[cx(0.1, 0.0), cx(0.6, 0.0), cx(0.0, 0.0), cx(0.3, 0.0)],
    );
    let b = CMat::from_row_slice(
        2,
        2,
        &[cx(0.2, 0.1), cx(0.0, 0.0), cx(0.4, 0.0), cx(0.0, 0.2)],
    );
    let x = MatrixTuple::new(vec![a, b]).unwrap();
    let v = eval(&commutator, &x).unwrap();
    println!("commutator norm at a noncommuting pair: {:.4}", v.norm());

    // the row ball: delta(x)* delta(x) carries x1* x1 + x2* x2
    let delta = PolyMatrix::row_ball(2);
    let (inside, norm) = in_domain(&delta, &x, 0.0).unwrap();
    println!("row-ball norm {norm:.4}, inside: {inside}");

    // directional derivative through the doubled tuple
    let h = MatrixTuple::new(vec![
        CMat::identity(2, 2).map(|z| z * cx(0.1, 0.0)),
        CMat::zeros(2, 2),
    ])
    .unwrap();
    let d = poly_derivative(&commutator, &x, &h).unwrap();
    println!(
        "derivative norm of the commutator in direction (0.1 I, 0): {:.4}",
        d.norm()
    );
}
