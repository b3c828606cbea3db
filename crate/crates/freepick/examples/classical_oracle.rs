//! The classical one-variable reference solver on its own.
//!
//! Run with: cargo run --release -p freepick --example classical_oracle

use freepick::numerics::{cx, min_eig_herm};
use freepick::oracle::{pick_matrix, schur_solve, ScalarPickData, SchurOutcome};
use freepick::Tolerances;

fn main() {
    let tol = Tolerances::default();
    for (w2, label) in [(0.25, "inside"), (0.5, "boundary"), (0.6, "outside")] {
        let data = ScalarPickData::new(
            vec![cx(0.0, 0.0), cx(0.5, 0.0)],
            vec![cx(0.0, 0.0), cx(w2, 0.0)],
        )
        .unwrap();
        let p = pick_matrix(&data);
        let me = min_eig_herm(&p, &tol).unwrap();
        print!("targets (0, {w2}) [{label}]: pick min eig {me:+.4}, ");
        match schur_solve(&data).unwrap() {
            SchurOutcome::Solvable(f) => {
                println!(
                    "solvable; f(0.5) = {}, f(0.8i) = {}",
                    f.eval(cx(0.5, 0.0)),
                    f.eval(cx(0.0, 0.8))
                );
            }
            SchurOutcome::Unsolvable => println!("unsolvable"),
        }
    }
}
