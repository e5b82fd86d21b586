//! Solve P(λ) for a few λ with the dense simplex and show how the optimal
//! basis changes.
//!
//!     cargo run --example solve

use nalgebra::DMatrix;
use parawarm::model::{parse_problem, ParametricLP};
use parawarm::simplex::solve_lp;

fn main() -> parawarm::Result<()> {
    // min x0 + 3x1  s.t. x0 + (1+λ)x1 = 2
    let lp = ParametricLP::standard(
        vec![1.0, 3.0],
        DMatrix::from_row_slice(1, 2, &[1.0, 1.0]),
        DMatrix::from_row_slice(1, 2, &[0.0, 1.0]),
        vec![2.0],
    )?;
    for lambda in [0.0, 1.0, 2.0, 3.0, 5.0] {
        let r = solve_lp(&lp, lambda)?;
        println!(
            "λ={lambda:<4} {} basis={} objective={:.4} iterations={}",
            r.status,
            r.basis.as_ref().map(|b| b.to_string()).unwrap_or_default(),
            r.objective.unwrap_or(f64::NAN),
            r.iterations,
        );
    }

    // "le" rows get slack columns appended by to_standard_form.
    let lp = parse_problem(
        r#"{"c": [-1, -1], "A": [[1, 2], [3, 1]], "D": [[0, 1], [1, 0]],
            "b": [4, 6], "senses": ["le", "le"]}"#,
    )?;
    let std = lp.to_standard_form();
    println!("\nle-form {}x{} -> standard {}x{}", lp.rows(), lp.cols(), std.rows(), std.cols());
    let r = solve_lp(&std, 0.5)?;
    println!("λ=0.5 objective={:.6} x={:?}", r.objective.unwrap(), r.x.unwrap());
    Ok(())
}
