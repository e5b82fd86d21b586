//! Preprocess one optimal basis, then evaluate it across a grid of λ.
//!
//!     cargo run --example sweep

use parawarm::generate::optimal_instance;
use parawarm::simplex::solve_lp;
use parawarm::sweep::{solve_and_sweep, sweep};
use parawarm::warmstart::{preprocess, WarmstartOptions};

fn main() -> parawarm::Result<()> {
    let inst = optimal_instance(30, 60, 0.05, 11);
    let lambdas: Vec<f64> = (0..=20).map(|k| -0.1 + 0.01 * k as f64).collect();

    let report = solve_and_sweep(&inst.lp, &lambdas, &WarmstartOptions::default())?;
    println!("strategy={} preprocess={:.2e}s", report.strategy,
        report.timings.preprocess_seconds.unwrap());
    println!("{:>6} {:>20} {:>12} {:>12}", "λ", "status", "objective", "simplex");
    for r in &report.results {
        let exact = solve_lp(&inst.lp, r.lambda)?.objective;
        println!(
            "{:>6.2} {:>20} {:>12.6} {:>12.6}",
            r.lambda,
            r.status.as_str(),
            r.objective.unwrap_or(f64::NAN),
            exact.unwrap_or(f64::NAN),
        );
    }
    println!("{:?}", report.counts);

    // The cache is reusable: a second sweep costs no preprocessing.
    let cache = preprocess(&inst.lp, &report.basis, &WarmstartOptions::default())?;
    let fine: Vec<f64> = (0..1000).map(|k| k as f64 * 1e-5).collect();
    let r = sweep(&cache, &fine);
    let per: f64 = r.timings.per_lambda_seconds.iter().sum::<f64>() / fine.len() as f64;
    println!("1000 more λ at {per:.2e}s each");
    Ok(())
}
