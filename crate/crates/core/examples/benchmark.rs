//! Per-λ cost of each method as m grows. Warmstart evaluation is O(m²) per
//! λ after one O(m³) preprocessing step; per-λ LU is O(m³).
//!
//!     cargo run --release --example benchmark

use parawarm::generate::optimal_instance;
use parawarm::sweep::{benchmark, BenchOptions, Method};

fn main() -> parawarm::Result<()> {
    let lambdas: Vec<f64> = (0..100).map(|k| 1e-3 * k as f64).collect();
    let opts = BenchOptions { repeats: 1, naive_sample: Some(5), ..Default::default() };
    println!("{:>5} {:>12} {:>12} {:>12} {:>12}", "m", "method", "preprocess", "per-λ", "total");
    for m in [25, 50, 100] {
        let inst = optimal_instance(m, 2 * m, 0.01, 1);
        let r = benchmark(&inst.lp, &lambdas, &Method::ALL, &opts)?;
        for row in &r.rows {
            println!(
                "{m:>5} {:>12} {:>12.2e} {:>12.2e} {:>12.2e}{}",
                row.method.as_str(),
                row.preprocess_seconds.unwrap_or(0.0),
                row.median_per_lambda_seconds.unwrap_or(f64::NAN),
                row.total_seconds,
                if row.extrapolated { " (extrapolated)" } else { "" },
            );
        }
    }
    Ok(())
}
