//! Certified piecewise-linear approximation of the optimal value over a
//! range that crosses basis changes.
//!
//!     cargo run --example adaptive

use parawarm::generate::optimal_instance;
use parawarm::simplex::solve_lp;
use parawarm::sweep::{adaptive_approx, AdaptiveLimits};
use parawarm::warmstart::WarmstartOptions;

fn main() -> parawarm::Result<()> {
    let inst = optimal_instance(8, 16, 0.2, 2);
    let (lo, hi) = (0.0, 1.0);
    let eps = 1e-2;
    let approx = adaptive_approx(&inst.lp, (lo, hi), eps, AdaptiveLimits::default(),
        &WarmstartOptions::default())?;

    let certified = approx.intervals.iter().filter(|i| i.certified).count();
    println!(
        "{} breakpoints, {certified}/{} intervals certified, {} re-anchors",
        approx.breakpoints.len(),
        approx.intervals.len(),
        approx.reanchor_events.len()
    );
    for e in &approx.reanchor_events {
        println!("  λ={:.6}: {} -> {}", e.lambda, e.old_basis, e.new_basis);
    }

    let mut worst: f64 = 0.0;
    for k in 0..=200 {
        let l = lo + (hi - lo) * k as f64 / 200.0;
        if approx.is_certified_at(l) {
            let exact = solve_lp(&inst.lp, l)?.objective.unwrap();
            worst = worst.max((approx.interpolate(l).unwrap() - exact).abs());
        }
    }
    println!("worst interpolation error on certified λ: {worst:.2e} (guarantee {:.0e})", 2.0 * eps);
    Ok(())
}
