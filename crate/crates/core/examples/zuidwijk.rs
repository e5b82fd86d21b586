//! Objective via the eigenvalue product formula, next to the warmstart
//! evaluation.
//!
//!     cargo run --example zuidwijk

use parawarm::generate::uniform_instance;
use parawarm::model::partition;
use parawarm::warmstart::{preprocess, zuidwijk_objective, zuidwijk_preprocess, WarmstartOptions};

fn main() -> parawarm::Result<()> {
    let inst = uniform_instance(12, 24, 9);
    let z = zuidwijk_preprocess(&partition(&inst.lp, &inst.basis)?, inst.lp.b())?;
    let cache = preprocess(&inst.lp, &inst.basis, &WarmstartOptions::default())?;
    println!("{:>8} {:>22} {:>22}", "λ", "product formula", "warmstart");
    for lambda in [0.0, 1e-13, 1e-6, 0.05, 0.2, -0.3] {
        let a = zuidwijk_objective(&z, lambda);
        let b = cache.eval_objective(lambda);
        println!("{lambda:>8.0e} {:>22?} {:>22?}", a.ok(), b.ok());
    }
    Ok(())
}
