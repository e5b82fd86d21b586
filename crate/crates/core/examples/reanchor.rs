//! A cache anchored at λ₀ factors A + λ₀D instead of A. Both agree, but the
//! anchored one certifies larger steps near λ₀.
//!
//!     cargo run --example reanchor

use parawarm::bounds::{certify, Direction};
use parawarm::generate::optimal_instance;
use parawarm::simplex::solve_lp;
use parawarm::warmstart::{preprocess, WarmstartOptions};

fn main() -> parawarm::Result<()> {
    let inst = optimal_instance(15, 30, 0.05, 4);
    let lambda = 0.4;
    let basis = solve_lp(&inst.lp, lambda)?.basis.expect("optimal");
    let at_zero = preprocess(&inst.lp, &basis, &WarmstartOptions::default())?;
    let anchored =
        preprocess(&inst.lp, &basis, &WarmstartOptions { anchor: lambda, ..Default::default() })?;
    for (name, c) in [("anchor 0", &at_zero), ("anchor λ", &anchored)] {
        let cert = certify(c, lambda, 1e-2, Direction::Forward)?;
        println!(
            "{name}: o(λ)={:.12} ‖E‖={:.3} Δ={:.4} ({:?})",
            c.eval_objective(lambda)?,
            c.norm_e(),
            cert.delta_max,
            cert.binding_term
        );
    }
    Ok(())
}
