//! Step radii around λ: how far the basis provably stays feasible with the
//! objective moving by at most ε.
//!
//!     cargo run --example bounds

use nalgebra::DMatrix;
use parawarm::bounds::{
    certify, deviation_bound, feasibility_conditions, BoundInputs, Direction,
};
use parawarm::generate::optimal_instance;
use parawarm::model::{Basis, ParametricLP};
use parawarm::warmstart::{preprocess, WarmstartOptions};

fn main() -> parawarm::Result<()> {
    // min x  s.t. (2 + λ)x = 4
    let lp = ParametricLP::standard(
        vec![1.0],
        DMatrix::from_element(1, 1, 2.0),
        DMatrix::from_element(1, 1, 1.0),
        vec![4.0],
    )?;
    let cache = preprocess(&lp, &Basis::new(vec![0], 1)?, &WarmstartOptions::default())?;
    let inputs = BoundInputs::from_cache(&cache, 0.0)?;
    for delta in [0.5, 1.0, 1.9, 2.0] {
        println!(
            "δ={delta}: deviation bound {:?}, feasibility certified {}, true change {:.4}",
            deviation_bound(&inputs, delta),
            feasibility_conditions(&cache, &inputs, delta),
            4.0 / (2.0 + delta) - 2.0,
        );
    }
    for eps in [0.5, 1e6] {
        let c = certify(&cache, 0.0, eps, Direction::Forward)?;
        println!("ε={eps:e}: Δ={} ({:?})", c.delta_max, c.binding_term);
    }

    let inst = optimal_instance(20, 40, 0.05, 5);
    let cache = preprocess(&inst.lp, &inst.basis, &WarmstartOptions::default())?;
    let o0 = cache.eval_objective(0.0)?;
    for eps in [1e-3, 1e-2, 1e-1] {
        let f = certify(&cache, 0.0, eps, Direction::Forward)?;
        let b = certify(&cache, 0.0, eps, Direction::Backward)?;
        let worst = (0..=50)
            .map(|k| f.delta_max * k as f64 / 50.0)
            .map(|d| (cache.eval_objective(d).unwrap() - o0).abs())
            .fold(0.0, f64::max);
        println!("ε={eps}: interval {:?}..{:?}, worst observed change {worst:.2e}",
            b.interval().0, f.interval().1);
    }
    Ok(())
}
