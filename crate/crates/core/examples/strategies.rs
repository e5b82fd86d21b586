//! Eigen, Schur and tweaked preprocessing on a diagonalizable basis and on
//! one whose E_B is a Jordan block.
//!
//!     cargo run --example strategies

use parawarm::generate::{jordan_instance, uniform_instance, Instance};
use parawarm::linalg::DenseLu;
use parawarm::model::partition;
use parawarm::warmstart::{preprocess, Strategy, WarmstartOptions};

fn dense(inst: &Instance, lambda: f64) -> Vec<f64> {
    let p = partition(&inst.lp, &inst.basis).unwrap();
    DenseLu::factor(&(&p.a_b + &p.d_b * lambda)).unwrap().solve(inst.lp.b())
}

fn report(name: &str, inst: &Instance) {
    println!("{name}");
    for s in [Strategy::Eigen, Strategy::Schur, Strategy::Tweaked, Strategy::Auto] {
        match preprocess(&inst.lp, &inst.basis, &WarmstartOptions::with_strategy(s)) {
            Ok(c) => {
                let err = [-0.7, 0.1, 0.9]
                    .iter()
                    .map(|&l| {
                        let x = c.eval_solution(l).unwrap();
                        x.iter().zip(dense(inst, l)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
                    })
                    .fold(0.0, f64::max);
                println!("  {s:<8} -> {:<8} max error vs LU {err:.1e}", c.strategy().to_string());
            }
            Err(e) => println!("  {s:<8} -> {e}"),
        }
    }
}

fn main() {
    report("random basis", &uniform_instance(8, 16, 3));
    report("Jordan basis", &jordan_instance(6, 12, 3));
}
