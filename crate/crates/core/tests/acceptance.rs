//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each
//! and exits non-zero if any fails.

use std::process::Command;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use parawarm::bounds::{max_delta, BoundInputs, Direction};
use parawarm::decomposition::eigen_decompose;
use parawarm::generate::{jordan_instance, optimal_instance, uniform_instance, Instance};
use parawarm::model::{partition, Basis, ParametricLP};
use parawarm::simplex::{solve_lp, solve_lp_with, SimplexOptions};
use parawarm::sweep::{adaptive_approx, median, sweep_with_threads, AdaptiveLimits};
use parawarm::warmstart::{
    preprocess, preprocess_calls, zuidwijk_objective, zuidwijk_preprocess, EvalStatus, Strategy,
    WarmstartOptions,
};
use parawarm::Error;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// Independent dense solve of `(A_B + λD_B) x = b` through nalgebra's LU.
fn lu_oracle(inst: &Instance, lambda: f64) -> Option<Vec<f64>> {
    let p = partition(&inst.lp, &inst.basis).ok()?;
    let mat = &p.a_b + &p.d_b * lambda;
    mat.lu().solve(&DVector::from_column_slice(inst.lp.b())).map(|x| x.as_slice().to_vec())
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, x| a.max(x.abs()))
}

fn diff_inf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |acc, (x, y)| acc.max((x - y).abs()))
}

fn random_suite() -> Vec<Instance> {
    (0..50).map(|k| {
        let m = [5, 10, 20][k % 3];
        uniform_instance(m, 2 * m, 1000 + k as u64)
    }).collect()
}

fn suite_lambdas(rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..50).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst_x, mut worst_o, mut checks, mut defective) = (0.0f64, 0.0f64, 0usize, 0usize);
    for inst in random_suite() {
        let lambdas = suite_lambdas(&mut rng);
        for s in [Strategy::Eigen, Strategy::Schur, Strategy::Tweaked] {
            let cache = match preprocess(&inst.lp, &inst.basis, &WarmstartOptions::with_strategy(s)) {
                Ok(c) => c,
                Err(Error::Defective { .. }) if s == Strategy::Eigen => {
                    defective += 1;
                    continue;
                }
                Err(e) => return outcome(false, format!("{s} preprocess failed: {e}")),
            };
            let c_b = &partition(&inst.lp, &inst.basis).unwrap().c_b;
            for &l in &lambdas {
                if !cache.check_existence(l) {
                    continue;
                }
                let Some(x_ref) = lu_oracle(&inst, l) else { continue };
                let x = cache.eval_solution(l).unwrap();
                worst_x = worst_x.max(diff_inf(&x, &x_ref) / inf_norm(&x_ref).max(1e-300));
                let o_ref: f64 = c_b.iter().zip(&x_ref).map(|(c, v)| c * v).sum();
                let o = cache.eval_objective(l).unwrap();
                worst_o = worst_o.max((o - o_ref).abs() / (1.0 + o_ref.abs()));
                checks += 1;
            }
        }
    }
    let secs = t.elapsed().as_secs_f64();
    outcome(
        worst_x <= 1e-8 && worst_o <= 1e-8 && secs < 60.0 && checks > 0,
        format!("{checks} checks, max rel x err {worst_x:.1e}, max objective err {worst_o:.1e}, \
            {defective} eigen-defective skips, {secs:.1}s"),
    )
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst, mut checks) = (0.0f64, 0usize);
    for inst in random_suite() {
        let mut lambdas = suite_lambdas(&mut rng);
        lambdas.extend([0.0, 1e-14, -1e-13]);
        let cache = preprocess(&inst.lp, &inst.basis, &WarmstartOptions::default()).unwrap();
        let z = zuidwijk_preprocess(&partition(&inst.lp, &inst.basis).unwrap(), inst.lp.b()).unwrap();
        for l in lambdas {
            let (Ok(o), Ok(zo)) = (cache.eval_objective(l), zuidwijk_objective(&z, l)) else {
                continue;
            };
            worst = worst.max((zo - o).abs() / (1.0 + o.abs()));
            checks += 1;
        }
    }
    outcome(worst <= 1e-6, format!("{checks} checks incl. λ→0 limit, max scaled gap {worst:.1e}"))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut worst_s, mut worst_t, mut raised) = (0.0f64, 0.0f64, 0usize);
    for k in 0..20 {
        let m = 4 + k % 5;
        let inst = jordan_instance(m, 2 * m, 300 + k as u64);
        let e_b = partition(&inst.lp, &inst.basis).unwrap().d_b;
        if matches!(eigen_decompose(&e_b), Err(Error::Defective { .. })) {
            raised += 1;
        }
        let schur = preprocess(&inst.lp, &inst.basis, &WarmstartOptions::with_strategy(Strategy::Schur)).unwrap();
        let tweak = preprocess(&inst.lp, &inst.basis, &WarmstartOptions::with_strategy(Strategy::Tweaked)).unwrap();
        for _ in 0..20 {
            let l: f64 = rng.random_range(-2.0..2.0);
            let x_ref = lu_oracle(&inst, l).unwrap();
            let scale = 1.0 + inf_norm(&x_ref);
            worst_s = worst_s.max(diff_inf(&schur.eval_solution(l).unwrap(), &x_ref) / scale);
            worst_t = worst_t.max(diff_inf(&tweak.eval_solution(l).unwrap(), &x_ref) / scale);
        }
    }
    outcome(
        raised == 20 && worst_s <= 1e-8 && worst_t <= 1e-6,
        format!("defective raised {raised}/20, schur err {worst_s:.1e}, tweaked err {worst_t:.1e}"),
    )
}

fn criterion_4() -> Outcome {
    let (mut at_pole, mut poles, mut off, mut off_checks) = (0usize, 0usize, 0usize, 0usize);
    for inst in random_suite() {
        let cache = preprocess(&inst.lp, &inst.basis, &WarmstartOptions::default()).unwrap();
        // eigenvalues from nalgebra, independent of the cache
        let oracle = cache.e_b().complex_eigenvalues();
        let singular: Vec<f64> = oracle
            .iter()
            .filter(|v| v.im.abs() <= 1e-9 * (1.0 + v.norm()) && v.re.abs() > 1e-9)
            .map(|v| -1.0 / v.re)
            .collect();
        for (i, &p) in singular.iter().enumerate() {
            poles += 1;
            if !cache.check_existence(p) {
                at_pole += 1;
            }
            let nu = -1.0 / p;
            let gap = 0.01 * (1.0 + 1.0 / nu.abs());
            let isolated = singular.iter().enumerate().all(|(j, &q)| j == i || (q - p).abs() > 2.0 * gap);
            if isolated {
                for q in [p - gap, p + gap] {
                    off_checks += 1;
                    if cache.check_existence(q) {
                        off += 1;
                    }
                }
            }
        }
    }
    outcome(
        poles > 0 && at_pole == poles && off == off_checks,
        format!("singular at {at_pole}/{poles} poles, existent at {off}/{off_checks} offsets"),
    )
}

/// `min x0 + γx1  s.t.  x0 + (1 + δλ)x1 = β`; basis {0} stops being optimal
/// at λ* = (γ − 1)/δ.
fn crossing_family(rng: &mut ChaCha8Rng) -> (ParametricLP, f64) {
    let gamma = rng.random_range(1.5..4.0);
    let delta = rng.random_range(0.5..2.0);
    let beta = rng.random_range(0.5..3.0);
    let lp = ParametricLP::standard(
        vec![1.0, gamma],
        DMatrix::from_row_slice(1, 2, &[1.0, 1.0]),
        DMatrix::from_row_slice(1, 2, &[0.0, delta]),
        vec![beta],
    )
    .unwrap();
    (lp, (gamma - 1.0) / delta)
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut iff_bad, mut upper_bad, mut checks) = (0usize, 0usize, 0usize);
    let mut check = |cache: &parawarm::warmstart::WarmstartCache, lp: &ParametricLP, l: f64, iff: bool| {
        let r = cache.evaluate(l);
        let Ok(s) = solve_lp(lp, l) else { return };
        let Some(o_star) = s.objective else { return };
        checks += 1;
        if let Some(o) = r.objective {
            let same = (o - o_star).abs() <= 1e-7;
            if iff && (r.status == EvalStatus::Optimal) != same {
                iff_bad += 1;
            }
            let bounded = matches!(r.status, EvalStatus::Optimal | EvalStatus::FeasibleSuboptimal);
            if bounded && o < o_star - 1e-9 * (1.0 + o_star.abs()) {
                upper_bad += 1;
            }
        }
    };
    for _ in 0..20 {
        let (lp, cross) = crossing_family(&mut rng);
        let cache = preprocess(&lp, &Basis::new(vec![0], 2).unwrap(), &WarmstartOptions::default()).unwrap();
        for k in 0..50 {
            let l = cross * (k as f64 / 25.0);
            if (l - cross).abs() < 1e-3 {
                continue;
            }
            check(&cache, &lp, l, true);
        }
    }
    for seed in 0..10 {
        let inst = optimal_instance(8, 16, 0.2, 500 + seed);
        let cache = preprocess(&inst.lp, &inst.basis, &WarmstartOptions::default()).unwrap();
        for k in 0..20 {
            check(&cache, &inst.lp, -0.5 + k as f64 / 20.0, false);
        }
    }
    outcome(
        iff_bad == 0 && upper_bad == 0,
        format!("{checks} comparisons, {iff_bad} status/objective mismatches, {upper_bad} upper-bound violations"),
    )
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut triples, mut violations, mut nonzero, mut samples) = (0usize, 0usize, 0usize, 0usize);
    let mut seed = 600u64;
    while triples < 100 {
        seed += 1;
        let m = [4, 8, 12][triples % 3];
        let inst = optimal_instance(m, 2 * m, 0.05, seed);
        let cache = preprocess(&inst.lp, &inst.basis, &WarmstartOptions::default()).unwrap();
        let l = rng.random_range(-0.05..0.05);
        if cache.evaluate(l).status != EvalStatus::Optimal {
            continue;
        }
        triples += 1;
        let eps = 10f64.powf(rng.random_range(-4.0..0.0));
        let dir = if rng.random_bool(0.5) { Direction::Forward } else { Direction::Backward };
        let inputs = BoundInputs::from_cache(&cache, l).unwrap();
        let cert = max_delta(&cache, &inputs, eps, dir);
        if cert.delta_max > 0.0 {
            nonzero += 1;
        }
        let o = cache.eval_objective(l).unwrap();
        let radius = |p: f64| 1e-6 * (1.0 + p.abs());
        for _ in 0..100 {
            let d = dir.sign() * rng.random_range(0.0..=1.0) * cert.delta_max;
            if cert.excluded.iter().any(|&p| (l + d - p).abs() <= radius(p)) {
                continue;
            }
            samples += 1;
            let r = cache.evaluate_with(l + d, false);
            let bad = match r.objective {
                Some(od) => r.status == EvalStatus::InfeasibleBasis || (od - o).abs() > eps + 1e-9,
                None => true,
            };
            if bad {
                violations += 1;
            }
        }
    }
    outcome(
        violations == 0 && nonzero > 0,
        format!("{triples} triples ({nonzero} with Δ>0), {samples} samples, {violations} violations"),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut worst, mut checks, mut k) = (0.0f64, 0usize, 0u64);
    while checks < 200 {
        k += 1;
        let m = [5, 10, 20][k as usize % 3];
        let inst = uniform_instance(m, 2 * m, 700 + k);
        let cache = preprocess(&inst.lp, &inst.basis, &WarmstartOptions::default()).unwrap();
        let l = rng.random_range(-0.5..0.5);
        let d = rng.random_range(-0.5..0.5);
        if !cache.check_existence(l) || !cache.check_existence(l + d) {
            continue;
        }
        let shift = cache.solution_shift(l, d).unwrap();
        let x0 = cache.eval_solution(l).unwrap();
        let x1 = cache.eval_solution(l + d).unwrap();
        let diff: Vec<f64> = x1.iter().zip(&x0).map(|(a, b)| a - b).collect();
        let scale = 1.0 + inf_norm(&x0).max(inf_norm(&x1));
        worst = worst.max(diff_inf(&shift, &diff) / scale);
        checks += 1;
    }
    outcome(worst <= 1e-9, format!("{checks} triples, max scaled gap {worst:.1e}"))
}

fn criterion_8() -> Outcome {
    let t = Instant::now();
    let lambdas: Vec<f64> = (0..200).map(|k| 1e-4 * k as f64).collect();
    let mut medians = Vec::new();
    let mut preprocess_once = true;
    let mut speedups = Vec::new();
    for m in [100usize, 200, 400] {
        let inst = optimal_instance(m, 2 * m, 0.01, 8);
        let mut run_medians = Vec::new();
        for _ in 0..3 {
            let before = preprocess_calls();
            let t0 = Instant::now();
            let cache = preprocess(&inst.lp, &inst.basis, &WarmstartOptions::default()).unwrap();
            let pre = t0.elapsed().as_secs_f64();
            let report = sweep_with_threads(&cache, &lambdas, Some(1));
            preprocess_once &= preprocess_calls() - before == 1;
            run_medians.push(median(&report.timings.per_lambda_seconds));
            if m == 200 {
                let warm = pre + report.timings.per_lambda_seconds.iter().sum::<f64>();
                // naive re-solve on every 20th λ, extrapolated to all 200
                let t1 = Instant::now();
                for l in lambdas.iter().step_by(20) {
                    solve_lp_with(&inst.lp, *l, &SimplexOptions::default(), None).unwrap();
                }
                let naive = t1.elapsed().as_secs_f64() * 20.0;
                speedups.push(naive / warm);
            }
        }
        medians.push(median(&run_medians));
    }
    let r1 = medians[1] / medians[0];
    let r2 = medians[2] / medians[1];
    let speedup = median(&speedups);
    outcome(
        r1 <= 5.5 && r2 <= 5.5 && preprocess_once && speedup >= 3.0,
        format!("per-λ medians {:.2e}/{:.2e}/{:.2e}s, ratios {r1:.2}, {r2:.2}; preprocess once: \
            {preprocess_once}; speedup at m=200 {speedup:.0}x; {:.0}s",
            medians[0], medians[1], medians[2], t.elapsed().as_secs_f64()),
    )
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let eps = 0.05;
    let (lo, hi) = (0.0, 1.0);
    let (mut instances, mut within, mut samples, mut worst) = (0usize, true, 0usize, 0.0f64);
    let (mut excluded, mut excluded_ok, mut changes) = (0usize, 0usize, 0usize);
    let mut seed = 900u64;
    while instances < 10 {
        seed += 1;
        let inst = optimal_instance(8, 16, 0.2, seed);
        let (Some(b0), Some(b1)) = (solve_lp(&inst.lp, lo).unwrap().basis, solve_lp(&inst.lp, hi).unwrap().basis) else {
            continue;
        };
        if b0.same_set(&b1) {
            continue;
        }
        instances += 1;
        let a = adaptive_approx(&inst.lp, (lo, hi), eps, AdaptiveLimits::default(), &WarmstartOptions::default()).unwrap();
        within &= !a.budget_exhausted && a.breakpoints.len() <= 10_000;
        changes += a.reanchor_events.len();
        let certified: Vec<_> = a.intervals.iter().filter(|i| i.certified && i.hi > i.lo).collect();
        let total: f64 = certified.iter().map(|i| i.hi - i.lo).sum();
        for _ in 0..100 {
            // uniform over the union of certified intervals
            let mut u = rng.random_range(0.0..total);
            let iv = certified.iter().find(|i| {
                let w = i.hi - i.lo;
                if u <= w { true } else { u -= w; false }
            }).unwrap_or(certified.last().unwrap());
            let l = (iv.lo + u).min(iv.hi);
            let o_star = solve_lp(&inst.lp, l).unwrap().objective.unwrap();
            let err = (a.interpolate(l).unwrap() - o_star).abs();
            worst = worst.max(err);
            samples += 1;
        }
        for e in &a.excluded {
            excluded += 1;
            let c = preprocess(&inst.lp, &e.basis, &WarmstartOptions::default()).unwrap();
            if !c.check_existence(e.singular_point) && e.lo <= e.singular_point && e.singular_point <= e.hi {
                excluded_ok += 1;
            }
        }
    }
    outcome(
        within && worst <= 2.0 * eps + 1e-8 && excluded_ok == excluded,
        format!("{instances} instances, {changes} re-anchors, {samples} samples, max error {worst:.2e} \
            (limit {:.2}), excluded {excluded_ok}/{excluded} verified", 2.0 * eps),
    )
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("inst.json");
    std::fs::write(&file, optimal_instance(12, 24, 0.1, 10).lp.to_json()).unwrap();
    let jordan = dir.path().join("jordan.json");
    std::fs::write(&jordan, jordan_instance(6, 12, 10).lp.to_json()).unwrap();
    let f = file.to_str().unwrap();
    let j = jordan.to_str().unwrap();
    let runs: Vec<Vec<&str>> = vec![
        vec!["sweep", f, "--lambda", "-0.2:0.2:41"],
        vec!["sweep", f, "--lambda", "-0.2:0.2:41", "--strategy", "tweaked", "--seed", "17", "--format", "json"],
        vec!["sweep", j, "--lambda", "-1:1:21", "--strategy", "tweaked", "--seed", "3"],
        vec!["sweep", j, "--lambda", "-1:1:21", "--strategy", "schur"],
        vec!["bound", f, "--lambda", "0.01", "--eps", "0.01"],
        vec!["approx", f, "--range", "0:0.3", "--eps", "0.05"],
        vec!["solve", f, "--lambda", "0.1"],
    ];
    let exe = env!("CARGO_BIN_EXE_parawarm");
    let mut identical = 0;
    for (k, args) in runs.iter().enumerate() {
        let outputs: Vec<Vec<u8>> = ["1", "1", "3"]
            .iter()
            .enumerate()
            .map(|(r, threads)| {
                let out = dir.path().join(format!("out{k}_{r}"));
                let status = Command::new(exe)
                    .args(args)
                    .arg("--output")
                    .arg(&out)
                    .env("PARAWARM_THREADS", threads)
                    .status()
                    .unwrap();
                assert!(status.success(), "{args:?}");
                std::fs::read(&out).unwrap()
            })
            .collect();
        if outputs.windows(2).all(|w| w[0] == w[1]) && !outputs[0].is_empty() {
            identical += 1;
        }
    }
    outcome(identical == runs.len(), format!("{identical}/{} commands byte-identical over 3 runs", runs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("oracle equivalence", criterion_1),
        ("product-formula cross-check", criterion_2),
        ("defective-matrix parity", criterion_3),
        ("existence boundary", criterion_4),
        ("optimality pipeline vs re-solve", criterion_5),
        ("bound soundness", criterion_6),
        ("solution-shift identity", criterion_7),
        ("scaling trend", criterion_8),
        ("adaptive approximation", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!("criterion {:>2} {name}: {} ({})", k + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {}/{} passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
