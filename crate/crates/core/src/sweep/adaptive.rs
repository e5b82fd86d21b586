//! Certified piecewise-linear approximation of `o*(λ)` over an interval.
//!
//! Breakpoints are exact basis objectives. An interval `[a, b]` is
//! certified when both endpoints are optimal for the same basis, the
//! forward radius at `a` and the backward radius at `b` cover it, and
//! `|o(b) − o(a)| ≤ ε`; the linear interpolant is then within `2ε` of
//! `o_B` everywhere in between. Uncovered intervals are bisected, and a
//! midpoint where no known basis is optimal triggers a fresh simplex solve
//! and a new cache anchored there.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::bounds::{certify, DeltaCertificate, Direction};
use crate::error::{Error, Result};
use crate::model::{Basis, ParametricLP};
use crate::simplex::{solve_lp_with, SimplexOptions, SolveStatus};
use crate::warmstart::{preprocess, EvalStatus, WarmstartCache, WarmstartOptions};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveLimits {
    pub max_points: usize,
    /// Defaults to `(λ_hi − λ_lo)·2⁻²⁰`.
    pub min_width: Option<f64>,
}

impl Default for AdaptiveLimits {
    fn default() -> Self {
        Self { max_points: 10_000, min_width: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Breakpoint {
    pub lambda: f64,
    pub objective: Option<f64>,
    pub status: PointStatus,
    pub basis: Option<Basis>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxInterval {
    pub lo: f64,
    pub hi: f64,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExcludedInterval {
    pub lo: f64,
    pub hi: f64,
    /// Where the basis matrix was found singular.
    pub singular_point: f64,
    pub basis: Basis,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReanchorEvent {
    pub lambda: f64,
    pub old_basis: Basis,
    pub new_basis: Basis,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiecewiseLinearApprox {
    pub epsilon: f64,
    pub breakpoints: Vec<Breakpoint>,
    /// Consecutive breakpoint pairs, in order.
    pub intervals: Vec<ApproxInterval>,
    pub excluded: Vec<ExcludedInterval>,
    pub reanchor_events: Vec<ReanchorEvent>,
    /// True when `max_points` stopped refinement.
    pub budget_exhausted: bool,
}

impl PiecewiseLinearApprox {
    pub fn all_certified(&self) -> bool {
        self.intervals.iter().all(|i| i.certified)
    }

    /// Linear interpolant at λ, when λ lies in an interval whose endpoints
    /// both carry an objective.
    pub fn interpolate(&self, lambda: f64) -> Option<f64> {
        let k = self.breakpoints.partition_point(|p| p.lambda < lambda);
        if k < self.breakpoints.len() && self.breakpoints[k].lambda == lambda {
            return self.breakpoints[k].objective;
        }
        if k == 0 || k == self.breakpoints.len() {
            return None;
        }
        let (a, b) = (&self.breakpoints[k - 1], &self.breakpoints[k]);
        let (oa, ob) = (a.objective?, b.objective?);
        let t = (lambda - a.lambda) / (b.lambda - a.lambda);
        Some(oa + t * (ob - oa))
    }

    /// Whether λ falls in a certified interval.
    pub fn is_certified_at(&self, lambda: f64) -> bool {
        self.intervals.iter().any(|i| i.certified && i.lo <= lambda && lambda <= i.hi)
    }
}

struct Point {
    lambda: f64,
    status: PointStatus,
    objective: Option<f64>,
    cache: Option<usize>,
    forward: Option<DeltaCertificate>,
    backward: Option<DeltaCertificate>,
}

/// Worklist entry; widest first, ties by lower endpoint.
struct Item {
    width: f64,
    a: usize,
    b: usize,
    lo: f64,
}

impl PartialEq for Item {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Item {}
impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        self.width.total_cmp(&other.width).then_with(|| other.lo.total_cmp(&self.lo))
    }
}

struct Builder<'a> {
    lp: ParametricLP,
    epsilon: f64,
    opts: &'a WarmstartOptions,
    simplex: SimplexOptions,
    caches: Vec<WarmstartCache>,
    points: Vec<Point>,
    excluded: Vec<ExcludedInterval>,
    events: Vec<ReanchorEvent>,
}

const REBASE_RATIO: f64 = 0.5;

fn exclusion_radius(lambda: f64) -> f64 {
    1e-6 * (1.0 + lambda.abs())
}

impl<'a> Builder<'a> {
    fn certificates(&self, cache: usize, lambda: f64) -> Result<(DeltaCertificate, DeltaCertificate)> {
        let c = &self.caches[cache];
        Ok((
            certify(c, lambda, self.epsilon, Direction::Forward)?,
            certify(c, lambda, self.epsilon, Direction::Backward)?,
        ))
    }

    /// Certificates degrade as `|λ − anchor|·‖E_B‖` approaches 1; past
    /// `REBASE_RATIO` the same basis is re-factored with its anchor at λ.
    fn optimal_point(&mut self, cache: usize, lambda: f64, objective: f64) -> Result<Point> {
        let c = &self.caches[cache];
        let cache = if (lambda - c.anchor()).abs() * c.norm_e() > REBASE_RATIO {
            let opts = WarmstartOptions { anchor: lambda, ..self.opts.clone() };
            let fresh = preprocess(&self.lp, c.basis(), &opts)?;
            self.caches.push(fresh);
            self.caches.len() - 1
        } else {
            cache
        };
        let (forward, backward) = self.certificates(cache, lambda)?;
        Ok(Point {
            lambda,
            status: PointStatus::Optimal,
            objective: Some(objective),
            cache: Some(cache),
            forward: Some(forward),
            backward: Some(backward),
        })
    }

    fn record_singular(&mut self, cache: usize, lambda: f64, lo: f64, hi: f64) {
        let r = exclusion_radius(lambda);
        self.excluded.push(ExcludedInterval {
            lo: (lambda - r).max(lo),
            hi: (lambda + r).min(hi),
            singular_point: lambda,
            basis: self.caches[cache].basis().clone(),
        });
    }

    /// Solves `P(λ)` from scratch (warm hint when given) and anchors a new
    /// cache at λ when it is optimal.
    fn resolve(&mut self, lambda: f64, hint: Option<&Basis>) -> Result<Point> {
        let res = solve_lp_with(&self.lp, lambda, &self.simplex, hint)?;
        let status = match res.status {
            SolveStatus::Optimal => PointStatus::Optimal,
            SolveStatus::Infeasible => PointStatus::Infeasible,
            SolveStatus::Unbounded => PointStatus::Unbounded,
        };
        let Some(basis) = res.basis.filter(|_| status == PointStatus::Optimal) else {
            return Ok(Point {
                lambda,
                status,
                objective: None,
                cache: None,
                forward: None,
                backward: None,
            });
        };
        let opts = WarmstartOptions { anchor: lambda, ..self.opts.clone() };
        let cache = preprocess(&self.lp, &basis, &opts)?;
        let objective = cache.eval_objective(lambda)?;
        if let Some(old) = hint.filter(|h| !h.same_set(&basis)) {
            self.events.push(ReanchorEvent { lambda, old_basis: old.clone(), new_basis: basis });
        }
        self.caches.push(cache);
        self.optimal_point(self.caches.len() - 1, lambda, objective)
    }

    /// Evaluates λ with the caches of the neighbouring breakpoints, then
    /// falls back to a re-solve.
    fn evaluate(&mut self, lambda: f64, neighbours: [Option<usize>; 2], lo: f64, hi: f64) -> Result<Point> {
        let mut tried: Vec<usize> = Vec::with_capacity(2);
        for c in neighbours.into_iter().flatten() {
            if tried.contains(&c) {
                continue;
            }
            tried.push(c);
            let r = self.caches[c].evaluate(lambda);
            match r.status {
                EvalStatus::Optimal => {
                    return self.optimal_point(c, lambda, r.objective.expect("optimal has objective"))
                }
                EvalStatus::Singular => self.record_singular(c, lambda, lo, hi),
                _ => {}
            }
        }
        let hint = tried.first().map(|&c| self.caches[c].basis().clone());
        self.resolve(lambda, hint.as_ref())
    }

    fn covered(&self, a: &Point, b: &Point) -> bool {
        let (Some(ca), Some(cb)) = (a.cache, b.cache) else {
            return false;
        };
        if !self.caches[ca].basis().same_set(self.caches[cb].basis()) {
            return false;
        }
        let (Some(fa), Some(bb)) = (&a.forward, &b.backward) else {
            return false;
        };
        let (Some(oa), Some(ob)) = (a.objective, b.objective) else {
            return false;
        };
        let inside = |p: &f64| a.lambda < *p && *p < b.lambda;
        fa.delta_max + bb.delta_max >= b.lambda - a.lambda
            && (ob - oa).abs() <= self.epsilon
            && !fa.excluded.iter().chain(&bb.excluded).any(inside)
            && !self.excluded.iter().any(|e| e.lo < b.lambda && a.lambda < e.hi)
    }
}

/// [`adaptive_approx_with`] with default simplex options.
pub fn adaptive_approx(
    lp: &ParametricLP,
    range: (f64, f64),
    epsilon: f64,
    limits: AdaptiveLimits,
    opts: &WarmstartOptions,
) -> Result<PiecewiseLinearApprox> {
    adaptive_approx_with(lp, range, epsilon, limits, opts, &SimplexOptions::default())
}

pub fn adaptive_approx_with(
    lp: &ParametricLP,
    range: (f64, f64),
    epsilon: f64,
    limits: AdaptiveLimits,
    opts: &WarmstartOptions,
    simplex: &SimplexOptions,
) -> Result<PiecewiseLinearApprox> {
    let (lo, hi) = range;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::InvalidArgument(format!("bad range [{lo}, {hi}]")));
    }
    if !(epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
    }
    let min_width = limits.min_width.unwrap_or((hi - lo) * 2f64.powi(-20));
    let mut bld = Builder {
        lp: lp.to_standard_form(),
        epsilon,
        opts,
        simplex: simplex.clone(),
        caches: Vec::new(),
        points: Vec::new(),
        excluded: Vec::new(),
        events: Vec::new(),
    };

    let first = bld.resolve(lo, None)?;
    if first.status != PointStatus::Optimal {
        let status = match first.status {
            PointStatus::Infeasible => SolveStatus::Infeasible,
            _ => SolveStatus::Unbounded,
        };
        return Err(Error::BaseProblem { lambda: lo, status });
    }
    bld.points.push(first);

    let mut intervals: Vec<(usize, usize, bool)> = Vec::new();
    let mut budget_exhausted = false;
    if hi > lo {
        let last = bld.evaluate(hi, [bld.points[0].cache, None], lo, hi)?;
        bld.points.push(last);
        let mut work = BinaryHeap::new();
        work.push(Item { width: hi - lo, a: 0, b: 1, lo });
        while let Some(item) = work.pop() {
            let (pa, pb) = (&bld.points[item.a], &bld.points[item.b]);
            if bld.covered(pa, pb) {
                intervals.push((item.a, item.b, true));
                continue;
            }
            let mid = 0.5 * (pa.lambda + pb.lambda);
            let neither_optimal =
                pa.status != PointStatus::Optimal && pb.status != PointStatus::Optimal;
            if neither_optimal || item.width <= min_width || mid <= pa.lambda || mid >= pb.lambda {
                intervals.push((item.a, item.b, false));
                continue;
            }
            if bld.points.len() >= limits.max_points {
                budget_exhausted = true;
                intervals.push((item.a, item.b, false));
                continue;
            }
            let neighbours = [pa.cache, pb.cache];
            let (a_l, b_l) = (pa.lambda, pb.lambda);
            let p = bld.evaluate(mid, neighbours, a_l, b_l)?;
            bld.points.push(p);
            let m = bld.points.len() - 1;
            work.push(Item { width: mid - a_l, a: item.a, b: m, lo: a_l });
            work.push(Item { width: b_l - mid, a: m, b: item.b, lo: mid });
        }
    } else {
        intervals.push((0, 0, true));
    }

    let mut order: Vec<usize> = (0..bld.points.len()).collect();
    order.sort_by(|&i, &j| bld.points[i].lambda.total_cmp(&bld.points[j].lambda));
    let breakpoints = order
        .iter()
        .map(|&i| {
            let p = &bld.points[i];
            Breakpoint {
                lambda: p.lambda,
                objective: p.objective,
                status: p.status,
                basis: p.cache.map(|c| bld.caches[c].basis().clone()),
            }
        })
        .collect();
    let mut intervals: Vec<ApproxInterval> = intervals
        .into_iter()
        .map(|(a, b, certified)| ApproxInterval {
            lo: bld.points[a].lambda,
            hi: bld.points[b].lambda,
            certified,
        })
        .collect();
    intervals.sort_by(|x, y| x.lo.total_cmp(&y.lo));
    bld.excluded.sort_by(|x, y| x.singular_point.total_cmp(&y.singular_point));
    bld.events.sort_by(|x, y| x.lambda.total_cmp(&y.lambda));

    Ok(PiecewiseLinearApprox {
        epsilon,
        breakpoints,
        intervals,
        excluded: bld.excluded,
        reanchor_events: bld.events,
        budget_exhausted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn p1() -> ParametricLP {
        ParametricLP::standard(
            vec![1.0],
            DMatrix::from_element(1, 1, 2.0),
            DMatrix::from_element(1, 1, 1.0),
            vec![4.0],
        )
        .unwrap()
    }

    fn p4() -> ParametricLP {
        ParametricLP::standard(
            vec![1.0, 3.0],
            DMatrix::from_row_slice(1, 2, &[1.0, 1.0]),
            DMatrix::from_row_slice(1, 2, &[0.0, 1.0]),
            vec![2.0],
        )
        .unwrap()
    }

    #[test]
    fn scalar_problem_is_fully_certified() {
        let a = adaptive_approx(&p1(), (0.0, 1.0), 0.5, AdaptiveLimits::default(),
            &WarmstartOptions::default())
        .unwrap();
        assert!(a.all_certified(), "{a:?}");
        assert_eq!(a.breakpoints[0].lambda, 0.0);
        assert_eq!(a.breakpoints.last().unwrap().lambda, 1.0);
        assert!(a.breakpoints.iter().all(|p| p.status == PointStatus::Optimal));
        assert!(a.reanchor_events.is_empty() && a.excluded.is_empty());
        for k in 0..=100 {
            let l = k as f64 / 100.0;
            let exact = 4.0 / (2.0 + l);
            assert!((a.interpolate(l).unwrap() - exact).abs() <= 1.0 + 1e-12);
        }
        for w in a.breakpoints.windows(2) {
            assert!(w[0].lambda < w[1].lambda);
        }
    }

    #[test]
    fn crossing_triggers_reanchor() {
        let a = adaptive_approx(&p4(), (0.0, 3.0), 1e3, AdaptiveLimits::default(),
            &WarmstartOptions::default())
        .unwrap();
        assert!(!a.reanchor_events.is_empty());
        let e = &a.reanchor_events[0];
        assert!(e.lambda > 2.0 && e.lambda <= 3.0, "{e:?}");
        assert_eq!(e.old_basis.indices(), &[0]);
        assert_eq!(e.new_basis.indices(), &[1]);
        assert!(!a.budget_exhausted);
        for k in 0..=300 {
            let l = k as f64 / 100.0;
            if a.is_certified_at(l) {
                let exact = if l <= 2.0 { 2.0 } else { 6.0 / (1.0 + l) };
                assert!((a.interpolate(l).unwrap() - exact).abs() <= 2e3, "{l}");
            }
        }
    }

    #[test]
    fn degenerate_range() {
        let a = adaptive_approx(&p1(), (0.5, 0.5), 0.1, AdaptiveLimits::default(),
            &WarmstartOptions::default())
        .unwrap();
        assert_eq!(a.breakpoints.len(), 1);
        assert_eq!(a.intervals, vec![ApproxInterval { lo: 0.5, hi: 0.5, certified: true }]);
        assert!((a.breakpoints[0].objective.unwrap() - 1.6).abs() < 1e-15);
    }

    #[test]
    fn budget_is_respected() {
        let limits = AdaptiveLimits { max_points: 5, min_width: None };
        let a = adaptive_approx(&p1(), (0.0, 1.0), 1e-6, limits, &WarmstartOptions::default())
            .unwrap();
        assert!(a.breakpoints.len() <= 5);
        assert!(a.budget_exhausted);
        assert!(!a.all_certified());
    }

    #[test]
    fn rejects_bad_arguments() {
        let o = WarmstartOptions::default();
        assert!(adaptive_approx(&p1(), (1.0, 0.0), 0.1, AdaptiveLimits::default(), &o).is_err());
        assert!(adaptive_approx(&p1(), (0.0, 1.0), 0.0, AdaptiveLimits::default(), &o).is_err());
    }
}
