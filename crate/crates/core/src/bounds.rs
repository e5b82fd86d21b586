//! Perturbation bounds around a feasible basis.
//!
//! All norms are the induced ∞-norm, so `‖e_iᵀ‖ = 1` and `‖c_Bᵀ‖ = Σ|c_B,i|`.
//! Quantities are measured relative to the cache anchor: a cache anchored at
//! `λ₀` certifies steps from `λ` using `μ = λ − λ₀`.

use serde::Serialize;

use crate::error::Result;
use crate::linalg::vec_norm_inf;
use crate::warmstart::WarmstartCache;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundInputs {
    pub norm_e: f64,
    pub norm_cb: f64,
    pub x_lambda: Vec<f64>,
    pub norm_ex: f64,
    pub lambda: f64,
    /// `λ − anchor`.
    pub mu: f64,
}

impl BoundInputs {
    pub fn from_cache(cache: &WarmstartCache, lambda: f64) -> Result<Self> {
        let x = cache.eval_solution(lambda)?;
        let ex = cache.e_times(&x);
        Ok(Self {
            norm_e: cache.norm_e(),
            norm_cb: cache.norm_cb(),
            norm_ex: vec_norm_inf(&ex),
            x_lambda: x,
            lambda,
            mu: lambda - cache.anchor(),
        })
    }

    /// `1 − |μ+δ|‖E_B‖`; positive exactly when the Neumann argument applies.
    fn margin(&self, delta: f64) -> f64 {
        1.0 - (self.mu + delta).abs() * self.norm_e
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(into = "i8")]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        }
    }
}

impl From<Direction> for i8 {
    fn from(d: Direction) -> i8 {
        d.sign() as i8
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum Deviation {
    Bounded(f64),
    /// `|λ+δ|‖E_B‖ ≥ 1`.
    Inapplicable,
}

impl Deviation {
    pub fn value(self) -> Option<f64> {
        match self {
            Deviation::Bounded(v) => Some(v),
            Deviation::Inapplicable => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BindingTerm {
    Norm,
    Epsilon,
    Component,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaCertificate {
    pub lambda: f64,
    /// Radius; `+∞` (serialized as `null`) when nothing constrains the step.
    pub delta_max: f64,
    pub epsilon: f64,
    pub binding_term: BindingTerm,
    pub direction: Direction,
    pub norm_term: f64,
    pub epsilon_term: f64,
    pub component_term: f64,
    /// Singular parameter values `−1/ν` inside the certified interval.
    pub excluded: Vec<f64>,
}

impl DeltaCertificate {
    /// The covered interval `[lo, hi]`.
    pub fn interval(&self) -> (f64, f64) {
        let far = self.lambda + self.direction.sign() * self.delta_max;
        (self.lambda.min(far), self.lambda.max(far))
    }
}

/// `x_B(λ+δ) − x_B(λ)`.
pub fn solution_shift(cache: &WarmstartCache, lambda: f64, delta: f64) -> Result<Vec<f64>> {
    cache.solution_shift(lambda, delta)
}

/// `|δ| ‖c_Bᵀ‖ ‖E_B x_B(λ)‖ / (1 − |λ+δ| ‖E_B‖)`.
pub fn deviation_bound(inputs: &BoundInputs, delta: f64) -> Deviation {
    let margin = inputs.margin(delta);
    if margin <= 0.0 {
        return Deviation::Inapplicable;
    }
    if delta == 0.0 {
        return Deviation::Bounded(0.0);
    }
    Deviation::Bounded(delta.abs() * inputs.norm_cb * inputs.norm_ex / margin)
}

/// Sufficient conditions for `B` to stay feasible at `λ+δ`.
pub fn feasibility_conditions(cache: &WarmstartCache, inputs: &BoundInputs, delta: f64) -> bool {
    let margin = inputs.margin(delta);
    if margin <= 0.0 || !cache.check_existence(inputs.lambda + delta) {
        return false;
    }
    let lhs = delta.abs() * inputs.norm_ex / margin;
    inputs.x_lambda.iter().all(|&x| lhs <= x)
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        f64::INFINITY
    } else {
        num / den
    }
}

/// Largest `Δ` such that every step `δ ∈ [0, Δ]` in `direction` (outside the
/// excluded points) keeps `B` feasible and moves `o_B` by at most `ε`.
pub fn max_delta(
    cache: &WarmstartCache,
    inputs: &BoundInputs,
    epsilon: f64,
    direction: Direction,
) -> DeltaCertificate {
    let ne = inputs.norm_e;
    let a = inputs.mu.abs();
    let slack = (1.0 - a * ne).max(0.0);
    let norm_term = ratio(1.0, ne) - a;
    let epsilon_term = ratio(epsilon * slack, inputs.norm_cb * inputs.norm_ex + epsilon * ne);
    let component_term = inputs
        .x_lambda
        .iter()
        .map(|&x| {
            let x = x.max(0.0);
            ratio(x * slack, inputs.norm_ex + x * ne)
        })
        .fold(f64::INFINITY, f64::min);

    let mut binding = BindingTerm::Norm;
    let mut delta = norm_term;
    if epsilon_term < delta {
        binding = BindingTerm::Epsilon;
        delta = epsilon_term;
    }
    if component_term < delta {
        binding = BindingTerm::Component;
        delta = component_term;
    }
    let delta = if delta.is_nan() { 0.0 } else { delta.max(0.0) };

    let s = direction.sign();
    let imag_tol = cache.tolerances().imag;
    let mut excluded: Vec<f64> = cache
        .nu()
        .iter()
        .filter(|v| v.re != 0.0 && v.im.abs() <= imag_tol * (1.0 + v.norm()))
        .map(|v| cache.anchor() - 1.0 / v.re)
        .filter(|&p| {
            let step = s * (p - inputs.lambda);
            step > 0.0 && step <= delta
        })
        .collect();
    excluded.sort_by(f64::total_cmp);
    excluded.dedup();

    DeltaCertificate {
        lambda: inputs.lambda,
        delta_max: delta,
        epsilon,
        binding_term: binding,
        direction,
        norm_term,
        epsilon_term,
        component_term,
        excluded,
    }
}

/// `BoundInputs` and `max_delta` in one call.
pub fn certify(
    cache: &WarmstartCache,
    lambda: f64,
    epsilon: f64,
    direction: Direction,
) -> Result<DeltaCertificate> {
    let inputs = BoundInputs::from_cache(cache, lambda)?;
    Ok(max_delta(cache, &inputs, epsilon, direction))
}
