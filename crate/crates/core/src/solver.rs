//! Picard iteration of the induced map and the brute-force oracle it is
//! checked against.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::analysis::bound_from_k;
use crate::error::{Error, Result};
use crate::proximal::{InducedMap, PairInstance, ProximalStructure};

/// Slack added to a-priori bounds when checking a trace against them.
pub const TRACE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Default)]
pub struct PicardOptions {
    /// Step budget; `|A0| + 1` when unset.
    pub max_iter: Option<usize>,
    /// Contraction factor `q` used for a-priori bounds. Bounds are omitted
    /// unless `0 <= q < 1`.
    pub contraction: Option<f64>,
}

impl PicardOptions {
    /// Options whose contraction factor is `2k/(1-k)` for the given
    /// p-proximal constant, when that factor is below one.
    pub fn from_k(k_min: f64) -> Self {
        Self {
            max_iter: None,
            contraction: bound_from_k(k_min).filter(|&q| q < 1.0),
        }
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = Some(max_iter);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepCheck {
    pub step: usize,
    pub point: usize,
    pub dist_to_final: f64,
    pub apriori_bound: Option<f64>,
    pub proximity_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveResult {
    pub trace: Vec<usize>,
    pub z: usize,
    pub converged: bool,
    pub steps: usize,
    /// `d(z, T z) - d(A, B)`.
    pub proximity_gap: f64,
    pub contraction: Option<f64>,
    pub bound_checks: Vec<StepCheck>,
}

impl SolveResult {
    /// Every step lies within its a-priori bound (vacuous when no bound).
    pub fn bounds_hold(&self) -> bool {
        self.bound_checks
            .iter()
            .all(|c| c.apriori_bound.is_none_or(|b| c.dist_to_final <= b + TRACE_SLACK))
    }
}

/// Iterates the induced map from `x0` until it reaches a fixed point or the
/// step budget runs out.
pub fn picard_solve(
    im: &InducedMap<'_>,
    x0: usize,
    options: &PicardOptions,
) -> Result<SolveResult> {
    if im.apply(x0).is_none() {
        return Err(Error::Precondition(format!("start point {x0} is not in A0")));
    }
    let max_iter = options.max_iter.unwrap_or(im.len() + 1);
    if max_iter == 0 {
        return Err(Error::InvalidInput("max_iter must be at least 1".into()));
    }

    let mut trace = vec![x0];
    let mut converged = false;
    loop {
        let cur = *trace.last().expect("trace is nonempty");
        let next = im.apply(cur).expect("induced map is closed on A0");
        if next == cur {
            converged = true;
            break;
        }
        if trace.len() - 1 == max_iter {
            break;
        }
        trace.push(next);
    }
    let z = *trace.last().expect("trace is nonempty");
    let steps = trace.len() - 1;

    let inst = im.source();
    let gap = |x: usize| inst.d(x, inst.image(x)) - im.d_ab();
    let contraction = options.contraction.filter(|q| (0.0..1.0).contains(q));
    let d01 = trace.get(1).map_or(0.0, |&x1| inst.d(x0, x1));
    let bound_checks = trace
        .iter()
        .enumerate()
        .map(|(step, &point)| StepCheck {
            step,
            point,
            dist_to_final: inst.d(point, z),
            apriori_bound: contraction.map(|q| bound_unchecked(q, d01, step)),
            proximity_gap: gap(point),
        })
        .collect();

    Ok(SolveResult {
        z,
        converged,
        steps,
        proximity_gap: gap(z),
        contraction,
        bound_checks,
        trace,
    })
}

/// `q^n d01 / (1 - q)`: how far the `n`-th Picard iterate can be from the
/// fixed point of a `q`-contraction whose first step has length `d01`.
pub fn apriori_error_bound(q: f64, d01: f64, n: usize) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Domain(format!("q must lie in (0, 1), got {q}")));
    }
    if !(d01 >= 0.0) {
        return Err(Error::Domain(format!("d01 must be nonnegative, got {d01}")));
    }
    Ok(bound_unchecked(q, d01, n))
}

/// Also covers `q = 0`, the limit for maps that are constant on `A0`.
fn bound_unchecked(q: f64, d01: f64, n: usize) -> f64 {
    let exp = i32::try_from(n).unwrap_or(i32::MAX);
    q.powi(exp) * d01 / (1.0 - q)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    pub argmin_set: BTreeSet<usize>,
    pub min_value: f64,
    pub is_best_proximity: bool,
    pub unique: bool,
}

impl OracleResult {
    /// Points realizing `d(A, B)`; empty when the minimum gap is positive.
    pub fn best_proximity_points(&self) -> BTreeSet<usize> {
        if self.is_best_proximity {
            self.argmin_set.clone()
        } else {
            BTreeSet::new()
        }
    }
}

/// Minimizes `d(x, T x)` over all of `A` by direct evaluation. Uses nothing
/// from the induced map or the contraction analysis.
pub fn best_proximity_oracle(instance: &PairInstance, ps: &ProximalStructure) -> OracleResult {
    let gaps: Vec<(usize, f64)> = instance
        .a()
        .iter()
        .map(|&x| (x, instance.d(x, instance.image(x))))
        .collect();
    let min_value = gaps.iter().map(|&(_, g)| g).fold(f64::INFINITY, f64::min);
    let argmin_set: BTreeSet<usize> = gaps
        .iter()
        .filter(|&&(_, g)| g <= min_value + ps.eps)
        .map(|&(x, _)| x)
        .collect();
    OracleResult {
        unique: argmin_set.len() == 1,
        is_best_proximity: min_value <= ps.d_ab + ps.eps,
        argmin_set,
        min_value,
    }
}

pub fn verify_best_proximity(
    instance: &PairInstance,
    ps: &ProximalStructure,
    z: usize,
) -> Result<bool> {
    if !instance.a().contains(&z) {
        return Err(Error::Precondition(format!("{z} is not in A")));
    }
    Ok(ps.is_proximal(instance.d(z, instance.image(z))))
}
