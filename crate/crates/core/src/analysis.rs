//! Exhaustive contraction certificates.
//!
//! The p-proximal constant of `T` is the smallest `k` with
//!
//! ```text
//! d(u1, u2) <= k * (d(x1, x2) + |d(u1, x1) - d(u2, x2)|)
//! ```
//!
//! over every pair of constrained pairs `(x1, u1)`, `(x2, u2)`, where `x`
//! ranges over `A0` and `u` over the proximal preimages of `T(x)`. On finite
//! instances this is an attained maximum of ratios.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;
use crate::proximal::{
    ensure_preconditions, proximal_preimages, InducedMap, PairInstance, ProximalStructure,
};

/// Slack allowed when comparing a measured Lipschitz constant to `2k/(1-k)`.
pub const BOUND_SLACK: f64 = 1e-9;

/// `(x1, u1, x2, u2)`.
pub type Quadruple = (usize, usize, usize, usize);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    #[serde(with = "crate::json::extended_f64")]
    pub k_min: f64,
    pub admissible: bool,
    pub witness: Option<Quadruple>,
    pub quadruples_checked: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    AdmissibleLtThird,
    AdmissibleThirdToOne,
    Inadmissible,
}

impl Classification {
    pub fn of(k_min: f64) -> Self {
        if k_min < 1.0 / 3.0 {
            Self::AdmissibleLtThird
        } else if k_min < 1.0 {
            Self::AdmissibleThirdToOne
        } else {
            Self::Inadmissible
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::AdmissibleLtThird => "admissible_lt_third",
            Self::AdmissibleThirdToOne => "admissible_third_to_one",
            Self::Inadmissible => "inadmissible",
        }
    }
}

impl std::str::FromStr for Classification {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "admissible_lt_third" => Ok(Self::AdmissibleLtThird),
            "admissible_third_to_one" => Ok(Self::AdmissibleThirdToOne),
            "inadmissible" => Ok(Self::Inadmissible),
            other => Err(Error::InvalidInput(format!("unknown classification {other:?}"))),
        }
    }
}

impl AdmissibilityReport {
    pub fn classification(&self) -> Classification {
        Classification::of(self.k_min)
    }
}

/// `num / den` with `0/0 = 0` and `positive/0 = +inf`.
#[inline]
pub fn safe_ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        if num == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        num / den
    }
}

/// Ratio of the p-proximal inequality for one quadruple.
pub fn quadruple_ratio(space: &FiniteMetricSpace, (x1, u1, x2, u2): Quadruple) -> f64 {
    let num = space.d(u1, u2);
    let den = space.d(x1, x2) + (space.d(u1, x1) - space.d(u2, x2)).abs();
    safe_ratio(num, den)
}

/// Scans quadruples in lexicographic order; the witness is the first one
/// attaining the maximum.
fn max_ratio(space: &FiniteMetricSpace, pairs: &[(usize, usize)]) -> AdmissibilityReport {
    let mut k_min = 0.0;
    let mut witness = None;
    for &(x1, u1) in pairs {
        for &(x2, u2) in pairs {
            let q = (x1, u1, x2, u2);
            let r = quadruple_ratio(space, q);
            if r > k_min {
                k_min = r;
                witness = Some(q);
            }
        }
    }
    AdmissibilityReport {
        k_min,
        admissible: k_min < 1.0,
        witness,
        quadruples_checked: pairs.len() * pairs.len(),
    }
}

/// Smallest p-proximal constant of `T`, by exhaustive enumeration.
pub fn p_proximal_constant(
    instance: &PairInstance,
    ps: &ProximalStructure,
) -> Result<AdmissibilityReport> {
    ensure_preconditions(instance, ps)?;
    let mut pairs = Vec::new();
    for &x in &ps.a0 {
        for u in proximal_preimages(instance, ps, x)? {
            pairs.push((x, u));
        }
    }
    Ok(max_ratio(instance.space(), &pairs))
}

/// Smallest `k` with `d(fx, fy) <= k (d(x, y) + |d(x, fx) - d(y, fy)|)` for
/// a self-map `f` given as a table over all points.
pub fn p_contraction_constant(
    space: &FiniteMetricSpace,
    self_map: &[usize],
) -> Result<AdmissibilityReport> {
    if self_map.len() != space.len() {
        return Err(Error::Shape(format!(
            "self-map table has {} entries for {} points",
            self_map.len(),
            space.len()
        )));
    }
    if let Some(&bad) = self_map.iter().find(|&&y| y >= space.len()) {
        return Err(Error::InvalidInput(format!("self-map image {bad} out of range")));
    }
    let n = space.len();
    let mut k_min = 0.0;
    let mut witness = None;
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            let q = (x, self_map[x], y, self_map[y]);
            let r = quadruple_ratio(space, q);
            if r > k_min {
                k_min = r;
                witness = Some(q);
            }
        }
    }
    Ok(AdmissibilityReport {
        k_min,
        admissible: k_min < 1.0,
        witness,
        quadruples_checked: n * n.saturating_sub(1),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LipschitzReport {
    #[serde(rename = "L")]
    pub lipschitz: f64,
    pub witness: Option<(usize, usize)>,
    pub bound_q: Option<f64>,
    pub bound_satisfied: Option<bool>,
}

/// `2k/(1-k)` for `k` in `[0, 1)`; `induced_bound` is the checked form
/// restricted to the open interval.
pub(crate) fn bound_from_k(k: f64) -> Option<f64> {
    (k >= 0.0 && k < 1.0).then(|| 2.0 * k / (1.0 - k))
}

/// Lipschitz constant of the induced map over `A0`, compared with the bound
/// `2k/(1-k)` implied by the instance's p-proximal constant.
pub fn lipschitz_constant(im: &InducedMap<'_>, admissibility: &AdmissibilityReport) -> LipschitzReport {
    let space = im.source().space();
    let pts: Vec<(usize, usize)> = im.table().iter().map(|(&x, &s)| (x, s)).collect();
    let mut lipschitz = 0.0;
    let mut witness = None;
    for (i, &(x, sx)) in pts.iter().enumerate() {
        for &(y, sy) in &pts[i + 1..] {
            let r = safe_ratio(space.d(sx, sy), space.d(x, y));
            if r > lipschitz {
                lipschitz = r;
                witness = Some((x, y));
            }
        }
    }
    let bound_q = bound_from_k(admissibility.k_min);
    LipschitzReport {
        lipschitz,
        witness,
        bound_q,
        bound_satisfied: bound_q.map(|q| lipschitz <= q + BOUND_SLACK),
    }
}

/// `q = 2k/(1-k)`, the contraction factor of the induced map when `T` is a
/// p-proximal contraction with constant `k`. `q < 1` exactly when `k < 1/3`.
pub fn induced_bound(k: f64) -> Result<f64> {
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::Domain(format!("k must lie in (0, 1), got {k}")));
    }
    Ok(2.0 * k / (1.0 - k))
}
