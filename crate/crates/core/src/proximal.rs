//! Proximal structure of a non-self map `T: A -> B` on a finite metric space.
//!
//! A point `x` of `A` is *proximal* when some point of `B` sits at exactly the
//! set distance `d(A, B)` from it; `A0` and `B0` collect those points. When
//! every `T(x)` for `x` in `A0` has exactly one proximal partner `u` in `A`,
//! the rule `x -> u` defines the induced self-map on `A0` whose fixed points
//! are the best proximity points of `T`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;

/// Default absolute tolerance for testing `d(u, y) = d(A, B)`.
pub const DEFAULT_PROX_EPS: f64 = 1e-9;

/// A metric space with index sets `A`, `B` and a map table `T: A -> B`.
///
/// `A` and `B` must be disjoint unless they are equal, in which case the
/// instance is a self-map and `d(A, B) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairInstance {
    space: FiniteMetricSpace,
    a: BTreeSet<usize>,
    b: BTreeSet<usize>,
    map: BTreeMap<usize, usize>,
    eps: f64,
    self_map: bool,
}

impl PairInstance {
    pub fn new(
        space: FiniteMetricSpace,
        a: impl IntoIterator<Item = usize>,
        b: impl IntoIterator<Item = usize>,
        map: BTreeMap<usize, usize>,
        eps: f64,
    ) -> Result<Self> {
        let a: BTreeSet<usize> = a.into_iter().collect();
        let b: BTreeSet<usize> = b.into_iter().collect();
        let n = space.len();
        if a.is_empty() || b.is_empty() {
            return Err(Error::InvalidInput("A and B must be nonempty".into()));
        }
        if let Some(&i) = a.iter().chain(&b).find(|&&i| i >= n) {
            return Err(Error::InvalidInput(format!("index {i} out of range for {n} points")));
        }
        let self_map = a == b;
        if !self_map {
            if let Some(i) = a.intersection(&b).next() {
                return Err(Error::InvalidInput(format!(
                    "A and B overlap at {i} without being equal"
                )));
            }
        }
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(Error::InvalidInput(format!("proximal tolerance must be >= 0, got {eps}")));
        }
        for (&x, &y) in &map {
            if x >= n || y >= n {
                return Err(Error::InvalidInput(format!(
                    "map entry {x} -> {y} out of range for {n} points"
                )));
            }
            if !a.contains(&x) {
                return Err(Error::InvalidInput(format!("map is defined at {x}, which is not in A")));
            }
            if !b.contains(&y) {
                return Err(Error::InvalidInput(format!("map sends {x} to {y}, which is not in B")));
            }
        }
        if let Some(x) = a.iter().find(|x| !map.contains_key(x)) {
            return Err(Error::InvalidInput(format!("map is not defined at {x} in A")));
        }
        Ok(Self { space, a, b, map, eps, self_map })
    }

    /// Encodes a self-map `f` of the whole space as an instance with `A = B`.
    pub fn self_map(space: FiniteMetricSpace, table: &[usize], eps: f64) -> Result<Self> {
        if table.len() != space.len() {
            return Err(Error::Shape(format!(
                "self-map table has {} entries for {} points",
                table.len(),
                space.len()
            )));
        }
        let all: Vec<usize> = (0..space.len()).collect();
        let map = table.iter().copied().enumerate().collect();
        Self::new(space, all.clone(), all, map, eps)
    }

    pub fn space(&self) -> &FiniteMetricSpace {
        &self.space
    }

    pub fn a(&self) -> &BTreeSet<usize> {
        &self.a
    }

    pub fn b(&self) -> &BTreeSet<usize> {
        &self.b
    }

    pub fn map(&self) -> &BTreeMap<usize, usize> {
        &self.map
    }

    /// `T(x)`. Panics if `x` is not in `A`.
    #[inline]
    pub fn image(&self, x: usize) -> usize {
        self.map[&x]
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn is_self_map(&self) -> bool {
        self.self_map
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.space.d(i, j)
    }

    /// Same index sets and map over a rescaled space.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Ok(Self { space: self.space.scaled(factor)?, ..self.clone() })
    }

    pub fn with_eps(&self, eps: f64) -> Result<Self> {
        Self::new(self.space.clone(), self.a.clone(), self.b.clone(), self.map.clone(), eps)
    }
}

/// `d(A, B)` together with the proximal sets it induces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProximalStructure {
    pub d_ab: f64,
    pub a0: BTreeSet<usize>,
    pub b0: BTreeSet<usize>,
    pub eps: f64,
}

impl ProximalStructure {
    #[inline]
    pub fn is_proximal(&self, d: f64) -> bool {
        (d - self.d_ab).abs() <= self.eps
    }
}

/// `min { d(x, y) : x in A, y in B }`; attained since both sets are finite.
pub fn pair_distance(instance: &PairInstance) -> f64 {
    instance
        .a
        .iter()
        .flat_map(|&x| instance.b.iter().map(move |&y| instance.d(x, y)))
        .fold(f64::INFINITY, f64::min)
}

pub fn proximal_sets(instance: &PairInstance) -> ProximalStructure {
    let d_ab = pair_distance(instance);
    let eps = instance.eps;
    let near = |x: usize, y: usize| (instance.d(x, y) - d_ab).abs() <= eps;
    let a0 = instance
        .a
        .iter()
        .copied()
        .filter(|&x| instance.b.iter().any(|&y| near(x, y)))
        .collect();
    let b0 = instance
        .b
        .iter()
        .copied()
        .filter(|&y| instance.a.iter().any(|&x| near(x, y)))
        .collect();
    ProximalStructure { d_ab, a0, b0, eps }
}

/// Finite sets are approximatively compact with respect to any set: every
/// sequence in a finite set has an eventually constant subsequence.
pub const APPROX_COMPACT_RATIONALE: &str =
    "B is finite, so every sequence in B has an eventually constant and hence convergent subsequence";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PreconditionReport {
    pub a0_nonempty: bool,
    pub t_maps_a0_into_b0: bool,
    pub approx_compact: bool,
    pub approx_compact_rationale: &'static str,
    /// Points of `A0` whose image falls outside `B0`.
    pub violations: Vec<usize>,
}

impl PreconditionReport {
    pub fn all_hold(&self) -> bool {
        self.a0_nonempty && self.t_maps_a0_into_b0 && self.approx_compact
    }
}

pub fn check_preconditions(instance: &PairInstance, ps: &ProximalStructure) -> PreconditionReport {
    let violations: Vec<usize> = ps
        .a0
        .iter()
        .copied()
        .filter(|&x| !ps.b0.contains(&instance.image(x)))
        .collect();
    PreconditionReport {
        a0_nonempty: !ps.a0.is_empty(),
        t_maps_a0_into_b0: violations.is_empty(),
        approx_compact: true,
        approx_compact_rationale: APPROX_COMPACT_RATIONALE,
        violations,
    }
}

pub(crate) fn ensure_preconditions(instance: &PairInstance, ps: &ProximalStructure) -> Result<()> {
    let report = check_preconditions(instance, ps);
    if report.all_hold() {
        Ok(())
    } else if !report.a0_nonempty {
        Err(Error::Precondition("A0 is empty".into()))
    } else {
        Err(Error::Precondition(format!(
            "T does not map A0 into B0 at {:?}",
            report.violations
        )))
    }
}

/// Every `u` in `A` with `d(u, T(x)) = d(A, B)` (within tolerance).
pub fn proximal_preimages(
    instance: &PairInstance,
    ps: &ProximalStructure,
    x: usize,
) -> Result<BTreeSet<usize>> {
    if !ps.a0.contains(&x) {
        return Err(Error::Precondition(format!("{x} is not in A0")));
    }
    let tx = instance.image(x);
    if !ps.b0.contains(&tx) {
        return Err(Error::Precondition(format!("T({x}) = {tx} is not in B0")));
    }
    Ok(preimages_unchecked(instance, ps, tx))
}

fn preimages_unchecked(
    instance: &PairInstance,
    ps: &ProximalStructure,
    y: usize,
) -> BTreeSet<usize> {
    instance
        .a
        .iter()
        .copied()
        .filter(|&u| ps.is_proximal(instance.d(u, y)))
        .collect()
}

/// The self-map of `A0` sending `x` to its unique proximal preimage.
#[derive(Debug, Clone)]
pub struct InducedMap<'a> {
    table: BTreeMap<usize, usize>,
    source: &'a PairInstance,
    d_ab: f64,
}

impl<'a> InducedMap<'a> {
    pub fn table(&self) -> &BTreeMap<usize, usize> {
        &self.table
    }

    pub fn source(&self) -> &'a PairInstance {
        self.source
    }

    pub fn d_ab(&self) -> f64 {
        self.d_ab
    }

    /// The domain `A0`.
    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.table.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// `S(x)`. Returns `None` outside `A0`.
    #[inline]
    pub fn apply(&self, x: usize) -> Option<usize> {
        self.table.get(&x).copied()
    }

    pub fn fixed_points(&self) -> BTreeSet<usize> {
        self.table.iter().filter(|(x, s)| x == s).map(|(&x, _)| x).collect()
    }
}

/// Builds the induced self-map. Fails on the first `x` whose image has more
/// than one proximal preimage instead of choosing between them.
pub fn induced_map<'a>(
    instance: &'a PairInstance,
    ps: &ProximalStructure,
) -> Result<InducedMap<'a>> {
    ensure_preconditions(instance, ps)?;
    let mut table = BTreeMap::new();
    for &x in &ps.a0 {
        let pre = preimages_unchecked(instance, ps, instance.image(x));
        let mut it = pre.iter();
        match (it.next(), it.next()) {
            (Some(&u), None) => {
                table.insert(x, u);
            }
            (None, _) => {
                return Err(Error::Precondition(format!("T({x}) has no proximal preimage")));
            }
            _ => return Err(Error::NonUniquePreimage { x, preimages: pre }),
        }
    }
    Ok(InducedMap { table, source: instance, d_ab: ps.d_ab })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{flat4, swap4};
    use crate::metric::random_metric;

    fn identity_instance(n: usize) -> PairInstance {
        let sp = random_metric(11, n, 1.0).unwrap();
        let table: Vec<usize> = (0..n).collect();
        PairInstance::self_map(sp, &table, DEFAULT_PROX_EPS).unwrap()
    }

    #[test]
    fn flat4_structure() {
        let inst = flat4();
        let ps = proximal_sets(&inst);
        assert_eq!(ps.d_ab, 1.0);
        assert_eq!(ps.a0, BTreeSet::from([0, 1]));
        assert_eq!(ps.b0, BTreeSet::from([2, 3]));
        assert!(check_preconditions(&inst, &ps).all_hold());
        assert_eq!(proximal_preimages(&inst, &ps, 0).unwrap(), BTreeSet::from([0]));
        let im = induced_map(&inst, &ps).unwrap();
        assert_eq!(im.table(), &BTreeMap::from([(0, 0), (1, 0)]));
    }

    #[test]
    fn swap4_structure() {
        let inst = swap4();
        let ps = proximal_sets(&inst);
        assert!(check_preconditions(&inst, &ps).all_hold());
        assert_eq!(proximal_preimages(&inst, &ps, 0).unwrap(), BTreeSet::from([1]));
        let im = induced_map(&inst, &ps).unwrap();
        assert_eq!(im.table(), &BTreeMap::from([(0, 1), (1, 0)]));
    }

    #[test]
    fn identity_self_map() {
        let inst = identity_instance(5);
        assert!(inst.is_self_map());
        let ps = proximal_sets(&inst);
        assert_eq!(pair_distance(&inst), 0.0);
        assert_eq!(ps.a0.len(), 5);
        assert_eq!(ps.b0.len(), 5);
        for x in 0..5 {
            assert_eq!(proximal_preimages(&inst, &ps, x).unwrap(), BTreeSet::from([x]));
        }
        let im = induced_map(&inst, &ps).unwrap();
        assert!(im.table().iter().all(|(x, s)| x == s));
    }

    #[test]
    fn image_outside_b0_is_reported() {
        // T sends a1 to b2, but only b1 realizes d(A,B) against A here.
        let sp = FiniteMetricSpace::new(&[
            vec![0.0, 1.0, 1.0, 2.0],
            vec![1.0, 0.0, 2.0, 3.0],
            vec![1.0, 2.0, 0.0, 1.0],
            vec![2.0, 3.0, 1.0, 0.0],
        ])
        .unwrap();
        let inst =
            PairInstance::new(sp, [0, 1], [2, 3], BTreeMap::from([(0, 3), (1, 2)]), DEFAULT_PROX_EPS)
                .unwrap();
        let ps = proximal_sets(&inst);
        assert_eq!(ps.a0, BTreeSet::from([0]));
        assert_eq!(ps.b0, BTreeSet::from([2]));
        let rep = check_preconditions(&inst, &ps);
        assert!(!rep.t_maps_a0_into_b0);
        assert_eq!(rep.violations, vec![0]);
        assert!(matches!(proximal_preimages(&inst, &ps, 0), Err(Error::Precondition(_))));
        assert!(matches!(proximal_preimages(&inst, &ps, 1), Err(Error::Precondition(_))));
        assert!(matches!(induced_map(&inst, &ps), Err(Error::Precondition(_))));
    }

    #[test]
    fn tied_preimages_are_rejected() {
        // a1 and a2 are both at distance 1 from b1.
        let sp = FiniteMetricSpace::new(&[
            vec![0.0, 1.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.0, 2.0],
            vec![1.0, 1.0, 0.0, 1.0],
            vec![2.0, 2.0, 1.0, 0.0],
        ])
        .unwrap();
        let inst =
            PairInstance::new(sp, [0, 1], [2, 3], BTreeMap::from([(0, 2), (1, 2)]), DEFAULT_PROX_EPS)
                .unwrap();
        let ps = proximal_sets(&inst);
        match induced_map(&inst, &ps) {
            Err(Error::NonUniquePreimage { x, preimages }) => {
                assert_eq!(x, 0);
                assert_eq!(preimages, BTreeSet::from([0, 1]));
            }
            other => panic!("expected non-unique preimage, got {other:?}"),
        }
    }

    #[test]
    fn instance_validation() {
        let sp = flat4().space().clone();
        let ok = BTreeMap::from([(0, 2), (1, 2)]);
        assert!(PairInstance::new(sp.clone(), [0, 1], [1, 2], ok.clone(), 1e-9).is_err());
        assert!(PairInstance::new(sp.clone(), [0, 1], [2, 4], ok.clone(), 1e-9).is_err());
        assert!(PairInstance::new(sp.clone(), [0, 1], [2, 3], BTreeMap::from([(0, 2)]), 1e-9).is_err());
        assert!(PairInstance::new(sp.clone(), [0, 1], [2, 3], BTreeMap::from([(0, 2), (1, 0)]), 1e-9).is_err());
        assert!(PairInstance::new(sp.clone(), Vec::new(), [2, 3], BTreeMap::new(), 1e-9).is_err());
        assert!(PairInstance::new(sp, [0, 1], [2, 3], ok, -1.0).is_err());
    }
}
