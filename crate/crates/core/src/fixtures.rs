//! Reference instances with exactly representable distances.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::metric::{euclidean_embed, FiniteMetricSpace};
use crate::proximal::{PairInstance, DEFAULT_PROX_EPS};

/// Points a1, a2, b1, b2 (indices 0-3). Pairs at distance 1: a1-a2, b1-b2,
/// a1-b1, a2-b2; the diagonals a1-b2 and a2-b1 have length 2.
pub fn four_point_space() -> FiniteMetricSpace {
    FiniteMetricSpace::new(&[
        vec![0.0, 1.0, 1.0, 2.0],
        vec![1.0, 0.0, 2.0, 1.0],
        vec![1.0, 2.0, 0.0, 1.0],
        vec![2.0, 1.0, 1.0, 0.0],
    ])
    .and_then(|s| s.with_labels(["a1", "a2", "b1", "b2"].map(String::from).to_vec()))
    .expect("four-point fixture is a metric")
}

/// `T: a1 -> b1, a2 -> b1`. Best proximity point a1, p-proximal constant 0.
pub fn flat4() -> PairInstance {
    PairInstance::new(
        four_point_space(),
        [0, 1],
        [2, 3],
        BTreeMap::from([(0, 2), (1, 2)]),
        DEFAULT_PROX_EPS,
    )
    .expect("FLAT4 is well formed")
}

/// `T: a1 -> b2, a2 -> b1`. Induced map swaps a1 and a2; constant 1.
pub fn swap4() -> PairInstance {
    PairInstance::new(
        four_point_space(),
        [0, 1],
        [2, 3],
        BTreeMap::from([(0, 3), (1, 2)]),
        DEFAULT_PROX_EPS,
    )
    .expect("SWAP4 is well formed")
}

/// Two parallel vertical segments sampled at heights `i/N`:
/// `A = {(0, i/N)}` at indices `0..=N`, `B = {(1, j/N)}` at `N+1..=2N+1`,
/// and `T(a_i)` is the B-point at height `floor(i/c)/N`.
pub fn gen_strip(n: usize, c: usize) -> Result<PairInstance> {
    if n < 1 {
        return Err(Error::InvalidInput(format!("strip needs N >= 1, got {n}")));
    }
    if c < 2 {
        return Err(Error::InvalidInput(format!("strip needs c >= 2, got {c}")));
    }
    let height = |i: usize| i as f64 / n as f64;
    let points: Vec<Vec<f64>> = (0..=n)
        .map(|i| vec![0.0, height(i)])
        .chain((0..=n).map(|j| vec![1.0, height(j)]))
        .collect();
    let labels = (0..=n)
        .map(|i| format!("a{i}"))
        .chain((0..=n).map(|j| format!("b{j}")))
        .collect();
    let space = euclidean_embed(&points)?.with_labels(labels)?;
    let b_index = |j: usize| n + 1 + j;
    let map = (0..=n).map(|i| (i, b_index(i / c))).collect();
    PairInstance::new(space, 0..=n, b_index(0)..=b_index(n), map, DEFAULT_PROX_EPS)
}
