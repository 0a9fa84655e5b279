//! Finite metric spaces: construction, axiom checking, shortest-path repair
//! and seeded random generation.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance applied to the symmetry, diagonal and triangle axioms.
pub const DEFAULT_METRIC_EPS: f64 = 1e-9;

/// Number of grid levels used by [`random_metric`]. Raw distances are drawn
/// from `{scale * j / GRID_LEVELS : j = 1..=GRID_LEVELS}`.
pub const GRID_LEVELS: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    Asymmetry,
    Negative,
    NonzeroDiagonal,
    Triangle,
    ZeroOffdiagonal,
}

/// Indices involved in a violation. Triangle witnesses are `(i, via, j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Witness {
    Pair([usize; 2]),
    Triple([usize; 3]),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricViolation {
    pub kind: ViolationKind,
    pub witness: Witness,
    pub magnitude: f64,
}

impl fmt::Display for MetricViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ViolationKind::Asymmetry => "asymmetry",
            ViolationKind::Negative => "negative",
            ViolationKind::NonzeroDiagonal => "nonzero-diagonal",
            ViolationKind::Triangle => "triangle",
            ViolationKind::ZeroOffdiagonal => "zero-offdiagonal",
        };
        match self.witness {
            Witness::Pair([i, j]) => write!(f, "{kind} at ({i},{j}) by {}", self.magnitude),
            Witness::Triple([i, l, j]) => {
                write!(f, "{kind} at ({i},{l},{j}) by {}", self.magnitude)
            }
        }
    }
}

/// `n` distinct points with a validated distance matrix, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    n: usize,
    dist: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl FiniteMetricSpace {
    /// Builds a space from matrix rows, rejecting anything that is not a
    /// metric within [`DEFAULT_METRIC_EPS`].
    pub fn new(rows: &[Vec<f64>]) -> Result<Self> {
        let n = square_size(rows)?;
        let dist: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::from_flat(n, dist)
    }

    pub fn from_flat(n: usize, dist: Vec<f64>) -> Result<Self> {
        Self::from_flat_with_eps(n, dist, DEFAULT_METRIC_EPS)
    }

    pub fn from_flat_with_eps(n: usize, dist: Vec<f64>, eps: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("a metric space needs at least one point".into()));
        }
        if dist.len() != n * n {
            return Err(Error::Shape(format!(
                "expected {} distance entries for n = {n}, found {}",
                n * n,
                dist.len()
            )));
        }
        let violations = validate_flat(n, &dist, eps)?;
        if !violations.is_empty() {
            return Err(Error::NotAMetric(violations));
        }
        Ok(Self { n, dist, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::Shape(format!(
                "{} labels given for {} points",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name of point `i`: its label if present, else the index.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(labels) => labels[i].clone(),
            None => i.to_string(),
        }
    }

    /// Row-major distance entries.
    pub fn flat(&self) -> &[f64] {
        &self.dist
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.dist.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    /// The same points with every distance multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::Domain(format!("scale factor must be positive, got {factor}")));
        }
        Ok(Self {
            n: self.n,
            dist: self.dist.iter().map(|d| d * factor).collect(),
            labels: self.labels.clone(),
        })
    }
}

fn square_size(rows: &[Vec<f64>]) -> Result<usize> {
    let n = rows.len();
    if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::Shape(format!(
            "matrix has {n} rows but row {i} has {} entries",
            row.len()
        )));
    }
    Ok(n)
}

/// Checks the metric axioms and returns every violation found, each with a
/// concrete witness. An empty list means the matrix is a metric within `eps`.
pub fn validate_metric(matrix: &[Vec<f64>], eps: f64) -> Result<Vec<MetricViolation>> {
    let n = square_size(matrix)?;
    let flat: Vec<f64> = matrix.iter().flatten().copied().collect();
    validate_flat(n, &flat, eps)
}

pub(crate) fn validate_flat(n: usize, dist: &[f64], eps: f64) -> Result<Vec<MetricViolation>> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidInput(format!("metric tolerance must be positive, got {eps}")));
    }
    if let Some(bad) = dist.iter().find(|d| !d.is_finite()) {
        return Err(Error::InvalidInput(format!("non-finite distance {bad}")));
    }
    let d = |i: usize, j: usize| dist[i * n + j];
    let mut out = Vec::new();

    for i in 0..n {
        let dii = d(i, i);
        if dii.abs() > eps {
            out.push(MetricViolation {
                kind: ViolationKind::NonzeroDiagonal,
                witness: Witness::Pair([i, i]),
                magnitude: dii.abs(),
            });
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let dij = d(i, j);
            if dij < 0.0 {
                out.push(MetricViolation {
                    kind: ViolationKind::Negative,
                    witness: Witness::Pair([i, j]),
                    magnitude: -dij,
                });
            } else if dij < eps && i < j {
                out.push(MetricViolation {
                    kind: ViolationKind::ZeroOffdiagonal,
                    witness: Witness::Pair([i, j]),
                    magnitude: eps - dij,
                });
            }
            if i < j {
                let gap = (dij - d(j, i)).abs();
                if gap > eps {
                    out.push(MetricViolation {
                        kind: ViolationKind::Asymmetry,
                        witness: Witness::Pair([i, j]),
                        magnitude: gap,
                    });
                }
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            for l in 0..n {
                if l == i || l == j {
                    continue;
                }
                let excess = d(i, j) - (d(i, l) + d(l, j));
                if excess > eps {
                    out.push(MetricViolation {
                        kind: ViolationKind::Triangle,
                        witness: Witness::Triple([i, l, j]),
                        magnitude: excess,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Replaces every distance by the length of the shortest path between the
/// two points (Floyd–Warshall closure). Metrics are fixed points.
pub fn metric_repair(matrix: &[Vec<f64>]) -> Result<FiniteMetricSpace> {
    let n = square_size(matrix)?;
    if n == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    for i in 0..n {
        if matrix[i][i] != 0.0 {
            return Err(Error::InvalidInput(format!("diagonal entry ({i},{i}) is nonzero")));
        }
        for j in 0..n {
            let dij = matrix[i][j];
            if !dij.is_finite() || dij < 0.0 {
                return Err(Error::InvalidInput(format!("entry ({i},{j}) = {dij} is not a valid distance")));
            }
            if i != j && dij == 0.0 {
                return Err(Error::InvalidInput(format!("off-diagonal entry ({i},{j}) is zero")));
            }
            if dij != matrix[j][i] {
                return Err(Error::InvalidInput(format!("matrix is asymmetric at ({i},{j})")));
            }
        }
    }
    let mut dist: Vec<f64> = matrix.iter().flatten().copied().collect();
    // Rounding can leave a single pass short of closed; repeat until stable
    // so that the result is an exact fixed point of the closure.
    loop {
        let mut changed = false;
        for k in 0..n {
            for i in 0..n {
                let dik = dist[i * n + k];
                for j in 0..n {
                    let via = dik + dist[k * n + j];
                    if via < dist[i * n + j] {
                        dist[i * n + j] = via;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    FiniteMetricSpace::from_flat(n, dist)
}

/// Euclidean distances between coordinate vectors of a common dimension.
pub fn euclidean_embed(points: &[Vec<f64>]) -> Result<FiniteMetricSpace> {
    let n = points.len();
    if n == 0 {
        return Err(Error::InvalidInput("no points given".into()));
    }
    let dim = points[0].len();
    if let Some(i) = points.iter().position(|p| p.len() != dim) {
        return Err(Error::Shape(format!(
            "point {i} has dimension {}, expected {dim}",
            points[i].len()
        )));
    }
    if points.iter().flatten().any(|c| !c.is_finite()) {
        return Err(Error::InvalidInput("non-finite coordinate".into()));
    }
    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let sq: f64 = points[i]
                .iter()
                .zip(&points[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            if sq == 0.0 {
                return Err(Error::InvalidInput(format!("points {i} and {j} coincide")));
            }
            let dij = sq.sqrt();
            dist[i * n + j] = dij;
            dist[j * n + i] = dij;
        }
    }
    FiniteMetricSpace::from_flat(n, dist)
}

/// Seeded random metric on `n` points: a symmetric matrix with entries drawn
/// uniformly from the grid `scale * {1, .., GRID_LEVELS} / GRID_LEVELS`,
/// closed under shortest paths.
pub fn random_metric(seed: u64, n: usize, scale: f64) -> Result<FiniteMetricSpace> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_metric_from(&mut rng, n, scale)
}

pub(crate) fn random_metric_from<R: Rng>(
    rng: &mut R,
    n: usize,
    scale: f64,
) -> Result<FiniteMetricSpace> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("random metric needs n >= 2, got {n}")));
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::InvalidInput(format!("scale must be positive, got {scale}")));
    }
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let level = rng.gen_range(1..=GRID_LEVELS);
            let v = scale * f64::from(level) / f64::from(GRID_LEVELS);
            rows[i][j] = v;
            rows[j][i] = v;
        }
    }
    metric_repair(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_metric_is_valid() {
        let m = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        assert!(validate_metric(&m, DEFAULT_METRIC_EPS).unwrap().is_empty());
    }

    #[test]
    fn broken_triangle_reports_single_witness() {
        let m = vec![
            vec![0.0, 1.0, 5.0],
            vec![1.0, 0.0, 1.0],
            vec![5.0, 1.0, 0.0],
        ];
        let v = validate_metric(&m, DEFAULT_METRIC_EPS).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::Triangle);
        assert_eq!(v[0].witness, Witness::Triple([0, 1, 2]));
        assert_eq!(v[0].magnitude, 3.0);
    }

    #[test]
    fn every_axiom_has_a_witness() {
        let m = vec![
            vec![0.5, 0.0, 1.0],
            vec![0.0, 0.0, -1.0],
            vec![2.0, -1.0, 0.0],
        ];
        let v = validate_metric(&m, DEFAULT_METRIC_EPS).unwrap();
        let kinds: Vec<_> = v.iter().map(|x| x.kind).collect();
        for k in [
            ViolationKind::NonzeroDiagonal,
            ViolationKind::ZeroOffdiagonal,
            ViolationKind::Negative,
            ViolationKind::Asymmetry,
            ViolationKind::Triangle,
        ] {
            assert!(kinds.contains(&k), "missing {k:?} in {v:?}");
        }
        assert!(v.iter().all(|x| x.magnitude > 0.0));
    }

    #[test]
    fn non_square_is_shape_error() {
        let m = vec![vec![0.0, 1.0], vec![1.0]];
        assert!(matches!(validate_metric(&m, 1e-9), Err(Error::Shape(_))));
    }

    #[test]
    fn repair_shortcuts_long_edge() {
        let m = vec![
            vec![0.0, 1.0, 5.0],
            vec![1.0, 0.0, 1.0],
            vec![5.0, 1.0, 0.0],
        ];
        let sp = metric_repair(&m).unwrap();
        assert_eq!(
            sp.rows(),
            vec![
                vec![0.0, 1.0, 2.0],
                vec![1.0, 0.0, 1.0],
                vec![2.0, 1.0, 0.0]
            ]
        );
    }

    #[test]
    fn repair_is_identity_on_metrics() {
        let m = vec![
            vec![0.0, 1.0, 1.5],
            vec![1.0, 0.0, 1.0],
            vec![1.5, 1.0, 0.0],
        ];
        assert_eq!(metric_repair(&m).unwrap().rows(), m);
    }

    #[test]
    fn repair_rejects_bad_input() {
        let neg = vec![vec![0.0, -1.0], vec![-1.0, 0.0]];
        assert!(matches!(metric_repair(&neg), Err(Error::InvalidInput(_))));
        let asym = vec![vec![0.0, 1.0], vec![2.0, 0.0]];
        assert!(matches!(metric_repair(&asym), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn euclidean_distances() {
        let sp = euclidean_embed(&[vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(sp.d(0, 1), 1.0);
        let sp = euclidean_embed(&[vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(sp.d(1, 2), 2f64.sqrt());
    }

    #[test]
    fn euclidean_rejects_duplicates_and_ragged_input() {
        let dup = euclidean_embed(&[vec![0.0, 1.0], vec![0.0, 1.0]]);
        assert!(matches!(dup, Err(Error::InvalidInput(_))));
        let ragged = euclidean_embed(&[vec![0.0, 1.0], vec![0.0]]);
        assert!(matches!(ragged, Err(Error::Shape(_))));
    }

    #[test]
    fn random_metric_is_deterministic() {
        let a = random_metric(7, 8, 10.0).unwrap();
        let b = random_metric(7, 8, 10.0).unwrap();
        assert_eq!(a, b);
        let two = random_metric(1, 2, 1.0).unwrap();
        assert!(two.d(0, 1) > 0.0 && two.d(0, 1) <= 1.0);
    }

    #[test]
    fn random_metric_needs_two_points() {
        assert!(matches!(random_metric(0, 1, 1.0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn scaling_multiplies_entries() {
        let sp = random_metric(3, 5, 1.0).unwrap();
        let big = sp.scaled(3.0).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(big.d(i, j), 3.0 * sp.d(i, j));
            }
        }
        assert!(sp.scaled(0.0).is_err());
    }
}
