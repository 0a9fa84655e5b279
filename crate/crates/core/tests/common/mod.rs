//! Brute-force reference computations over raw distance matrices. These read
//! nothing from the library beyond the instance's raw data.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use bestprox::PairInstance;

pub struct Raw {
    pub d: Vec<Vec<f64>>,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub t: BTreeMap<usize, usize>,
    pub eps: f64,
    d_ab: f64,
}

impl Raw {
    pub fn of(inst: &PairInstance) -> Self {
        let mut raw = Raw {
            d: inst.space().rows(),
            a: inst.a().iter().copied().collect(),
            b: inst.b().iter().copied().collect(),
            t: inst.map().clone(),
            eps: inst.eps(),
            d_ab: 0.0,
        };
        raw.d_ab = raw.min_cross_distance();
        raw
    }

    pub fn d_ab(&self) -> f64 {
        self.d_ab
    }

    fn min_cross_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for &x in &self.a {
            for &y in &self.b {
                if self.d[x][y] < best {
                    best = self.d[x][y];
                }
            }
        }
        best
    }

    fn prox(&self, u: usize, y: usize) -> bool {
        (self.d[u][y] - self.d_ab()).abs() <= self.eps
    }

    pub fn a0(&self) -> BTreeSet<usize> {
        self.a
            .iter()
            .copied()
            .filter(|&x| self.b.iter().any(|&y| self.prox(x, y)))
            .collect()
    }

    pub fn b0(&self) -> BTreeSet<usize> {
        self.b
            .iter()
            .copied()
            .filter(|&y| self.a.iter().any(|&x| self.prox(x, y)))
            .collect()
    }

    /// Largest ratio over every quadruple `x1, x2` in A0 and `u1, u2` in A
    /// satisfying both proximal equations.
    pub fn k_min(&self) -> f64 {
        let a0 = self.a0();
        let mut best = 0.0f64;
        for &x1 in &a0 {
            for &x2 in &a0 {
                for &u1 in &self.a {
                    if !self.prox(u1, self.t[&x1]) {
                        continue;
                    }
                    for &u2 in &self.a {
                        if !self.prox(u2, self.t[&x2]) {
                            continue;
                        }
                        let num = self.d[u1][u2];
                        let den = self.d[x1][x2] + (self.d[u1][x1] - self.d[u2][x2]).abs();
                        let r = if num == 0.0 {
                            0.0
                        } else if den == 0.0 {
                            f64::INFINITY
                        } else {
                            num / den
                        };
                        best = best.max(r);
                    }
                }
            }
        }
        best
    }

    /// The proximal relation on A0 as a function, if it is single valued.
    pub fn induced(&self) -> Option<BTreeMap<usize, usize>> {
        let mut out = BTreeMap::new();
        for x in self.a0() {
            let us: Vec<usize> = self.a.iter().copied().filter(|&u| self.prox(u, self.t[&x])).collect();
            if us.len() != 1 {
                return None;
            }
            out.insert(x, us[0]);
        }
        Some(out)
    }

    pub fn lipschitz(&self, s: &BTreeMap<usize, usize>) -> f64 {
        let mut best = 0.0f64;
        for (&x, &sx) in s {
            for (&y, &sy) in s {
                if x != y {
                    best = best.max(self.d[sx][sy] / self.d[x][y]);
                }
            }
        }
        best
    }

    /// Points of A with `d(x, Tx) = d(A, B)`.
    pub fn best_proximity(&self) -> BTreeSet<usize> {
        self.a.iter().copied().filter(|&x| self.prox(x, self.t[&x])).collect()
    }
}

/// Count of strict triangle failures over all ordered triples.
pub fn triangle_failures(d: &[Vec<f64>], eps: f64) -> usize {
    let n = d.len();
    let mut count = 0;
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                if d[i][j] > d[i][l] + d[l][j] + eps {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Shortest-path closure by repeated edge relaxation until nothing changes.
pub fn relaxation_closure(d: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = d.len();
    let mut out = d.to_vec();
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let via = out[i][l] + d[l][j];
                    if via < out[i][j] {
                        out[i][j] = via;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return out;
        }
    }
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol
}
