//! Randomized search over small instances.
//!
//! Each trial draws a random metric, splits its points into `A` and `B`,
//! and picks `T` with every image in `B0`. The full pipeline (certificate,
//! induced map, Picard from every start, oracle) runs on the result. Trials
//! with `k_min < 1/3` must satisfy the main theorem; a failure is either a
//! bug or a counterexample and is reported as a violation.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    bound_from_k, lipschitz_constant, p_proximal_constant, Classification, BOUND_SLACK,
};
use crate::error::{Error, Result};
use crate::metric::random_metric_from;
use crate::proximal::{
    check_preconditions, induced_map, proximal_preimages, proximal_sets, PairInstance,
    DEFAULT_PROX_EPS,
};
use crate::solver::{best_proximity_oracle, picard_solve, PicardOptions};

/// Raw distances are drawn on a grid in `(0, HUNT_SCALE]`.
pub const HUNT_SCALE: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct HuntConfig {
    pub seed: u64,
    pub trials: u64,
    pub n_min: usize,
    pub n_max: usize,
    pub filter: Option<Classification>,
}

impl HuntConfig {
    fn check(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidInput("hunt needs at least one trial".into()));
        }
        if self.n_min < 2 || self.n_min > self.n_max {
            return Err(Error::InvalidInput(format!(
                "point-count range [{}, {}] must satisfy 2 <= n_min <= n_max",
                self.n_min, self.n_max
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HuntRecord {
    pub seed: u64,
    pub trial: u64,
    pub n: usize,
    pub a_size: usize,
    pub a0_size: usize,
    #[serde(with = "crate::json::extended_f64")]
    pub k_min: f64,
    #[serde(rename = "L")]
    pub lipschitz: Option<f64>,
    pub q: Option<f64>,
    pub preimage_unique: bool,
    pub picard_all_converge: bool,
    /// Longest Picard run over all starts in `A0`.
    pub max_steps: usize,
    /// The common Picard limit, when every start reaches the same point.
    pub limit: Option<usize>,
    /// Every Picard step respected its a-priori bound (vacuous without one).
    pub apriori_ok: bool,
    pub oracle_agrees: bool,
    pub classification: Classification,
}

impl HuntRecord {
    /// All conclusions of the main theorem hold for this record. Only
    /// meaningful for `admissible_lt_third`.
    pub fn main_theorem_holds(&self) -> bool {
        let bound_ok = matches!((self.lipschitz, self.q), (Some(l), Some(q)) if l <= q + BOUND_SLACK);
        self.preimage_unique
            && bound_ok
            && self.lipschitz.is_some_and(|l| l < 1.0)
            && self.picard_all_converge
            && self.limit.is_some()
            && self.max_steps <= self.a0_size
            && self.apriori_ok
            && self.oracle_agrees
    }
}

/// Counts per classification plus the extremes seen in the `[1/3, 1)` regime.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct HuntSummary {
    pub trials: u64,
    pub admissible_lt_third: u64,
    pub admissible_third_to_one: u64,
    pub inadmissible: u64,
    pub returned: u64,
    pub max_l_third_to_one: Option<f64>,
    /// Records in `[1/3, 1)` whose induced map is not a Banach contraction.
    pub third_to_one_with_l_ge_one: u64,
    pub theorem_violations: u64,
}

#[derive(Debug, Clone)]
pub struct HuntOutcome {
    /// Records matching the filter, in trial order.
    pub records: Vec<HuntRecord>,
    pub summary: HuntSummary,
    /// `admissible_lt_third` records (filtered or not) that break the theorem.
    pub violations: Vec<HuntRecord>,
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// The instance drawn for `(seed, trial)`; depends on nothing else.
pub fn trial_instance(seed: u64, trial: u64, n_min: usize, n_max: usize) -> Result<PairInstance> {
    let mut rng = trial_rng(seed, trial);
    let n = rng.gen_range(n_min..=n_max);
    let space = random_metric_from(&mut rng, n, HUNT_SCALE)?;

    let mut in_a: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    if in_a.iter().all(|&s| s) || in_a.iter().all(|&s| !s) {
        let flip = rng.gen_range(0..n);
        in_a[flip] = !in_a[flip];
    }
    let a: Vec<usize> = (0..n).filter(|&i| in_a[i]).collect();
    let b: Vec<usize> = (0..n).filter(|&i| !in_a[i]).collect();

    // B0 depends only on the split, so any placeholder map will do here.
    let placeholder = a.iter().map(|&x| (x, b[0])).collect();
    let probe = PairInstance::new(space.clone(), a.clone(), b.clone(), placeholder, DEFAULT_PROX_EPS)?;
    let b0: Vec<usize> = proximal_sets(&probe).b0.into_iter().collect();

    let map: BTreeMap<usize, usize> = a
        .iter()
        .map(|&x| (x, b0[rng.gen_range(0..b0.len())]))
        .collect();
    PairInstance::new(space, a, b, map, DEFAULT_PROX_EPS)
}

/// Runs the whole pipeline on one instance.
pub fn evaluate(instance: &PairInstance, seed: u64, trial: u64) -> Result<HuntRecord> {
    let ps = proximal_sets(instance);
    let mut record = HuntRecord {
        seed,
        trial,
        n: instance.space().len(),
        a_size: instance.a().len(),
        a0_size: ps.a0.len(),
        k_min: f64::INFINITY,
        lipschitz: None,
        q: None,
        preimage_unique: false,
        picard_all_converge: false,
        max_steps: 0,
        limit: None,
        apriori_ok: true,
        oracle_agrees: false,
        classification: Classification::Inadmissible,
    };
    if !check_preconditions(instance, &ps).all_hold() {
        return Ok(record);
    }

    // Computed first so that nothing downstream can influence it.
    let oracle = best_proximity_oracle(instance, &ps);
    let best: BTreeSet<usize> = oracle.best_proximity_points();

    let adm = p_proximal_constant(instance, &ps)?;
    record.k_min = adm.k_min;
    record.q = bound_from_k(adm.k_min);
    record.classification = adm.classification();

    let mut relation_fixed = BTreeSet::new();
    for &x in &ps.a0 {
        if proximal_preimages(instance, &ps, x)?.contains(&x) {
            relation_fixed.insert(x);
        }
    }
    record.oracle_agrees = best == relation_fixed;

    let im = match induced_map(instance, &ps) {
        Ok(im) => im,
        Err(Error::NonUniquePreimage { .. }) => return Ok(record),
        Err(e) => return Err(e),
    };
    record.preimage_unique = true;
    record.lipschitz = Some(lipschitz_constant(&im, &adm).lipschitz);

    let options = PicardOptions::from_k(adm.k_min);
    let mut limits = BTreeSet::new();
    let mut all_converge = true;
    for x0 in im.domain() {
        let run = picard_solve(&im, x0, &options)?;
        all_converge &= run.converged;
        record.apriori_ok &= run.bounds_hold();
        record.max_steps = record.max_steps.max(run.steps);
        if run.converged {
            limits.insert(run.z);
        }
    }
    record.picard_all_converge = all_converge;
    if all_converge {
        // Every fixed point is its own limit, so the limits are exactly the
        // fixed points of the induced map.
        record.oracle_agrees &= limits == best;
        if limits.len() == 1 {
            record.limit = limits.first().copied();
        }
    }
    Ok(record)
}

/// Runs `config.trials` trials. Trials `0..injected.len()` evaluate the given
/// instances instead of random draws.
pub fn hunt_with(config: &HuntConfig, injected: &[PairInstance]) -> Result<HuntOutcome> {
    config.check()?;
    let all: Vec<HuntRecord> = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let generated;
            let inst = match usize::try_from(trial).ok().and_then(|t| injected.get(t)) {
                Some(inst) => inst,
                None => {
                    generated = trial_instance(config.seed, trial, config.n_min, config.n_max)?;
                    &generated
                }
            };
            evaluate(inst, config.seed, trial)
        })
        .collect::<Result<_>>()?;

    let mut summary = HuntSummary { trials: config.trials, ..Default::default() };
    let mut violations = Vec::new();
    for r in &all {
        match r.classification {
            Classification::AdmissibleLtThird => {
                summary.admissible_lt_third += 1;
                if !r.main_theorem_holds() {
                    violations.push(r.clone());
                }
            }
            Classification::AdmissibleThirdToOne => {
                summary.admissible_third_to_one += 1;
                if let Some(l) = r.lipschitz {
                    summary.max_l_third_to_one = Some(summary.max_l_third_to_one.map_or(l, |m| m.max(l)));
                    if l >= 1.0 {
                        summary.third_to_one_with_l_ge_one += 1;
                    }
                }
            }
            Classification::Inadmissible => summary.inadmissible += 1,
        }
    }
    summary.theorem_violations = violations.len() as u64;
    let records: Vec<HuntRecord> = all
        .into_iter()
        .filter(|r| config.filter.is_none_or(|f| r.classification == f))
        .collect();
    summary.returned = records.len() as u64;
    Ok(HuntOutcome { records, summary, violations })
}

pub fn hunt(config: &HuntConfig) -> Result<HuntOutcome> {
    hunt_with(config, &[])
}

/// Regenerates the instance behind a record, recomputes the record and
/// checks it for internal consistency. Returns a description of every
/// discrepancy found.
pub fn audit_record(config: &HuntConfig, record: &HuntRecord) -> Result<Vec<String>> {
    let inst = trial_instance(record.seed, record.trial, config.n_min, config.n_max)?;
    let fresh = evaluate(&inst, record.seed, record.trial)?;
    let mut problems = Vec::new();
    if &fresh != record {
        problems.push(format!("recomputed record differs: {fresh:?}"));
    }
    if record.classification != Classification::of(record.k_min) {
        problems.push("classification does not match k_min".into());
    }
    if record.q != bound_from_k(record.k_min) {
        problems.push("q is not 2k/(1-k)".into());
    }
    if record.lipschitz.is_some() != record.preimage_unique {
        problems.push("L must be present exactly when preimages are unique".into());
    }
    if record.k_min < 1.0 && !record.preimage_unique {
        problems.push("admissible instance with a non-unique preimage".into());
    }
    if let (Some(l), Some(q)) = (record.lipschitz, record.q) {
        if l > q + BOUND_SLACK {
            problems.push(format!("L = {l} exceeds 2k/(1-k) = {q}"));
        }
    }
    if record.limit.is_some() && !record.picard_all_converge {
        problems.push("common limit reported without convergence".into());
    }
    if record.a0_size > record.a_size || record.a_size >= record.n {
        problems.push("set sizes are inconsistent".into());
    }
    Ok(problems)
}
