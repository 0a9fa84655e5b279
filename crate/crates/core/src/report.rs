//! Analysis reports, Picard trace CSV and hunt JSON lines.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::analysis::{
    lipschitz_constant, p_proximal_constant, quadruple_ratio, AdmissibilityReport, Classification,
    LipschitzReport,
};
use crate::error::{Error, Result};
use crate::hunt::HuntRecord;
use crate::json::{self, fmt_f64};
use crate::proximal::{check_preconditions, induced_map, proximal_sets, PairInstance, PreconditionReport};
use crate::solver::SolveResult;

pub const TRACE_HEADER: [&str; 5] =
    ["step", "point_index", "dist_to_final", "apriori_bound", "proximity_gap"];

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub n: usize,
    pub epsilon: f64,
    pub d_ab: f64,
    pub a0: BTreeSet<usize>,
    pub b0: BTreeSet<usize>,
    pub preconditions: PreconditionReport,
    pub admissibility: Option<AdmissibilityReport>,
    pub witness_ratio: Option<f64>,
    pub classification: Option<Classification>,
    pub induced_map: Option<BTreeMap<usize, usize>>,
    pub induced_map_error: Option<String>,
    pub lipschitz: Option<LipschitzReport>,
    /// Broken implications between the certificate and the induced map.
    /// Nonempty means a bug or a counterexample.
    pub invariant_violations: Vec<String>,
}

impl AnalysisReport {
    pub fn build(instance: &PairInstance) -> Result<Self> {
        let ps = proximal_sets(instance);
        let preconditions = check_preconditions(instance, &ps);
        let mut report = Self {
            n: instance.space().len(),
            epsilon: instance.eps(),
            d_ab: ps.d_ab,
            a0: ps.a0.clone(),
            b0: ps.b0.clone(),
            preconditions,
            admissibility: None,
            witness_ratio: None,
            classification: None,
            induced_map: None,
            induced_map_error: None,
            lipschitz: None,
            invariant_violations: Vec::new(),
        };
        if !report.preconditions.all_hold() {
            return Ok(report);
        }
        let adm = p_proximal_constant(instance, &ps)?;
        report.witness_ratio = adm.witness.map(|w| quadruple_ratio(instance.space(), w));
        if report.witness_ratio.is_some_and(|r| r != adm.k_min) {
            report.invariant_violations.push("witness ratio differs from k_min".into());
        }
        report.classification = Some(adm.classification());
        match induced_map(instance, &ps) {
            Ok(im) => {
                let lip = lipschitz_constant(&im, &adm);
                if lip.bound_satisfied == Some(false) {
                    report.invariant_violations.push(format!(
                        "L = {} exceeds 2k/(1-k) = {}",
                        lip.lipschitz,
                        lip.bound_q.unwrap_or(f64::NAN)
                    ));
                }
                report.induced_map = Some(im.table().clone());
                report.lipschitz = Some(lip);
            }
            Err(e @ Error::NonUniquePreimage { .. }) => {
                if adm.admissible {
                    report
                        .invariant_violations
                        .push("admissible certificate but the induced map is not defined".into());
                }
                report.induced_map_error = Some(e.to_string());
            }
            Err(e) => return Err(e),
        }
        report.admissibility = Some(adm);
        Ok(report)
    }
}

pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let mut text = json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(Error::from)
}

/// One row per Picard step, starting at step 0.
pub fn trace_csv(result: &SolveResult) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(TRACE_HEADER)?;
    for c in &result.bound_checks {
        w.write_record([
            c.step.to_string(),
            c.point.to_string(),
            fmt_f64(c.dist_to_final),
            c.apriori_bound.map(fmt_f64).unwrap_or_default(),
            fmt_f64(c.proximity_gap),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("CSV of ASCII fields"))
}

pub fn write_trace_csv(path: impl AsRef<Path>, result: &SolveResult) -> Result<()> {
    fs::write(path, trace_csv(result)?).map_err(Error::from)
}

/// One compact JSON object per line.
pub fn hunt_jsonl(records: &[HuntRecord]) -> Result<String> {
    let mut out = String::new();
    for r in records {
        out.push_str(&json::to_string_compact(r)?);
        out.push('\n');
    }
    Ok(out)
}

pub fn write_hunt_jsonl(path: impl AsRef<Path>, records: &[HuntRecord]) -> Result<()> {
    fs::write(path, hunt_jsonl(records)?).map_err(Error::from)
}
