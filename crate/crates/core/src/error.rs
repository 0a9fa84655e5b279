use std::collections::BTreeSet;

use crate::metric::MetricViolation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("distance matrix is not a metric ({} violation(s)): {}", .0.len(), summarize(.0))]
    NotAMetric(Vec<MetricViolation>),

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Some point of A0 has more than one proximal preimage, so the induced
    /// self-map is not well defined.
    #[error("point {x} has {} proximal preimages {preimages:?}", preimages.len())]
    NonUniquePreimage { x: usize, preimages: BTreeSet<usize> },

    #[error("domain error: {0}")]
    Domain(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors that signal bad input rather than an I/O problem.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io(_) | Error::Csv(_))
    }
}

fn summarize(violations: &[MetricViolation]) -> String {
    violations
        .iter()
        .take(4)
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
