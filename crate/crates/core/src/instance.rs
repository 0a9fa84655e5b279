//! JSON instance files.
//!
//! ```json
//! { "kind": "finite", "n": 2, "dist": [0, 1, 1, 0],
//!   "A": [0], "B": [1], "T": { "0": 1 }, "epsilon": 1e-9 }
//! ```
//!
//! `dist` is the row-major `n * n` matrix. The `euclidean` kind replaces `n`
//! and `dist` with `points`, a list of coordinate vectors. Indices are
//! authoritative; `labels` is optional and only used for display.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json;
use crate::metric::{euclidean_embed, FiniteMetricSpace};
use crate::proximal::{PairInstance, DEFAULT_PROX_EPS};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InstanceFile {
    Finite {
        n: usize,
        dist: Vec<f64>,
        #[serde(rename = "A")]
        a: Vec<usize>,
        #[serde(rename = "B")]
        b: Vec<usize>,
        #[serde(rename = "T", deserialize_with = "de_table")]
        t: BTreeMap<usize, usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        epsilon: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
    Euclidean {
        points: Vec<Vec<f64>>,
        #[serde(rename = "A")]
        a: Vec<usize>,
        #[serde(rename = "B")]
        b: Vec<usize>,
        #[serde(rename = "T", deserialize_with = "de_table")]
        t: BTreeMap<usize, usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        epsilon: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
}

/// Map tables are JSON objects keyed by decimal point indices. Keys are read
/// as strings because the tagged-enum buffer does not coerce them.
fn de_table<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<usize, usize>, D::Error> {
    let raw = BTreeMap::<String, usize>::deserialize(d)?;
    raw.into_iter()
        .map(|(k, v)| {
            k.parse::<usize>()
                .map(|k| (k, v))
                .map_err(|_| serde::de::Error::custom(format!("map key {k:?} is not a point index")))
        })
        .collect()
}

impl InstanceFile {
    /// Validates the file contents and builds the instance.
    pub fn into_instance(self) -> Result<PairInstance> {
        let (space, a, b, t, epsilon, labels) = match self {
            InstanceFile::Finite { n, dist, a, b, t, epsilon, labels } => {
                (FiniteMetricSpace::from_flat(n, dist)?, a, b, t, epsilon, labels)
            }
            InstanceFile::Euclidean { points, a, b, t, epsilon, labels } => {
                (euclidean_embed(&points)?, a, b, t, epsilon, labels)
            }
        };
        let space = match labels {
            Some(l) => space.with_labels(l)?,
            None => space,
        };
        PairInstance::new(space, a, b, t, epsilon.unwrap_or(DEFAULT_PROX_EPS))
    }

    /// The `finite` encoding of an instance.
    pub fn from_instance(instance: &PairInstance) -> Self {
        let space = instance.space();
        InstanceFile::Finite {
            n: space.len(),
            dist: space.flat().to_vec(),
            a: instance.a().iter().copied().collect(),
            b: instance.b().iter().copied().collect(),
            t: instance.map().clone(),
            epsilon: Some(instance.eps()),
            labels: space.labels().map(<[String]>::to_vec),
        }
    }
}

pub fn parse_instance(text: &str) -> Result<PairInstance> {
    let file: InstanceFile = serde_json::from_str(text)?;
    file.into_instance()
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<PairInstance> {
    parse_instance(&fs::read_to_string(path)?)
}

pub fn instance_to_json(instance: &PairInstance) -> Result<String> {
    json::to_string_pretty(&InstanceFile::from_instance(instance))
}

pub fn write_instance(path: impl AsRef<Path>, instance: &PairInstance) -> Result<()> {
    let mut text = instance_to_json(instance)?;
    text.push('\n');
    fs::write(path, text).map_err(Error::from)
}
