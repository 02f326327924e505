//! Outcome records for verification cases and whole runs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

/// Outcome of one verification case. `status = pass` iff the checked
/// difference is exactly zero (as a rational function, or as a residue in
/// the target quotient ring).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    /// Parameters echoed back, stringified, in sorted key order.
    pub params: BTreeMap<String, String>,
    pub status: Status,
    /// On fail: the canonical difference (or offending residue) as text.
    /// On error: the error message.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Wall time, echoed only when timing output is requested; excluded by
    /// default so reports are byte-identical across runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_micros: Option<u64>,
}

impl CheckReport {
    pub fn pass(id: impl Into<String>, params: BTreeMap<String, String>) -> Self {
        Self {
            id: id.into(),
            params,
            status: Status::Pass,
            detail: None,
            elapsed_micros: None,
        }
    }

    pub fn fail(
        id: impl Into<String>,
        params: BTreeMap<String, String>,
        detail: impl Into<String>,
    ) -> Self {
        Self {
            id: id.into(),
            params,
            status: Status::Fail,
            detail: Some(detail.into()),
            elapsed_micros: None,
        }
    }

    pub fn error(id: impl Into<String>, params: BTreeMap<String, String>, err: &Error) -> Self {
        Self {
            id: id.into(),
            params,
            status: Status::Error,
            detail: Some(err.to_string()),
            elapsed_micros: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Convenience builder for the `params` map.
pub fn params_of<I, K, V>(pairs: I) -> BTreeMap<String, String>
where
    I: IntoIterator<Item = (K, V)>,
    K: Into<String>,
    V: ToString,
{
    pairs
        .into_iter()
        .map(|(k, v)| (k.into(), v.to_string()))
        .collect()
}
