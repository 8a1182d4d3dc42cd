//! Seed sets: the k initial center positions handed to Lloyd refinement,
//! with provenance (which initializer, which source rows).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Point};
use crate::error::Error;

/// Tag identifying which initializer produced a seed set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitMethod {
    Random,
    KMeansPlusPlus,
    Maxmin,
    Unc,
}

impl InitMethod {
    pub const ALL: [InitMethod; 4] = [
        InitMethod::Random,
        InitMethod::KMeansPlusPlus,
        InitMethod::Maxmin,
        InitMethod::Unc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InitMethod::Random => "random",
            InitMethod::KMeansPlusPlus => "kmeanspp",
            InitMethod::Maxmin => "maxmin",
            InitMethod::Unc => "unc",
        }
    }
}

impl FromStr for InitMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "random" => Ok(InitMethod::Random),
            "kmeanspp" => Ok(InitMethod::KMeansPlusPlus),
            "maxmin" => Ok(InitMethod::Maxmin),
            "unc" => Ok(InitMethod::Unc),
            other => Err(Error::InvalidConfig(format!(
                "unknown initializer {other:?} (expected random|kmeanspp|maxmin|unc)"
            ))),
        }
    }
}

impl fmt::Display for InitMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An ordered list of k initial centers. Every initializer in this crate
/// selects centers from among the data points, so each center carries the
/// dataset index it was copied from; indices are pairwise distinct.
#[derive(Debug, Clone, PartialEq)]
pub struct Seeds {
    method: InitMethod,
    source_indices: Vec<usize>,
    centers: Vec<Point>,
}

impl Seeds {
    pub(crate) fn from_indices(
        dataset: &Dataset,
        source_indices: Vec<usize>,
        method: InitMethod,
    ) -> Self {
        debug_assert!({
            let mut sorted = source_indices.clone();
            sorted.sort_unstable();
            sorted.windows(2).all(|w| w[0] != w[1])
        });
        let centers = source_indices
            .iter()
            .map(|&i| dataset.point(i).clone())
            .collect();
        Self {
            method,
            source_indices,
            centers,
        }
    }

    pub fn k(&self) -> usize {
        self.centers.len()
    }

    pub fn method(&self) -> InitMethod {
        self.method
    }

    pub fn centers(&self) -> &[Point] {
        &self.centers
    }

    pub fn source_indices(&self) -> &[usize] {
        &self.source_indices
    }
}
