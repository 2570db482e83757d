use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Which block matrix is being studied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Off-diagonal blocks `alpha_ij X_ij`, zero diagonal blocks.
    Adjacency,
    /// Off-diagonal blocks `-alpha_ij X_ij`, diagonal block `sum_j alpha_ij X_ij`.
    Laplacian,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Adjacency => "adjacency",
            Model::Laplacian => "laplacian",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "adjacency" | "A" => Ok(Model::Adjacency),
            "laplacian" | "L" => Ok(Model::Laplacian),
            _ => Err(Error::Parse(format!("unknown model {s:?}"))),
        }
    }
}
