//! Binary-string statistical ensembles.
//!
//! Two constructions of an ensemble of N observations from a random source
//! string of bits:
//!
//! * the C-model, where the observable is the cyclic Hamming distance
//!   between the source and its n-bit rotations (strongly correlated
//!   observations, enhanced ground-state condensation below a critical
//!   temperature), and
//! * the B-model, where the observable is the popcount of N independent
//!   non-overlapping substrings (gradual accumulation as T -> 0).
//!
//! [`bitcore`] holds the packed bitstring kernels, [`ensemble`] the
//! histogram construction and empirical thermodynamics, [`theory`] the
//! closed-form population curves, and [`experiment`] the CLI-facing
//! runner that writes CSV/JSON artifacts and plot scripts.

pub mod bitcore;
pub mod ensemble;
pub mod error;
pub mod experiment;
pub mod special;
pub mod theory;

pub use error::{Error, Result};

use serde::{Deserialize, Serialize};

/// Which ensemble construction an artifact belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Model {
    #[serde(rename = "C-model")]
    C,
    #[serde(rename = "B-model")]
    B,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::C => "C-model",
            Model::B => "B-model",
        }
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "c" | "C" | "C-model" => Ok(Model::C),
            "b" | "B" | "B-model" => Ok(Model::B),
            other => Err(Error::InvalidParameter(format!("unknown model `{other}`"))),
        }
    }
}
