use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::Face;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Hypotheses checked before the strong nef-partition construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    NotLinearCone,
    Fano,
    StrictlyRegular,
    PairTrivial,
}

impl std::fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Hypothesis::NotLinearCone => "not an intersection with a linear cone",
            Hypothesis::Fano => "positive Fano index",
            Hypothesis::StrictlyRegular => "strictly regular pair",
            Hypothesis::PairTrivial => "every non-divisible subset is strongly non-divisible",
        })
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("representability of {degree} is unknown: exceeds dp cap {cap}")]
    DpCapExceeded { degree: BigUint, cap: u64 },

    #[error("search exceeded node budget {budget}")]
    BudgetExceeded { budget: u64 },

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("hypothesis failed: {hypothesis}")]
    Hypothesis {
        hypothesis: Hypothesis,
        witness: Option<Face>,
    },

    #[error("internal consistency violated at degree index {index}: {detail}")]
    Consistency { index: usize, detail: String },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    /// True for cap and budget exhaustion, as opposed to proven answers.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::DpCapExceeded { .. } | Error::BudgetExceeded { .. } | Error::TooLarge(_)
        )
    }
}
