use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// How the researcher is rewarded for a set of discoveries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "rule", bound = "T: Real")]
pub enum PublicationRule<T> {
    /// Reward equals the expected number of discoveries.
    Linear,
    /// Reward `γ` if at least `κ` discoveries are made.
    Threshold { kappa: usize, gamma: T },
    /// Reward equals the expected false discovery proportion.
    Malevolent,
}

impl<T: Real> PublicationRule<T> {
    pub fn threshold(kappa: usize, gamma: T) -> Result<Self> {
        let rule = PublicationRule::Threshold { kappa, gamma };
        rule.validate()?;
        Ok(rule)
    }

    /// `κ ≥ 1` and `γ` finite and positive. `γ > C(J)` is left to the size
    /// solvers, which report it as an infeasible target.
    pub fn validate(&self) -> Result<()> {
        if let PublicationRule::Threshold { kappa, gamma } = self {
            if *kappa == 0 {
                return Err(Error::InvalidArgument("kappa must be at least 1".into()));
            }
            if !(gamma.is_finite() && *gamma > T::zero()) {
                return Err(Error::InvalidArgument(format!("gamma = {gamma} must be positive")));
            }
        }
        Ok(())
    }

    pub fn kappa(&self) -> Option<usize> {
        match self {
            PublicationRule::Threshold { kappa, .. } => Some(*kappa),
            _ => None,
        }
    }
}
