use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Variable part `c_v(J)` of the research cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", bound = "T: Real")]
pub enum VariableCost<T> {
    /// `c_v(J) = slope · J`.
    Affine { slope: T },
    /// `c_v(J) = table[J - 1]`; undefined beyond the table.
    Tabulated(Vec<T>),
}

/// Research cost `C(J) = c_f + c_v(J)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct CostFunction<T> {
    pub fixed: T,
    pub variable: VariableCost<T>,
}

/// How the optimal per-test size responds to the number of hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostRegime {
    /// Purely fixed cost: size `c_f / J`.
    Bonferroni,
    /// Purely proportional cost: size `slope`, independent of `J`.
    NoAdjustment,
    /// Anything in between: size `C(J) / J`.
    AverageSize,
}

impl<T: Real> CostFunction<T> {
    pub fn fixed(c: T) -> Self {
        Self::affine(c, T::zero())
    }

    pub fn linear(per_test: T) -> Self {
        Self::affine(T::zero(), per_test)
    }

    pub fn affine(fixed: T, slope: T) -> Self {
        Self {
            fixed,
            variable: VariableCost::Affine { slope },
        }
    }

    pub fn tabulated(fixed: T, table: Vec<T>) -> Self {
        Self {
            fixed,
            variable: VariableCost::Tabulated(table),
        }
    }

    /// `C(J)`, checked against `0 < C(J) ≤ J`.
    pub fn eval(&self, j: usize) -> Result<T> {
        let c = self.raw(j)?;
        let bad = |reason| Error::InvalidCost {
            j,
            value: c.as_f64(),
            reason,
        };
        if !c.is_finite() {
            return Err(bad("cost must be finite"));
        }
        if self.fixed < T::zero() {
            return Err(bad("fixed cost must be nonnegative"));
        }
        if c <= T::zero() {
            return Err(bad("cost must be positive"));
        }
        if c > T::from_usize_lossy(j) {
            return Err(bad("cost may not exceed the number of hypotheses"));
        }
        Ok(c)
    }

    /// `C(J)` without the feasibility checks.
    pub fn raw(&self, j: usize) -> Result<T> {
        if j == 0 {
            return Err(Error::InvalidArgument("number of hypotheses must be positive".into()));
        }
        let v = match &self.variable {
            VariableCost::Affine { slope } => *slope * T::from_usize_lossy(j),
            VariableCost::Tabulated(table) => *table.get(j - 1).ok_or(Error::InvalidCost {
                j,
                value: f64::NAN,
                reason: "no tabulated variable cost for this J",
            })?,
        };
        Ok(self.fixed + v)
    }

    pub fn regime(&self) -> CostRegime {
        let zero_variable = match &self.variable {
            VariableCost::Affine { slope } => *slope == T::zero(),
            VariableCost::Tabulated(t) => t.iter().all(|v| *v == T::zero()),
        };
        let proportional = matches!(self.variable, VariableCost::Affine { .. });
        if zero_variable {
            CostRegime::Bonferroni
        } else if self.fixed == T::zero() && proportional {
            CostRegime::NoAdjustment
        } else {
            CostRegime::AverageSize
        }
    }
}
