use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::protocols::{make_index_rule, make_min_statistic_rule, CostFunction};
use crate::scalar::Real;
use crate::stats::{rejection_probs, GaussianModel, Method};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct PowerComparison<T> {
    pub theta: Vec<T>,
    /// Rejects only if both statistics exceed their size-`C` critical value.
    pub conjunction_power: T,
    /// One-sided test of `(X_1 + X_2)/2` at size `C`.
    pub index_power: T,
}

/// Power of the conjunction rule and the equal-weight index rule at
/// `θ = (−M, M + u)` with `Σ = I`.
pub fn separate_vs_index_demo<T: Real>(m: T, u: T, cost: &CostFunction<T>) -> Result<PowerComparison<T>> {
    if !(m.is_finite() && u.is_finite() && m >= T::zero() && u >= T::zero()) {
        return Err(Error::InvalidArgument("M and u must be finite and nonnegative".into()));
    }
    let c = cost.eval(1)?;
    let theta = vec![-m, m + u];
    let model = GaussianModel::standard(theta.clone())?;
    let half = T::lit(0.5);
    let conj = make_min_statistic_rule(2, c)?;
    let index = make_index_rule(&[half, half], &Matrix::identity(2), c)?;
    Ok(PowerComparison {
        conjunction_power: rejection_probs(&conj, &model, &Method::Exact)?.probs[0],
        index_power: rejection_probs(&index, &model, &Method::Exact)?.probs[0],
        theta,
    })
}
