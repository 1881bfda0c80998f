use serde::Serialize;

use super::construct::make_index_rule;
use super::rule::RecommendationRule;
use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};
use crate::scalar::Real;

/// `w = Σ⁻¹𝟙 / (𝟙'Σ⁻¹𝟙)`, the weights summing to one with the smallest
/// index variance `w'Σw`.
pub fn variance_min_weights<T: Real>(cov: &Matrix<T>) -> Result<Vec<T>> {
    if !cov.is_square() || cov.rows() == 0 {
        return Err(Error::InvalidArgument(
            "covariance must be a non-empty square matrix".into(),
        ));
    }
    cov.check_symmetric(T::structural_tol())?;
    let chol = cov.cholesky()?;
    let x = chol.solve(&vec![T::one(); cov.rows()]);
    let total: T = x.iter().copied().sum();
    Ok(x.into_iter().map(|v| v / total).collect())
}

/// Index for a one-factor measurement model `X_g = λ_g θ + noise`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct FactorIndex<T> {
    /// `a_g = 1 / (λ_g √(λ⁻¹'Σλ⁻¹))`; `a'X` has unit variance.
    pub coefficients: Vec<T>,
    /// `λ⁻¹ / Σ_g λ_g⁻¹`, the same direction rescaled to sum to one.
    pub weights: Vec<T>,
    /// `a'Σa`, equal to one up to rounding.
    pub index_variance: T,
    /// Mean of `a'X` per unit of `θ`: `G / √(λ⁻¹'Σλ⁻¹)`.
    pub mean_per_theta: T,
}

pub fn factor_index_weights<T: Real>(loadings: &[T], cov: &Matrix<T>) -> Result<FactorIndex<T>> {
    if let Some((index, v)) = loadings
        .iter()
        .enumerate()
        .find(|(_, l)| !(l.is_finite() && **l > T::zero()))
    {
        return Err(Error::NonPositiveLoading {
            index,
            value: v.as_f64(),
        });
    }
    if !cov.is_square() || cov.rows() != loadings.len() {
        return Err(Error::DimensionMismatch {
            expected: loadings.len(),
            found: cov.rows(),
        });
    }
    cov.check_symmetric(T::structural_tol())?;
    let inv: Vec<T> = loadings.iter().map(|l| T::one() / *l).collect();
    let var = cov.quad_form(&inv);
    if !(var > T::zero()) {
        return Err(Error::ZeroIndexVariance { value: var.as_f64() });
    }
    let scale = var.sqrt();
    let coefficients: Vec<T> = inv.iter().map(|v| *v / scale).collect();
    let total: T = inv.iter().copied().sum();
    Ok(FactorIndex {
        index_variance: cov.quad_form(&coefficients),
        mean_per_theta: dot(&coefficients, loadings),
        weights: inv.iter().map(|v| *v / total).collect(),
        coefficients,
    })
}

/// Index test built from the factor weights, at size `C`.
pub fn factor_index_rule<T: Real>(loadings: &[T], cov: &Matrix<T>, size: T) -> Result<RecommendationRule<T>> {
    let f = factor_index_weights(loadings, cov)?;
    make_index_rule(&f.weights, cov, size)
}
