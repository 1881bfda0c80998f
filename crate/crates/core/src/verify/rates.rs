use serde::Serialize;

use crate::error::Result;
use crate::protocols::RecommendationRule;
use crate::scalar::Real;
use crate::stats::{summarize, Estimate, GaussianModel, Method};

/// Compound error rates of a rule at the model's `θ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct ErrorRates<T> {
    /// `Σ_k P(r_k = 1)`.
    pub avg_size: Estimate<T>,
    /// `P(some component fires)`; a weak FWER when `θ = 0`.
    pub weak_fwer: Estimate<T>,
    pub kappa: Option<usize>,
    /// `P(#discoveries ≥ κ)`.
    pub k_fwer: Option<Estimate<T>>,
    /// `E[Σ_{m ≥ κ} binom(R, m)]`, the left side of the p* equation.
    pub combinations_at_least_kappa: Option<Estimate<T>>,
    /// `E[FDP]` counting effects `≤ 0` as false.
    pub fdr: Estimate<T>,
    /// `E[FDP]` counting only effects `< 0` as false.
    pub fdr_strict: Estimate<T>,
    pub simulated: bool,
}

pub fn error_rates<T: Real>(
    rule: &RecommendationRule<T>,
    model: &GaussianModel<T>,
    kappa: Option<usize>,
    method: &Method,
) -> Result<ErrorRates<T>> {
    let s = summarize(rule, model, kappa, true, method)?;
    let singles = (0..rule.components()).all(|k| rule.discoveries(k) == 1);
    let avg_size = if singles {
        s.expected_discoveries
    } else {
        // conservative error for sums of dependent estimates
        let value = s.marginals.iter().map(|e| e.value).sum();
        let std_error = s.marginals.iter().map(|e| e.std_error).sum();
        Estimate {
            value,
            std_error,
            simulated: s.simulated,
        }
    };
    let joint = |e: Option<Estimate<T>>| e.expect("joint summary is complete");
    Ok(ErrorRates {
        avg_size,
        weak_fwer: joint(s.any),
        kappa,
        k_fwer: kappa.map(|_| joint(s.at_least_kappa)),
        combinations_at_least_kappa: kappa.and(s.combinations_at_least_kappa),
        fdr: joint(s.fdr),
        fdr_strict: joint(s.fdp),
        simulated: s.simulated,
    })
}
