//! Constructors for the optimal protocols, calibrated from economic primitives.

use serde::Serialize;

use super::cost::{CostFunction, VariableCost};
use super::pstar::solve_pstar;
use super::rule::{check_weights, RecommendationRule, RuleKind, RuleMeta};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Real;
use crate::stats::normal::critical_value;

/// Largest `J` for which subset enumeration is attempted.
pub const MAX_ENUMERATION: usize = 20;

fn check_variances<T: Real>(j: usize, cov_diag: &[T]) -> Result<()> {
    if cov_diag.len() != j {
        return Err(Error::DimensionMismatch {
            expected: j,
            found: cov_diag.len(),
        });
    }
    Ok(())
}

/// Per-test size `C(J)/J` of the separate t-tests.
///
/// Affine costs are split as `c_f/J + slope`, so that the purely fixed and
/// purely proportional regimes give `c_f/J` and `slope` without rounding.
pub fn separate_size<T: Real>(j: usize, cost: &CostFunction<T>) -> Result<T> {
    let c = cost.eval(j)?;
    let n = T::from_usize_lossy(j);
    Ok(match cost.variable {
        VariableCost::Affine { slope } => cost.fixed / n + slope,
        VariableCost::Tabulated(_) => c / n,
    })
}

/// One-sided t-tests at common size `C(J)/J`.
///
/// When `C(J) = J` the size is one; the rule then always rejects and carries
/// the `degenerate` flag.
pub fn make_separate_ttests<T: Real>(
    j: usize,
    cost: &CostFunction<T>,
    cov_diag: &[T],
) -> Result<RecommendationRule<T>> {
    check_variances(j, cov_diag)?;
    let c = cost.eval(j)?;
    let size = separate_size(j, cost)?;
    let meta = RuleMeta {
        j: Some(j),
        cost: Some(c),
        ..RuleMeta::default()
    };
    if size >= T::one() {
        return Ok(RecommendationRule::always_reject(j).with_meta(RuleMeta {
            degenerate: true,
            ..meta
        }));
    }
    let t = critical_value(size)?;
    RecommendationRule::new(
        RuleKind::SeparateThresholds {
            thresholds: vec![t; j],
            variances: cov_diag.to_vec(),
        },
        meta,
    )
}

/// One-sided t-tests at size `p*` for the threshold publication rule that
/// rewards `γ` for at least `κ` discoveries.
pub fn make_threshold_pub_ttests<T: Real>(
    j: usize,
    kappa: usize,
    cost: &CostFunction<T>,
    gamma: T,
    cov_diag: &[T],
) -> Result<RecommendationRule<T>> {
    check_variances(j, cov_diag)?;
    let c = cost.eval(j)?;
    let p = solve_pstar(j, kappa, c / gamma)?;
    RecommendationRule::new(
        RuleKind::SeparateThresholds {
            thresholds: vec![critical_value(p)?; j],
            variances: cov_diag.to_vec(),
        },
        RuleMeta {
            j: Some(j),
            kappa: Some(kappa),
            cost: Some(c),
            gamma: Some(gamma),
            degenerate: false,
        },
    )
}

/// All-or-nothing rule: every component rejects iff each standardized
/// statistic clears `Φ⁻¹(1 − size)`.
pub fn make_min_statistic_rule<T: Real>(dim: usize, per_component_size: T) -> Result<RecommendationRule<T>> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    RecommendationRule::new(
        RuleKind::MinStatistic {
            threshold: critical_value(per_component_size)?,
            variances: vec![T::one(); dim],
        },
        RuleMeta {
            j: Some(dim),
            ..RuleMeta::default()
        },
    )
}

/// Treatment combinations with at least `κ` members, as sorted index lists,
/// in increasing bitmask order.
pub fn combinations_at_least(j: usize, kappa: usize) -> Result<Vec<Vec<usize>>> {
    if j > MAX_ENUMERATION {
        return Err(Error::EnumerationTooLarge {
            j,
            max: MAX_ENUMERATION,
        });
    }
    Ok((1u32..1 << j)
        .filter(|m| m.count_ones() as usize >= kappa)
        .map(|m| (0..j).filter(|&i| m >> i & 1 == 1).collect())
        .collect())
}

/// Implements the best combination of at least `κ` treatments if its
/// statistic is the largest and exceeds `t`, where
/// `P(max_k X̃_k ≥ t | θ = 0) = C(J)/γ` for independent standard-normal
/// group statistics.
pub fn make_group_max_rule<T: Real>(
    j: usize,
    kappa: usize,
    cost: &CostFunction<T>,
    gamma: T,
) -> Result<RecommendationRule<T>> {
    if kappa == 0 || kappa > j {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= kappa <= J, got kappa = {kappa}, J = {j}"
        )));
    }
    let c = cost.eval(j)?;
    let level = c / gamma;
    if !(level > T::zero() && level < T::one()) {
        return Err(Error::InfeasiblePStar {
            target: level.as_f64(),
            lower: 0.0,
            upper: 1.0,
        });
    }
    let groups = combinations_at_least(j, kappa)?;
    let k = T::from_usize_lossy(groups.len());
    // 1 − (1 − level)^{1/|K|}, kept accurate for small levels
    let per_group = -((-level).ln_1p() / k).exp_m1();
    RecommendationRule::new(
        RuleKind::GroupArgmaxMax {
            threshold: critical_value(per_group)?,
            groups,
            treatments: j,
        },
        RuleMeta {
            j: Some(j),
            kappa: Some(kappa),
            cost: Some(c),
            gamma: Some(gamma),
            degenerate: false,
        },
    )
}

/// One-sided test on the index `w'X / √(w'Σw)` at size `C`.
pub fn make_index_rule<T: Real>(w: &[T], cov: &Matrix<T>, size: T) -> Result<RecommendationRule<T>> {
    check_weights(w)?;
    if !cov.is_square() || cov.rows() != w.len() {
        return Err(Error::DimensionMismatch {
            expected: w.len(),
            found: cov.rows(),
        });
    }
    cov.check_symmetric(T::structural_tol())?;
    let var = cov.quad_form(w);
    if !(var > T::zero()) {
        return Err(Error::ZeroIndexVariance { value: var.as_f64() });
    }
    RecommendationRule::new(
        RuleKind::IndexTest {
            weights: w.to_vec(),
            threshold: critical_value(size)?,
            index_sd: var.sqrt(),
        },
        RuleMeta {
            cost: Some(size),
            ..RuleMeta::default()
        },
    )
}

/// Separate t-tests for every possible number `S ≤ J_max` of selected
/// hypotheses, each at size `C(S)/S`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct EndogenousFamily<T> {
    cost: CostFunction<T>,
    variances: Vec<T>,
    sizes: Vec<T>,
}

impl<T: Real> EndogenousFamily<T> {
    pub fn j_max(&self) -> usize {
        self.variances.len()
    }

    pub fn cost(&self) -> &CostFunction<T> {
        &self.cost
    }

    /// Per-test size for `S` selected hypotheses.
    pub fn size(&self, s: usize) -> T {
        self.sizes[s - 1]
    }

    pub fn sizes(&self) -> &[T] {
        &self.sizes
    }

    pub fn variances(&self) -> &[T] {
        &self.variances
    }

    /// Rule applied to the treatments in `selected` (indices into `0..J_max`).
    pub fn rule_for(&self, selected: &[usize]) -> Result<RecommendationRule<T>> {
        let vars: Vec<T> = selected.iter().map(|&i| self.variances[i]).collect();
        make_separate_ttests(selected.len(), &self.cost, &vars)
    }
}

/// `variances` holds the variance of each candidate treatment's estimate.
pub fn make_endogenous_family<T: Real>(
    j_max: usize,
    cost: &CostFunction<T>,
    variances: &[T],
) -> Result<EndogenousFamily<T>> {
    check_variances(j_max, variances)?;
    if variances.iter().any(|v| !(v.is_finite() && *v > T::zero())) {
        return Err(Error::InvalidArgument("variances must be finite and positive".into()));
    }
    let sizes = (1..=j_max)
        .map(|s| separate_size(s, cost))
        .collect::<Result<Vec<_>>>()?;
    Ok(EndogenousFamily {
        cost: cost.clone(),
        variances: variances.to_vec(),
        sizes,
    })
}
