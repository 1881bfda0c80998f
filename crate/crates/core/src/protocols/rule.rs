use serde::{Deserialize, Serialize};

use super::document::RuleDocument;
use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::scalar::Real;
use crate::stats::normal::norm_sf;

/// Economic primitives a rule was calibrated from.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct RuleMeta<T> {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<T>,
    /// Set when the calibrated size reached 1 and the rule degenerated to
    /// always rejecting.
    #[serde(default)]
    pub degenerate: bool,
}

/// The family of testing protocols.
///
/// All rejection events use `≥`; for continuous statistics this is
/// equivalent to `>`.
#[derive(Debug, Clone, PartialEq)]
pub enum RuleKind<T> {
    /// `r_j = 1{X_j / √Σ_jj ≥ t_j}`. A threshold of `+∞` switches component `j` off.
    SeparateThresholds {
        thresholds: Vec<T>,
        variances: Vec<T>,
    },
    /// Every component rejects iff `min_j X_j / √Σ_jj ≥ t`.
    MinStatistic {
        threshold: T,
        variances: Vec<T>,
    },
    /// Over group statistics `X̃_k`, implements group `k` iff `X̃_k` is the
    /// largest and `X̃_k ≥ t`. `groups[k]` lists the treatments in group `k`.
    GroupArgmaxMax {
        threshold: T,
        groups: Vec<Vec<usize>>,
        treatments: usize,
    },
    /// Single recommendation `1{w'X / sd ≥ t}` with `sd = √(w'Σw)` fixed at
    /// construction.
    IndexTest {
        weights: Vec<T>,
        threshold: T,
        index_sd: T,
    },
    /// Holm's step-down procedure at family level `level` on one-sided p-values.
    HolmStepDown {
        level: T,
        variances: Vec<T>,
    },
    NeverReject {
        dim: usize,
    },
    AlwaysReject {
        dim: usize,
    },
    /// Independent recommendations computed by sub-rules on the same statistic.
    Stacked(Vec<RuleKind<T>>),
}

/// A recommendation function `r(X)` together with its calibration metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RuleDocument<T>", into = "RuleDocument<T>", bound = "T: Real")]
pub struct RecommendationRule<T> {
    kind: RuleKind<T>,
    meta: RuleMeta<T>,
}

impl<T: Real> RecommendationRule<T> {
    pub fn new(kind: RuleKind<T>, meta: RuleMeta<T>) -> Result<Self> {
        kind.validate()?;
        Ok(Self { kind, meta })
    }

    pub fn separate(thresholds: Vec<T>, variances: Vec<T>) -> Result<Self> {
        Self::new(
            RuleKind::SeparateThresholds { thresholds, variances },
            RuleMeta::default(),
        )
    }

    pub fn never_reject(dim: usize) -> Self {
        Self {
            kind: RuleKind::NeverReject { dim },
            meta: RuleMeta::default(),
        }
    }

    pub fn always_reject(dim: usize) -> Self {
        Self {
            kind: RuleKind::AlwaysReject { dim },
            meta: RuleMeta::default(),
        }
    }

    pub fn holm(level: T, variances: Vec<T>) -> Result<Self> {
        Self::new(RuleKind::HolmStepDown { level, variances }, RuleMeta::default())
    }

    /// Combines single-statistic rules sharing one input into a vector rule.
    pub fn stack(rules: Vec<RecommendationRule<T>>) -> Result<Self> {
        let kinds = rules.into_iter().map(|r| r.kind).collect();
        Self::new(RuleKind::Stacked(kinds), RuleMeta::default())
    }

    pub fn kind(&self) -> &RuleKind<T> {
        &self.kind
    }

    pub fn meta(&self) -> &RuleMeta<T> {
        &self.meta
    }

    pub fn with_meta(mut self, meta: RuleMeta<T>) -> Self {
        self.meta = meta;
        self
    }

    pub fn is_degenerate(&self) -> bool {
        self.meta.degenerate
    }

    /// Dimension of the statistic `X` the rule reads.
    pub fn input_dim(&self) -> usize {
        self.kind.input_dim()
    }

    /// Number of recommendation components.
    pub fn components(&self) -> usize {
        self.kind.components()
    }

    /// Argument of the cost function: the number of treatments for group
    /// rules, the number of statistics otherwise.
    pub fn cost_dim(&self) -> usize {
        match &self.kind {
            RuleKind::GroupArgmaxMax { treatments, .. } => *treatments,
            k => k.input_dim(),
        }
    }

    /// Number of discoveries reported when component `k` fires.
    pub fn discoveries(&self, k: usize) -> usize {
        self.kind.discoveries(k)
    }

    /// Evaluates the rule on one realization of `X`.
    pub fn recommend(&self, x: &[T], out: &mut [bool]) {
        debug_assert_eq!(x.len(), self.input_dim());
        debug_assert_eq!(out.len(), self.components());
        self.kind.recommend(x, out);
    }

    /// Welfare-relevant effect of each component at `θ`: the coordinate it
    /// tests, or `w'θ` for an index.
    pub fn component_effects(&self, theta: &[T]) -> Vec<T> {
        let mut out = Vec::with_capacity(self.components());
        self.kind.effects(theta, &mut out);
        out
    }

    /// Shifts every finite threshold by `delta` (negative = more liberal).
    pub fn shifted(&self, delta: T) -> Self {
        Self {
            kind: self.kind.shifted(delta),
            meta: self.meta.clone(),
        }
    }
}

impl<T: Real> RuleKind<T> {
    fn validate(&self) -> Result<()> {
        let finite_positive = |v: &[T], what: &'static str| -> Result<()> {
            if v.is_empty() {
                return Err(Error::InvalidArgument(format!("{what} must be non-empty")));
            }
            if v.iter().any(|s| !(s.is_finite() && *s > T::zero())) {
                return Err(Error::InvalidArgument(format!("{what} must be finite and positive")));
            }
            Ok(())
        };
        let threshold_ok = |t: T| -> Result<()> {
            if t.is_nan() || t == T::neg_infinity() {
                return Err(Error::NonFinite { what: "threshold" });
            }
            Ok(())
        };
        match self {
            RuleKind::SeparateThresholds { thresholds, variances } => {
                finite_positive(variances, "variances")?;
                if thresholds.len() != variances.len() {
                    return Err(Error::DimensionMismatch {
                        expected: variances.len(),
                        found: thresholds.len(),
                    });
                }
                thresholds.iter().try_for_each(|&t| threshold_ok(t))
            }
            RuleKind::MinStatistic { threshold, variances } => {
                finite_positive(variances, "variances")?;
                threshold_ok(*threshold)
            }
            RuleKind::GroupArgmaxMax {
                threshold,
                groups,
                treatments,
            } => {
                threshold_ok(*threshold)?;
                if groups.is_empty() {
                    return Err(Error::InvalidArgument("group rule needs at least one group".into()));
                }
                for g in groups {
                    if g.is_empty() || g.iter().any(|&j| j >= *treatments) {
                        return Err(Error::InvalidArgument(format!(
                            "group {g:?} is empty or references a treatment outside 0..{treatments}"
                        )));
                    }
                    let mut sorted = g.clone();
                    sorted.sort_unstable();
                    sorted.dedup();
                    if sorted.len() != g.len() {
                        return Err(Error::InvalidArgument(format!("group {g:?} repeats a treatment")));
                    }
                }
                Ok(())
            }
            RuleKind::IndexTest {
                weights,
                threshold,
                index_sd,
            } => {
                threshold_ok(*threshold)?;
                check_weights(weights)?;
                if !(index_sd.is_finite() && *index_sd > T::zero()) {
                    return Err(Error::ZeroIndexVariance {
                        value: (*index_sd * *index_sd).as_f64(),
                    });
                }
                Ok(())
            }
            RuleKind::HolmStepDown { level, variances } => {
                finite_positive(variances, "variances")?;
                if !(*level > T::zero() && *level < T::one()) {
                    return Err(Error::InvalidProbability { value: level.as_f64() });
                }
                Ok(())
            }
            RuleKind::NeverReject { dim } | RuleKind::AlwaysReject { dim } => {
                if *dim == 0 {
                    return Err(Error::InvalidArgument("dimension must be positive".into()));
                }
                Ok(())
            }
            RuleKind::Stacked(parts) => {
                let first = parts
                    .first()
                    .ok_or_else(|| Error::InvalidArgument("stacked rule is empty".into()))?;
                for p in parts {
                    p.validate()?;
                    if p.input_dim() != first.input_dim() {
                        return Err(Error::DimensionMismatch {
                            expected: first.input_dim(),
                            found: p.input_dim(),
                        });
                    }
                }
                Ok(())
            }
        }
    }

    fn input_dim(&self) -> usize {
        match self {
            RuleKind::SeparateThresholds { variances, .. }
            | RuleKind::MinStatistic { variances, .. }
            | RuleKind::HolmStepDown { variances, .. } => variances.len(),
            RuleKind::GroupArgmaxMax { groups, .. } => groups.len(),
            RuleKind::IndexTest { weights, .. } => weights.len(),
            RuleKind::NeverReject { dim } | RuleKind::AlwaysReject { dim } => *dim,
            RuleKind::Stacked(parts) => parts.first().map_or(0, RuleKind::input_dim),
        }
    }

    fn components(&self) -> usize {
        match self {
            RuleKind::IndexTest { .. } => 1,
            RuleKind::Stacked(parts) => parts.iter().map(RuleKind::components).sum(),
            k => k.input_dim(),
        }
    }

    fn discoveries(&self, k: usize) -> usize {
        match self {
            RuleKind::GroupArgmaxMax { groups, .. } => groups[k].len(),
            RuleKind::Stacked(parts) => {
                let mut k = k;
                for p in parts {
                    if k < p.components() {
                        return p.discoveries(k);
                    }
                    k -= p.components();
                }
                unreachable!("component index out of range")
            }
            _ => 1,
        }
    }

    fn recommend(&self, x: &[T], out: &mut [bool]) {
        match self {
            RuleKind::SeparateThresholds { thresholds, variances } => {
                for j in 0..x.len() {
                    out[j] = x[j] / variances[j].sqrt() >= thresholds[j];
                }
            }
            RuleKind::MinStatistic { threshold, variances } => {
                let all = x.iter().zip(variances).all(|(&xj, &v)| xj / v.sqrt() >= *threshold);
                out.iter_mut().for_each(|o| *o = all);
            }
            RuleKind::GroupArgmaxMax { threshold, .. } => {
                out.iter_mut().for_each(|o| *o = false);
                let (best, &top) = x
                    .iter()
                    .enumerate()
                    .fold((0, &x[0]), |acc, (i, v)| if *v > *acc.1 { (i, v) } else { acc });
                if top >= *threshold {
                    out[best] = true;
                }
            }
            RuleKind::IndexTest {
                weights,
                threshold,
                index_sd,
            } => {
                out[0] = dot(weights, x) / *index_sd >= *threshold;
            }
            RuleKind::HolmStepDown { level, variances } => {
                let m = x.len();
                let mut order: Vec<(T, usize)> = x
                    .iter()
                    .zip(variances)
                    .enumerate()
                    .map(|(j, (&xj, &v))| (norm_sf(xj / v.sqrt()), j))
                    .collect();
                order.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
                out.iter_mut().for_each(|o| *o = false);
                for (rank, &(p, j)) in order.iter().enumerate() {
                    if p <= *level / T::from_usize_lossy(m - rank) {
                        out[j] = true;
                    } else {
                        break;
                    }
                }
            }
            RuleKind::NeverReject { .. } => out.iter_mut().for_each(|o| *o = false),
            RuleKind::AlwaysReject { .. } => out.iter_mut().for_each(|o| *o = true),
            RuleKind::Stacked(parts) => {
                let mut offset = 0;
                for p in parts {
                    let c = p.components();
                    p.recommend(x, &mut out[offset..offset + c]);
                    offset += c;
                }
            }
        }
    }

    fn effects(&self, theta: &[T], out: &mut Vec<T>) {
        match self {
            RuleKind::IndexTest { weights, .. } => out.push(dot(weights, theta)),
            RuleKind::Stacked(parts) => parts.iter().for_each(|p| p.effects(theta, out)),
            _ => out.extend_from_slice(theta),
        }
    }

    fn shifted(&self, delta: T) -> Self {
        let mv = |t: T| if t.is_finite() { t + delta } else { t };
        match self {
            RuleKind::SeparateThresholds { thresholds, variances } => RuleKind::SeparateThresholds {
                thresholds: thresholds.iter().map(|&t| mv(t)).collect(),
                variances: variances.clone(),
            },
            RuleKind::MinStatistic { threshold, variances } => RuleKind::MinStatistic {
                threshold: mv(*threshold),
                variances: variances.clone(),
            },
            RuleKind::GroupArgmaxMax {
                threshold,
                groups,
                treatments,
            } => RuleKind::GroupArgmaxMax {
                threshold: mv(*threshold),
                groups: groups.clone(),
                treatments: *treatments,
            },
            RuleKind::IndexTest {
                weights,
                threshold,
                index_sd,
            } => RuleKind::IndexTest {
                weights: weights.clone(),
                threshold: mv(*threshold),
                index_sd: *index_sd,
            },
            RuleKind::Stacked(parts) => RuleKind::Stacked(parts.iter().map(|p| p.shifted(delta)).collect()),
            other => other.clone(),
        }
    }
}

pub(crate) fn check_weights<T: Real>(w: &[T]) -> Result<()> {
    if w.is_empty() || w.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("weights must be non-empty and finite".into()));
    }
    let sum: T = w.iter().copied().sum();
    if (sum - T::one()).abs() > T::structural_tol() {
        return Err(Error::WeightsDoNotSumToOne { sum: sum.as_f64() });
    }
    Ok(())
}
