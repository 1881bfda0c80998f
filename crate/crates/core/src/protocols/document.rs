//! JSON schema for rule files.
//!
//! ```json
//! {
//!   "variant": "separate_thresholds",
//!   "thresholds": [2.0537489106318225, 2.0537489106318225],
//!   "variances": [1.0, 1.0],
//!   "metadata": { "j": 2, "cost": 0.1, "degenerate": false }
//! }
//! ```
//!
//! `null` in `thresholds` stands for a component that never rejects.

use serde::{Deserialize, Serialize};

use super::rule::{RecommendationRule, RuleKind, RuleMeta};
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    SeparateThresholds,
    MinStatistic,
    GroupArgmaxMax,
    IndexTest,
    HolmStepDown,
    NeverReject,
    AlwaysReject,
    Stacked,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", deny_unknown_fields)]
pub struct RuleDocument<T> {
    pub variant: Variant,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<Vec<Option<T>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variances: Option<Vec<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index_sd: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groups: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub treatments: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parts: Option<Vec<RuleDocument<T>>>,
    #[serde(default)]
    pub metadata: RuleMeta<T>,
}

impl<T: Real> RuleDocument<T> {
    fn bare(variant: Variant) -> Self {
        Self {
            variant,
            thresholds: None,
            variances: None,
            weights: None,
            index_sd: None,
            groups: None,
            treatments: None,
            level: None,
            dim: None,
            parts: None,
            metadata: RuleMeta::default(),
        }
    }

    fn from_kind(kind: &RuleKind<T>) -> Self {
        let enc = |t: T| if t == T::infinity() { None } else { Some(t) };
        match kind {
            RuleKind::SeparateThresholds { thresholds, variances } => Self {
                thresholds: Some(thresholds.iter().map(|&t| enc(t)).collect()),
                variances: Some(variances.clone()),
                ..Self::bare(Variant::SeparateThresholds)
            },
            RuleKind::MinStatistic { threshold, variances } => Self {
                thresholds: Some(vec![enc(*threshold)]),
                variances: Some(variances.clone()),
                ..Self::bare(Variant::MinStatistic)
            },
            RuleKind::GroupArgmaxMax {
                threshold,
                groups,
                treatments,
            } => Self {
                thresholds: Some(vec![enc(*threshold)]),
                groups: Some(groups.clone()),
                treatments: Some(*treatments),
                ..Self::bare(Variant::GroupArgmaxMax)
            },
            RuleKind::IndexTest {
                weights,
                threshold,
                index_sd,
            } => Self {
                thresholds: Some(vec![enc(*threshold)]),
                weights: Some(weights.clone()),
                index_sd: Some(*index_sd),
                ..Self::bare(Variant::IndexTest)
            },
            RuleKind::HolmStepDown { level, variances } => Self {
                level: Some(*level),
                variances: Some(variances.clone()),
                ..Self::bare(Variant::HolmStepDown)
            },
            RuleKind::NeverReject { dim } => Self {
                dim: Some(*dim),
                ..Self::bare(Variant::NeverReject)
            },
            RuleKind::AlwaysReject { dim } => Self {
                dim: Some(*dim),
                ..Self::bare(Variant::AlwaysReject)
            },
            RuleKind::Stacked(parts) => Self {
                parts: Some(parts.iter().map(Self::from_kind).collect()),
                ..Self::bare(Variant::Stacked)
            },
        }
    }

    fn into_kind(self) -> Result<RuleKind<T>> {
        fn need<V>(v: Option<V>, field: &str, variant: Variant) -> Result<V> {
            v.ok_or_else(|| Error::InvalidArgument(format!("{variant:?} rule requires `{field}`")))
        }
        let dec = |t: Option<T>| t.unwrap_or_else(T::infinity);
        let v = self.variant;
        let single = |ts: Option<Vec<Option<T>>>| -> Result<T> {
            let ts = need(ts, "thresholds", v)?;
            match ts.as_slice() {
                [t] => Ok(dec(*t)),
                _ => Err(Error::InvalidArgument(format!(
                    "{v:?} rule takes exactly one threshold, got {}",
                    ts.len()
                ))),
            }
        };
        Ok(match v {
            Variant::SeparateThresholds => RuleKind::SeparateThresholds {
                thresholds: need(self.thresholds, "thresholds", v)?.into_iter().map(dec).collect(),
                variances: need(self.variances, "variances", v)?,
            },
            Variant::MinStatistic => RuleKind::MinStatistic {
                threshold: single(self.thresholds)?,
                variances: need(self.variances, "variances", v)?,
            },
            Variant::GroupArgmaxMax => RuleKind::GroupArgmaxMax {
                threshold: single(self.thresholds)?,
                groups: need(self.groups, "groups", v)?,
                treatments: need(self.treatments, "treatments", v)?,
            },
            Variant::IndexTest => RuleKind::IndexTest {
                threshold: single(self.thresholds)?,
                weights: need(self.weights, "weights", v)?,
                index_sd: need(self.index_sd, "index_sd", v)?,
            },
            Variant::HolmStepDown => RuleKind::HolmStepDown {
                level: need(self.level, "level", v)?,
                variances: need(self.variances, "variances", v)?,
            },
            Variant::NeverReject => RuleKind::NeverReject {
                dim: need(self.dim, "dim", v)?,
            },
            Variant::AlwaysReject => RuleKind::AlwaysReject {
                dim: need(self.dim, "dim", v)?,
            },
            Variant::Stacked => RuleKind::Stacked(
                need(self.parts, "parts", v)?
                    .into_iter()
                    .map(Self::into_kind)
                    .collect::<Result<_>>()?,
            ),
        })
    }
}

impl<T: Real> From<RecommendationRule<T>> for RuleDocument<T> {
    fn from(rule: RecommendationRule<T>) -> Self {
        Self {
            metadata: rule.meta().clone(),
            ..Self::from_kind(rule.kind())
        }
    }
}

impl<T: Real> TryFrom<RuleDocument<T>> for RecommendationRule<T> {
    type Error = Error;

    fn try_from(doc: RuleDocument<T>) -> Result<Self> {
        let meta = doc.metadata.clone();
        RecommendationRule::new(doc.into_kind()?, meta)
    }
}
