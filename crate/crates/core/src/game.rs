//! Researcher and editor utilities, and the best responses built on them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};
use crate::protocols::{
    CostFunction, EndogenousFamily, PublicationRule, RecommendationRule, RuleKind, MAX_ENUMERATION,
};
use crate::scalar::Real;
use crate::stats::{summarize, DiscoverySummary, Estimate, GaussianModel, Method};

/// Social welfare of the implemented recommendations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "welfare", bound = "T: Real")]
pub enum WelfareSpec<T> {
    /// Implementing treatment `j` is worth `θ_j`; a combination is worth the
    /// sum over its members.
    Additive,
    /// `θ` is indexed by treatment combinations and implementing combination
    /// `k` is worth `θ_k`.
    General { treatments: usize },
    /// Policy-maker `j` values outcomes through column `j` of the `G × J`
    /// matrix, `u_j(θ) = w_j'θ`.
    OutcomesPolicyMakers { weights: Matrix<T> },
}

impl<T: Real> WelfareSpec<T> {
    pub fn outcomes(weights: Matrix<T>) -> Result<Self> {
        let spec = WelfareSpec::OutcomesPolicyMakers { weights };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            WelfareSpec::OutcomesPolicyMakers { weights } => {
                if weights.rows() == 0 || weights.cols() == 0 {
                    return Err(Error::InvalidArgument("policy-maker weight matrix is empty".into()));
                }
                for j in 0..weights.cols() {
                    let col = weights.column(j);
                    if col.iter().any(|v| !v.is_finite()) {
                        return Err(Error::NonFinite {
                            what: "policy-maker weights",
                        });
                    }
                    let sum: T = col.iter().copied().sum();
                    if (sum - T::one()).abs() > T::structural_tol() {
                        return Err(Error::WeightsDoNotSumToOne { sum: sum.as_f64() });
                    }
                }
                Ok(())
            }
            WelfareSpec::General { treatments } if *treatments == 0 => Err(Error::InvalidArgument(
                "general welfare needs at least one treatment".into(),
            )),
            _ => Ok(()),
        }
    }

    /// Utilities whose signs define the null region: each treatment (or
    /// combination) effect, or each policy-maker's welfare.
    pub fn utilities(&self, theta: &[T]) -> Vec<T> {
        match self {
            WelfareSpec::Additive | WelfareSpec::General { .. } => theta.to_vec(),
            WelfareSpec::OutcomesPolicyMakers { weights } => weights.tr_mul_vec(theta),
        }
    }

    /// Welfare of implementing the treatments in `members` together.
    pub fn combination_welfare(&self, theta: &[T], members: &[usize]) -> Result<T> {
        match self {
            WelfareSpec::Additive => Ok(members.iter().map(|&j| theta[j]).sum()),
            _ => Err(Error::Unsupported(
                "combination welfare is defined by the coordinates only for additive welfare".into(),
            )),
        }
    }
}

/// Result of one play of the game at a fixed `θ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct GameOutcome<T> {
    pub experimented: bool,
    /// `β_r(θ)`.
    pub researcher_utility: T,
    /// `v_r(θ)`.
    pub editor_utility: T,
    /// Expected welfare of the implemented decisions given experimentation.
    pub conditional_welfare: T,
    /// The researcher was indifferent and the editor's preference decided.
    pub tie_broken: bool,
    /// Monte Carlo standard errors of `β` and of the conditional welfare;
    /// zero for closed forms.
    pub researcher_std_error: T,
    pub welfare_std_error: T,
    pub simulated: bool,
}

/// Everything the utilities need from one evaluation of the rule at `θ`.
struct Evaluated<T> {
    beta: Estimate<T>,
    welfare: Estimate<T>,
    simulated: bool,
}

fn needs_joint<T: Real>(publication: &PublicationRule<T>) -> bool {
    !matches!(publication, PublicationRule::Linear)
}

fn evaluate<T: Real>(
    rule: &RecommendationRule<T>,
    welfare: &WelfareSpec<T>,
    publication: &PublicationRule<T>,
    model: &GaussianModel<T>,
    cost: &CostFunction<T>,
    method: &Method,
) -> Result<Evaluated<T>> {
    publication.validate()?;
    welfare.validate()?;
    let c = cost.eval(rule.cost_dim())?;
    let s = summarize(rule, model, publication.kappa(), needs_joint(publication), method)?;
    let beta = researcher_from(&s, publication, c)?;
    let welfare = welfare_from(&s, rule, welfare, publication, model)?;
    Ok(Evaluated {
        beta,
        welfare,
        simulated: s.simulated,
    })
}

fn researcher_from<T: Real>(s: &DiscoverySummary<T>, publication: &PublicationRule<T>, c: T) -> Result<Estimate<T>> {
    let missing = || Error::NeedsSimulation("the joint discovery law");
    Ok(match publication {
        PublicationRule::Linear => s.expected_discoveries.map(|v| v - c),
        PublicationRule::Threshold { gamma, .. } => {
            let p = s.at_least_kappa.ok_or_else(missing)?;
            Estimate {
                value: *gamma * p.value - c,
                std_error: *gamma * p.std_error,
                simulated: p.simulated,
            }
        }
        PublicationRule::Malevolent => s.fdp.ok_or_else(missing)?.map(|v| v - c),
    })
}

fn welfare_from<T: Real>(
    s: &DiscoverySummary<T>,
    rule: &RecommendationRule<T>,
    welfare: &WelfareSpec<T>,
    publication: &PublicationRule<T>,
    model: &GaussianModel<T>,
) -> Result<Estimate<T>> {
    let theta = model.mean();
    let effects = rule.component_effects(theta);
    let unfiltered = || {
        let value = s.marginals.iter().zip(&effects).map(|(p, e)| p.value * *e).sum();
        // conservative: standard errors added in absolute value
        let se = s
            .marginals
            .iter()
            .zip(&effects)
            .map(|(p, e)| p.std_error * e.abs())
            .sum();
        Estimate {
            value,
            std_error: se,
            simulated: s.simulated,
        }
    };
    let filtered = || -> Result<Estimate<T>> {
        match publication {
            PublicationRule::Threshold { .. } => s
                .filtered_welfare
                .ok_or(Error::NeedsSimulation("the joint discovery law")),
            _ => Ok(unfiltered()),
        }
    };
    match welfare {
        WelfareSpec::Additive => filtered(),
        WelfareSpec::General { .. } => {
            if matches!(rule.kind(), RuleKind::IndexTest { .. }) || rule.components() != model.dim() {
                return Err(Error::Unsupported(
                    "general welfare needs one recommendation per combination coordinate".into(),
                ));
            }
            filtered()
        }
        WelfareSpec::OutcomesPolicyMakers { weights } => {
            if weights.rows() != model.dim() {
                return Err(Error::DimensionMismatch {
                    expected: weights.rows(),
                    found: model.dim(),
                });
            }
            if weights.cols() != rule.components() {
                return Err(Error::DimensionMismatch {
                    expected: weights.cols(),
                    found: rule.components(),
                });
            }
            // worst-off policy-maker
            let mut worst: Option<Estimate<T>> = None;
            for (j, p) in s.marginals.iter().enumerate() {
                let u = dot(&weights.column(j), theta);
                let cand = Estimate {
                    value: p.value * u,
                    std_error: p.std_error * u.abs(),
                    simulated: p.simulated,
                };
                if worst.is_none_or(|w| cand.value < w.value) {
                    worst = Some(cand);
                }
            }
            Ok(worst.expect("at least one policy-maker"))
        }
    }
}

/// `β_r(θ)`: the researcher's expected reward net of the research cost.
pub fn researcher_utility<T: Real>(
    rule: &RecommendationRule<T>,
    publication: &PublicationRule<T>,
    model: &GaussianModel<T>,
    cost: &CostFunction<T>,
    method: &Method,
) -> Result<Estimate<T>> {
    publication.validate()?;
    let c = cost.eval(rule.cost_dim())?;
    let s = summarize(rule, model, publication.kappa(), needs_joint(publication), method)?;
    researcher_from(&s, publication, c)
}

/// `v_r(θ)`: welfare if the researcher experiments, zero if deterred; at
/// indifference the editor's preferred branch.
pub fn editor_utility<T: Real>(
    rule: &RecommendationRule<T>,
    welfare: &WelfareSpec<T>,
    publication: &PublicationRule<T>,
    model: &GaussianModel<T>,
    cost: &CostFunction<T>,
    method: &Method,
) -> Result<T> {
    Ok(play(rule, welfare, publication, model, cost, method)?.editor_utility)
}

/// Evaluates both players' utilities at the model's `θ`.
///
/// Indifference is `|β| ≤ tol` where `tol` is the structural tolerance of
/// `T` plus four Monte Carlo standard errors when `β` is simulated.
pub fn play<T: Real>(
    rule: &RecommendationRule<T>,
    welfare: &WelfareSpec<T>,
    publication: &PublicationRule<T>,
    model: &GaussianModel<T>,
    cost: &CostFunction<T>,
    method: &Method,
) -> Result<GameOutcome<T>> {
    let e = evaluate(rule, welfare, publication, model, cost, method)?;
    Ok(resolve(e))
}

fn resolve<T: Real>(e: Evaluated<T>) -> GameOutcome<T> {
    let band = T::structural_tol() + T::lit(4.0) * e.beta.std_error;
    let beta = e.beta.value;
    let w = e.welfare.value;
    let (experimented, v, tie) = if beta.abs() <= band {
        (w > T::zero(), w.max(T::zero()), true)
    } else if beta > T::zero() {
        (true, w, false)
    } else {
        (false, T::zero(), false)
    };
    GameOutcome {
        experimented,
        researcher_utility: beta,
        editor_utility: v,
        conditional_welfare: w,
        tie_broken: tie,
        researcher_std_error: e.beta.std_error,
        welfare_std_error: e.welfare.std_error,
        simulated: e.simulated,
    }
}

/// Researcher's choice of which hypotheses to test.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct SubsetChoice<T> {
    /// `s*` as an indicator vector over the candidate treatments.
    pub selection: Vec<bool>,
    pub selected: Vec<usize>,
    pub outcome: GameOutcome<T>,
}

/// Exhaustive best response over all `2^J` selections under a linear
/// publication rule and additive welfare.
///
/// Ties in researcher utility (within the structural tolerance) go to the
/// higher editor utility, then to the smaller selection, then to the lowest
/// bitmask. The empty selection is not experimenting: `β = v = 0`.
pub fn best_subset<T: Real>(theta: &[T], family: &EndogenousFamily<T>, method: &Method) -> Result<SubsetChoice<T>> {
    let j = family.j_max();
    if theta.len() != j {
        return Err(Error::DimensionMismatch {
            expected: j,
            found: theta.len(),
        });
    }
    if j > MAX_ENUMERATION {
        return Err(Error::EnumerationTooLarge {
            j,
            max: MAX_ENUMERATION,
        });
    }
    let none = GameOutcome {
        experimented: false,
        researcher_utility: T::zero(),
        editor_utility: T::zero(),
        conditional_welfare: T::zero(),
        tie_broken: false,
        researcher_std_error: T::zero(),
        welfare_std_error: T::zero(),
        simulated: false,
    };
    let mut best = (0u32, none);
    let tol = T::structural_tol();
    for mask in 1u32..(1u32 << j) {
        let selected: Vec<usize> = (0..j).filter(|&i| mask >> i & 1 == 1).collect();
        let rule = family.rule_for(&selected)?;
        let mean: Vec<T> = selected.iter().map(|&i| theta[i]).collect();
        let vars: Vec<T> = selected.iter().map(|&i| family.variances()[i]).collect();
        let model = GaussianModel::independent(mean, &vars)?;
        let e = evaluate(
            &rule,
            &WelfareSpec::Additive,
            &PublicationRule::Linear,
            &model,
            family.cost(),
            &method.for_stream(mask as u64),
        )?;
        let beta = e.beta.value;
        let welfare = e.welfare.value;
        let cand = resolve(e);
        let inc = &best.1;
        let better = if beta > inc.researcher_utility + tol {
            true
        } else if beta < inc.researcher_utility - tol {
            false
        } else if welfare > inc.conditional_welfare + tol {
            true
        } else if welfare < inc.conditional_welfare - tol {
            false
        } else {
            mask.count_ones() < best.0.count_ones()
        };
        if better {
            best = (mask, cand);
        }
    }
    let (mask, outcome) = best;
    let selection: Vec<bool> = (0..j).map(|i| mask >> i & 1 == 1).collect();
    Ok(SubsetChoice {
        selected: (0..j).filter(|&i| selection[i]).collect(),
        selection,
        outcome,
    })
}
