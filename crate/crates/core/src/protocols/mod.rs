//! Cost functions, publication rules and the constructors of the optimal
//! testing protocols.

mod construct;
mod cost;
mod document;
mod pstar;
mod publication;
mod rule;
mod weights;

pub use construct::{
    combinations_at_least, make_endogenous_family, make_group_max_rule, make_index_rule, make_min_statistic_rule,
    make_separate_ttests, make_threshold_pub_ttests, separate_size, EndogenousFamily, MAX_ENUMERATION,
};
pub use cost::{CostFunction, CostRegime, VariableCost};
pub use document::{RuleDocument, Variant};
pub use pstar::{pstar_polynomial, solve_pstar, solve_pstar_bisection};
pub use publication::PublicationRule;
pub use rule::{RecommendationRule, RuleKind, RuleMeta};
pub use weights::{factor_index_rule, factor_index_weights, variance_min_weights, FactorIndex};
