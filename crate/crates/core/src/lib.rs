//! Multiple hypothesis testing as a game between a researcher and an editor.
//!
//! Everything numeric is generic over [`scalar::Real`] (`f32` or `f64`); the
//! aliases at the bottom fix the scalar to `f64`.

// `!(x > 0)` is deliberate: NaN has to fail these checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod game;
pub mod linalg;
pub mod outcomes;
pub mod protocols;
pub mod scalar;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};
pub use game::{best_subset, editor_utility, play, researcher_utility, GameOutcome, SubsetChoice, WelfareSpec};
pub use protocols::{CostFunction, PublicationRule, RecommendationRule, RuleKind};
pub use scalar::Real;
pub use stats::{GaussianModel, McConfig, Method};
pub use verify::{check_maximin, error_rates, local_power, GameSpec, Mode, NullRegion, ParameterSpace};

pub type Matrix = linalg::Matrix<f64>;
pub type Rule = protocols::RecommendationRule<f64>;
pub type Cost = protocols::CostFunction<f64>;
pub type Publication = protocols::PublicationRule<f64>;
pub type Welfare = game::WelfareSpec<f64>;
pub type Model = stats::GaussianModel<f64>;
pub type Outcome = game::GameOutcome<f64>;
pub type Space = verify::ParameterSpace<f64>;
pub type Spec = verify::GameSpec<f64>;
pub type Report = verify::VerificationReport<f64>;
pub type Trial = outcomes::SyntheticTrial<f64>;
