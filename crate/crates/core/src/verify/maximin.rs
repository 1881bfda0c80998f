use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::space::{Grid, NullRegion, ParameterSpace};
use crate::error::{Error, Result};
use crate::game::{play, GameOutcome, WelfareSpec};
use crate::linalg::Matrix;
use crate::protocols::{CostFunction, PublicationRule, RecommendationRule, RuleKind};
use crate::scalar::Real;
use crate::stats::{GaussianModel, Method};

/// Everything that defines the game except `θ`.
#[derive(Debug, Clone)]
pub struct GameSpec<T> {
    pub rule: RecommendationRule<T>,
    pub welfare: WelfareSpec<T>,
    pub publication: PublicationRule<T>,
    pub cost: CostFunction<T>,
    base: GaussianModel<T>,
}

fn default_cov<T: Real>(kind: &RuleKind<T>) -> Matrix<T> {
    match kind {
        RuleKind::SeparateThresholds { variances, .. }
        | RuleKind::MinStatistic { variances, .. }
        | RuleKind::HolmStepDown { variances, .. } => Matrix::from_diag(variances),
        RuleKind::GroupArgmaxMax { groups, .. } => Matrix::identity(groups.len()),
        RuleKind::IndexTest { weights, .. } => Matrix::identity(weights.len()),
        RuleKind::NeverReject { dim } | RuleKind::AlwaysReject { dim } => Matrix::identity(*dim),
        RuleKind::Stacked(parts) => default_cov(&parts[0]),
    }
}

impl<T: Real> GameSpec<T> {
    /// Uses the covariance the rule was standardized with: the diagonal of
    /// its variances, or the identity for rules that do not store one.
    pub fn new(
        rule: RecommendationRule<T>,
        welfare: WelfareSpec<T>,
        publication: PublicationRule<T>,
        cost: CostFunction<T>,
    ) -> Result<Self> {
        let cov = default_cov(rule.kind());
        Self::with_cov(rule, welfare, publication, cost, cov)
    }

    pub fn with_cov(
        rule: RecommendationRule<T>,
        welfare: WelfareSpec<T>,
        publication: PublicationRule<T>,
        cost: CostFunction<T>,
        cov: Matrix<T>,
    ) -> Result<Self> {
        welfare.validate()?;
        publication.validate()?;
        let base = GaussianModel::new(vec![T::zero(); cov.rows()], cov)?;
        if base.dim() != rule.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: rule.input_dim(),
                found: base.dim(),
            });
        }
        Ok(Self {
            rule,
            welfare,
            publication,
            cost,
            base,
        })
    }

    pub fn cov(&self) -> &Matrix<T> {
        self.base.cov()
    }

    pub fn model_at(&self, mean: Vec<T>) -> Result<GaussianModel<T>> {
        self.base.with_mean(mean)
    }

    pub fn play_at(&self, mean: Vec<T>, method: &Method) -> Result<GameOutcome<T>> {
        let model = self.model_at(mean)?;
        play(&self.rule, &self.welfare, &self.publication, &model, &self.cost, method)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Deterrence on the null region and nonnegative welfare elsewhere.
    Strong,
    /// Deterrence on the null region only.
    Weak,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ladder {
    ClosedForm,
    MonteCarlo,
}

/// Tolerance floor for closed-form evaluations.
pub fn closed_form_floor<T: Real>() -> T {
    T::lit(1e-9).max(T::structural_tol() * T::lit(10.0))
}

/// Standard errors allowed on Monte Carlo evaluations.
pub const MC_SIGMAS: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct Witness<T> {
    /// Grid point in the parameter box.
    pub theta: Vec<T>,
    /// Model mean it maps to (differs from `theta` only for embedded spaces).
    pub mean: Vec<T>,
    pub value: T,
    pub std_error: T,
    pub grid_index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct GridMeta<T> {
    pub dim: usize,
    pub model_dim: usize,
    pub bounds: Vec<(T, T)>,
    pub points_per_axis: Vec<usize>,
    pub total_points: usize,
    pub null_points: usize,
    pub complement_points: usize,
    pub null_region: NullRegion,
}

/// Grid evidence for (weak) maximin optimality.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct VerificationReport<T> {
    pub passed: bool,
    pub mode: Mode,
    pub ladder: Ladder,
    /// Tolerance applied to closed-form values; simulated values get
    /// `max(tolerance, 4 SE)` point by point.
    pub tolerance: T,
    /// Largest researcher utility on the null region.
    pub worst_null_beta: Option<Witness<T>>,
    /// Smallest editor utility off the null region (strong mode only).
    pub worst_alt_welfare: Option<Witness<T>>,
    pub null_violations: usize,
    pub complement_violations: usize,
    pub grid: GridMeta<T>,
}

struct PointEval<T> {
    index: usize,
    in_null: bool,
    value: T,
    se: T,
    simulated: bool,
}

/// Evaluates every grid point in parallel; results come back in index order.
fn sweep<T: Real>(
    spec: &GameSpec<T>,
    space: &ParameterSpace<T>,
    grid: &Grid<T>,
    method: &Method,
    mode: Mode,
) -> Result<Vec<Option<PointEval<T>>>> {
    (0..grid.len())
        .into_par_iter()
        .map(|index| {
            let mean = space.embed(&grid.point(index));
            let in_null = space.null_region.contains(&spec.welfare.utilities(&mean));
            if !in_null && mode == Mode::Weak {
                return Ok(None);
            }
            let g = spec.play_at(mean, &method.for_stream(index as u64))?;
            let (value, se) = if in_null {
                (g.researcher_utility, g.researcher_std_error)
            } else {
                (g.editor_utility, g.welfare_std_error)
            };
            Ok(Some(PointEval {
                index,
                in_null,
                value,
                se,
                simulated: g.simulated,
            }))
        })
        .collect()
}

/// Checks `β ≤ tol` on the null region and, in strong mode, `v ≥ −tol` on its
/// complement, over the grid of `space`.
///
/// Verification failures are reported, not raised; errors mean the inputs
/// are inconsistent.
pub fn check_maximin<T: Real>(
    spec: &GameSpec<T>,
    space: &ParameterSpace<T>,
    tol: T,
    mode: Mode,
    method: &Method,
) -> Result<VerificationReport<T>> {
    space.validate()?;
    if space.model_dim() != spec.rule.input_dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.rule.input_dim(),
            found: space.model_dim(),
        });
    }
    if let Some(cfg) = method.mc_config() {
        if cfg.n_draws < crate::stats::McConfig::MIN_VERDICT_DRAWS {
            return Err(Error::InvalidArgument(format!(
                "verification verdicts need at least {} Monte Carlo draws",
                crate::stats::McConfig::MIN_VERDICT_DRAWS
            )));
        }
    }
    let tol = tol.max(closed_form_floor());
    let axes = space.axes();
    let points_per_axis = axes.iter().map(Vec::len).collect();
    let grid = Grid::new(axes);
    let evals = sweep(spec, space, &grid, method, mode)?;

    let sigmas = T::lit(MC_SIGMAS);
    let allowed = |e: &PointEval<T>| tol.max(sigmas * e.se);
    let witness = |e: &PointEval<T>| {
        let theta = grid.point(e.index);
        Witness {
            mean: space.embed(&theta),
            theta,
            value: e.value,
            std_error: e.se,
            grid_index: e.index,
        }
    };
    let mut worst_null: Option<&PointEval<T>> = None;
    let mut worst_alt: Option<&PointEval<T>> = None;
    let (mut null_points, mut alt_points, mut null_bad, mut alt_bad) = (0, 0, 0, 0);
    let mut simulated = false;
    // sequential in index order, so ties resolve to the lowest index
    for e in evals.iter().flatten() {
        simulated |= e.simulated;
        if e.in_null {
            null_points += 1;
            if e.value > allowed(e) {
                null_bad += 1;
            }
            if worst_null.is_none_or(|w| e.value > w.value) {
                worst_null = Some(e);
            }
        } else {
            alt_points += 1;
            if e.value < -allowed(e) {
                alt_bad += 1;
            }
            if worst_alt.is_none_or(|w| e.value < w.value) {
                worst_alt = Some(e);
            }
        }
    }
    let complement_points = match mode {
        Mode::Strong => alt_points,
        Mode::Weak => grid.len() - null_points,
    };
    Ok(VerificationReport {
        passed: null_bad == 0 && alt_bad == 0,
        mode,
        ladder: if simulated {
            Ladder::MonteCarlo
        } else {
            Ladder::ClosedForm
        },
        tolerance: tol,
        worst_null_beta: worst_null.map(witness),
        worst_alt_welfare: worst_alt.map(witness),
        null_violations: null_bad,
        complement_violations: alt_bad,
        grid: GridMeta {
            dim: space.dim(),
            model_dim: space.model_dim(),
            bounds: space.bounds.clone(),
            points_per_axis,
            total_points: grid.len(),
            null_points,
            complement_points,
            null_region: space.null_region,
        },
    })
}
