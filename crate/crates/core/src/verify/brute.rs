use serde::{Deserialize, Serialize};

use super::maximin::{check_maximin, GameSpec, Mode};
use super::power::local_power;
use super::space::ParameterSpace;
use crate::error::{Error, Result};
use crate::game::WelfareSpec;
use crate::protocols::{CostFunction, PublicationRule, RecommendationRule};
use crate::scalar::Real;
use crate::stats::Method;

/// Largest `J` the brute-force search accepts.
pub const MAX_BRUTE_FORCE_J: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdSearch {
    /// One common threshold for all tests.
    Symmetric,
    /// Every combination of grid values, one per test.
    Product,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceConfig<T> {
    /// Candidate standardized thresholds; `+∞` means the test never rejects.
    pub thresholds: Vec<T>,
    pub search: ThresholdSearch,
    pub epsilon: T,
    pub tol: T,
    pub runner_ups: usize,
}

impl<T: Real> BruteForceConfig<T> {
    pub fn new(thresholds: Vec<T>, search: ThresholdSearch) -> Self {
        Self {
            thresholds,
            search,
            epsilon: T::lit(0.01),
            tol: T::lit(1e-9),
            runner_ups: 5,
        }
    }

    /// `lo, lo + step, …` up to `hi` inclusive.
    pub fn range(lo: T, hi: T, step: T, search: ThresholdSearch) -> Result<Self> {
        if !(step > T::zero() && lo.is_finite() && hi.is_finite() && hi >= lo) {
            return Err(Error::InvalidArgument(
                "threshold range needs lo ≤ hi and a positive step".into(),
            ));
        }
        let n = ((hi - lo) / step + T::lit(1e-9)).floor().to_usize().unwrap_or(0);
        Ok(Self::new(
            (0..=n).map(|i| lo + step * T::from_usize_lossy(i)).collect(),
            search,
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct Candidate<T> {
    pub thresholds: Vec<T>,
    pub local_power: T,
    pub worst_null_beta: T,
}

/// Two maximin rules neither of which has higher welfare everywhere.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct Crossing<T> {
    pub first: Vec<T>,
    pub second: Vec<T>,
    /// Point where the first rule has strictly higher welfare, with both values.
    pub first_better_at: (Vec<T>, T, T),
    pub second_better_at: (Vec<T>, T, T),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct BruteForceResult<T> {
    pub best: Candidate<T>,
    /// Next best feasible candidates by local power.
    pub runner_ups: Vec<Candidate<T>>,
    pub evaluated: usize,
    pub feasible: usize,
    pub crossing: Option<Crossing<T>>,
}

fn candidates<T: Real>(j: usize, grid: &[T], search: ThresholdSearch) -> Vec<Vec<T>> {
    match search {
        ThresholdSearch::Symmetric => grid.iter().map(|t| vec![*t; j]).collect(),
        ThresholdSearch::Product => {
            let mut out = vec![Vec::new()];
            for _ in 0..j {
                out = out
                    .into_iter()
                    .flat_map(|p: Vec<T>| {
                        grid.iter().map(move |t| {
                            let mut q = p.clone();
                            q.push(*t);
                            q
                        })
                    })
                    .collect();
            }
            out
        }
    }
}

/// Enumerates separate t-test rules over a threshold grid, keeps those that
/// pass the strong maximin check on `space`, and ranks them by local power.
/// Ties keep the earlier candidate.
pub fn brute_force_optimal_threshold<T: Real>(
    j: usize,
    welfare: &WelfareSpec<T>,
    publication: &PublicationRule<T>,
    cost: &CostFunction<T>,
    space: &ParameterSpace<T>,
    config: &BruteForceConfig<T>,
    method: &Method,
) -> Result<BruteForceResult<T>> {
    if j == 0 || j > MAX_BRUTE_FORCE_J {
        return Err(Error::EnumerationTooLarge {
            j,
            max: MAX_BRUTE_FORCE_J,
        });
    }
    if config.thresholds.is_empty() || config.thresholds.iter().any(|t| t.is_nan() || *t == T::neg_infinity()) {
        return Err(Error::InvalidArgument(
            "threshold grid must be non-empty, with values in ℝ ∪ {+∞}".into(),
        ));
    }
    let all = candidates(j, &config.thresholds, config.search);
    let mut feasible = Vec::new();
    for t in &all {
        let rule = RecommendationRule::separate(t.clone(), vec![T::one(); j])?;
        let spec = GameSpec::new(rule, welfare.clone(), *publication, cost.clone())?;
        let report = check_maximin(&spec, space, config.tol, Mode::Strong, method)?;
        if !report.passed {
            continue;
        }
        let lp = local_power(&spec, config.epsilon, space, method)?;
        feasible.push((
            Candidate {
                thresholds: t.clone(),
                local_power: lp.value,
                worst_null_beta: report.worst_null_beta.map_or(T::neg_infinity(), |w| w.value),
            },
            spec,
        ));
    }
    if feasible.is_empty() {
        return Err(Error::EmptyFeasibleSet);
    }
    let crossing = match config.search {
        ThresholdSearch::Product => find_crossing(&feasible, space, method)?,
        ThresholdSearch::Symmetric => None,
    };
    let n_feasible = feasible.len();
    let mut ranked: Vec<Candidate<T>> = feasible.into_iter().map(|(c, _)| c).collect();
    // stable, so equal powers keep enumeration order
    ranked.sort_by(|a, b| b.local_power.partial_cmp(&a.local_power).expect("finite local power"));
    let best = ranked.remove(0);
    ranked.truncate(config.runner_ups);
    Ok(BruteForceResult {
        best,
        runner_ups: ranked,
        evaluated: all.len(),
        feasible: n_feasible,
        crossing,
    })
}

/// Looks for a pair of feasible rules whose welfare curves cross along the
/// positive coordinate axes.
fn find_crossing<T: Real>(
    feasible: &[(Candidate<T>, GameSpec<T>)],
    space: &ParameterSpace<T>,
    method: &Method,
) -> Result<Option<Crossing<T>>> {
    let mut probes = Vec::new();
    for d in 0..space.dim() {
        for t in space.axis(d).into_iter().filter(|t| *t > T::zero()) {
            let mut p = vec![T::zero(); space.dim()];
            p[d] = t;
            probes.push(p);
        }
    }
    let values = feasible
        .iter()
        .map(|(_, spec)| {
            probes
                .iter()
                .map(|p| Ok(spec.play_at(space.embed(p), method)?.editor_utility))
                .collect::<Result<Vec<T>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let margin = T::lit(1e-6);
    for a in 0..feasible.len() {
        for b in a + 1..feasible.len() {
            let better = probes.iter().zip(values[a].iter().zip(&values[b]));
            let up = better.clone().find(|(_, (va, vb))| **va > **vb + margin);
            let down = better.clone().find(|(_, (va, vb))| **vb > **va + margin);
            if let (Some((pa, (va, vb))), Some((pb, (wa, wb)))) = (up, down) {
                return Ok(Some(Crossing {
                    first: feasible[a].0.thresholds.clone(),
                    second: feasible[b].0.thresholds.clone(),
                    first_better_at: (pa.clone(), *va, *vb),
                    second_better_at: (pb.clone(), *wb, *wa),
                }));
            }
        }
    }
    Ok(None)
}
