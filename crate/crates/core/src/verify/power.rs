use rayon::prelude::*;
use serde::Serialize;

use super::maximin::GameSpec;
use super::space::{sort_dedup, Grid, ParameterSpace};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::stats::Method;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct LocalPower<T> {
    pub epsilon: T,
    /// `inf v(θ) / ε` over the grid points of `Θ₁(ε)`.
    pub value: T,
    pub witness_theta: Vec<T>,
    pub witness_mean: Vec<T>,
    pub points: usize,
    pub simulated: bool,
}

/// Local power `inf_{θ ∈ Θ₁(ε)} v(θ)/ε`, where `Θ₁(ε)` holds the points whose
/// utilities are all nonnegative and at least one is `≥ ε`.
///
/// The grid of `space` is refined with `0, ±ε/2, ±ε` on every axis.
pub fn local_power<T: Real>(
    spec: &GameSpec<T>,
    epsilon: T,
    space: &ParameterSpace<T>,
    method: &Method,
) -> Result<LocalPower<T>> {
    space.validate()?;
    if !(epsilon.is_finite() && epsilon > T::zero()) {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    let half = epsilon / T::lit(2.0);
    let axes: Vec<Vec<T>> = (0..space.dim())
        .map(|d| {
            let (lo, hi) = space.bounds[d];
            let mut a = space.axis(d);
            a.extend(
                [T::zero(), half, -half, epsilon, -epsilon]
                    .into_iter()
                    .filter(|v| *v >= lo && *v <= hi),
            );
            sort_dedup(&mut a);
            a
        })
        .collect();
    let grid = Grid::new(axes);
    let members = |i: usize| {
        let mean = space.embed(&grid.point(i));
        let u = spec.welfare.utilities(&mean);
        (u.iter().all(|v| *v >= T::zero()) && u.iter().any(|v| *v >= epsilon)).then_some(mean)
    };
    let evals: Vec<Option<(usize, T, bool)>> = (0..grid.len())
        .into_par_iter()
        .map(|i| match members(i) {
            None => Ok(None),
            Some(mean) => {
                let g = spec.play_at(mean, &method.for_stream(i as u64))?;
                Ok(Some((i, g.editor_utility, g.simulated)))
            }
        })
        .collect::<Result<_>>()?;
    let mut best: Option<(usize, T)> = None;
    let (mut points, mut simulated) = (0, false);
    for &(i, v, sim) in evals.iter().flatten() {
        points += 1;
        simulated |= sim;
        if best.is_none_or(|(_, b)| v < b) {
            best = Some((i, v));
        }
    }
    let (i, v) = best.ok_or(Error::EmptyFeasibleSet)?;
    let theta = grid.point(i);
    Ok(LocalPower {
        epsilon,
        value: v / epsilon,
        witness_mean: space.embed(&theta),
        witness_theta: theta,
        points,
        simulated,
    })
}
