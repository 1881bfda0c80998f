use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Which utilities have to be negative for research to be worth deterring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NullRegion {
    /// Every treatment effect is negative.
    AllNegative,
    /// Some policy-maker's welfare is negative.
    AnyNegative,
    /// Every combination's welfare is negative.
    CombinationNull,
}

impl NullRegion {
    /// Membership uses strict inequalities: a point with some utility exactly
    /// zero is not in the null region.
    pub fn contains<T: Real>(&self, utilities: &[T]) -> bool {
        match self {
            NullRegion::AllNegative | NullRegion::CombinationNull => utilities.iter().all(|u| *u < T::zero()),
            NullRegion::AnyNegative => utilities.iter().any(|u| *u < T::zero()),
        }
    }
}

/// A box `Θ` of parameters, discretized for verification.
///
/// With an `embedding`, points of the box are mapped to model means by
/// `θ ↦ θ · embedding`; this represents the multiple-measurement space
/// `θ_1 = ⋯ = θ_G` as a one-dimensional box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ParameterSpace<T> {
    pub bounds: Vec<(T, T)>,
    pub grid_points_per_dim: usize,
    pub null_region: NullRegion,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<Vec<T>>,
}

/// Points added to every grid axis so that violations close to the origin
/// are not missed.
pub const SHELL: f64 = 1e-3;

impl<T: Real> ParameterSpace<T> {
    /// `[-1, 1]^dim` with 21 points per axis.
    pub fn unit_box(dim: usize, null_region: NullRegion) -> Result<Self> {
        Self::new(vec![(-T::one(), T::one()); dim], 21, null_region)
    }

    pub fn new(bounds: Vec<(T, T)>, grid_points_per_dim: usize, null_region: NullRegion) -> Result<Self> {
        let s = Self {
            bounds,
            grid_points_per_dim,
            null_region,
            embedding: None,
        };
        s.validate()?;
        Ok(s)
    }

    /// One-dimensional space embedded along `direction`.
    pub fn diagonal(bound: (T, T), grid_points: usize, direction: Vec<T>, null_region: NullRegion) -> Result<Self> {
        let mut s = Self::new(vec![bound], grid_points, null_region)?;
        if direction.is_empty() || direction.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "embedding direction must be finite and non-empty".into(),
            ));
        }
        s.embedding = Some(direction);
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.bounds.is_empty() {
            return Err(Error::InvalidArgument(
                "parameter space needs at least one dimension".into(),
            ));
        }
        if self.grid_points_per_dim < 3 {
            return Err(Error::InvalidArgument("at least 3 grid points per dimension".into()));
        }
        for &(lo, hi) in &self.bounds {
            if !(lo.is_finite() && hi.is_finite() && lo < T::zero() && hi > T::zero()) {
                return Err(Error::InvalidArgument(format!(
                    "bounds [{lo}, {hi}] must be finite and contain 0 in their interior"
                )));
            }
        }
        if let Some(e) = &self.embedding {
            if self.bounds.len() != 1 || e.is_empty() {
                return Err(Error::InvalidArgument(
                    "an embedding needs a one-dimensional space".into(),
                ));
            }
        }
        Ok(())
    }

    /// Dimension of the box.
    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    /// Dimension of the model mean a point maps to.
    pub fn model_dim(&self) -> usize {
        self.embedding.as_ref().map_or(self.dim(), Vec::len)
    }

    /// Sorted axis values: the uniform grid, the origin and the `±SHELL`
    /// points inside the bounds.
    pub fn axis(&self, d: usize) -> Vec<T> {
        let (lo, hi) = self.bounds[d];
        let n = self.grid_points_per_dim;
        let mut v: Vec<T> = (0..n)
            .map(|i| lo + (hi - lo) * T::from_usize_lossy(i) / T::from_usize_lossy(n - 1))
            .collect();
        let shell = T::lit(SHELL);
        v.push(T::zero());
        for s in [shell, -shell] {
            if s > lo && s < hi {
                v.push(s);
            }
        }
        sort_dedup(&mut v);
        v
    }

    /// All grid axes.
    pub fn axes(&self) -> Vec<Vec<T>> {
        (0..self.dim()).map(|d| self.axis(d)).collect()
    }

    /// Maps a box point to a model mean.
    pub fn embed(&self, point: &[T]) -> Vec<T> {
        match &self.embedding {
            Some(dir) => dir.iter().map(|d| *d * point[0]).collect(),
            None => point.to_vec(),
        }
    }
}

pub(crate) fn sort_dedup<T: Real>(v: &mut Vec<T>) {
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite grid values"));
    v.dedup_by(|a, b| (*a - *b).abs() <= T::epsilon() * T::lit(4.0));
}

/// Cartesian product of axes, addressed by a mixed-radix index.
#[derive(Debug, Clone)]
pub struct Grid<T> {
    axes: Vec<Vec<T>>,
    len: usize,
}

impl<T: Real> Grid<T> {
    pub fn new(axes: Vec<Vec<T>>) -> Self {
        let len = axes.iter().map(Vec::len).product();
        Self { axes, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Point `index`; the first axis varies slowest.
    pub fn point(&self, mut index: usize) -> Vec<T> {
        let mut p = vec![T::zero(); self.axes.len()];
        for d in (0..self.axes.len()).rev() {
            let n = self.axes[d].len();
            p[d] = self.axes[d][index % n];
            index /= n;
        }
        p
    }
}
