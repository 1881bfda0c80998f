//! Seeded multivariate normal simulation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::model::{GaussianModel, McConfig};
use super::Estimate;
use crate::error::Result;
use crate::linalg::Matrix;
use crate::scalar::Real;

/// Counter-based generator for `(seed, stream)`.
pub fn rng_for(cfg: &McConfig) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(cfg.stream);
    rng
}

/// Visits every draw of `X ~ model`. With antithetic sampling, draws arrive in
/// mirrored pairs `θ + Lz`, `θ − Lz`, and the callback receives the pair index.
fn for_each_draw<T: Real>(model: &GaussianModel<T>, cfg: &McConfig, mut f: impl FnMut(usize, &[T])) -> Result<()> {
    cfg.validate()?;
    let d = model.dim();
    let mut rng = rng_for(cfg);
    let mut z = vec![T::zero(); d];
    let mut lz = vec![T::zero(); d];
    let mut x = vec![T::zero(); d];
    let mu = model.mean();
    let chol = model.cholesky();
    let mut produced = 0usize;
    let mut unit = 0usize;
    while produced < cfg.n_draws {
        for zi in z.iter_mut() {
            *zi = T::sample_std_normal(&mut rng);
        }
        chol.correlate(&z, &mut lz);
        for i in 0..d {
            x[i] = mu[i] + lz[i];
        }
        f(unit, &x);
        produced += 1;
        if cfg.antithetic && produced < cfg.n_draws {
            for i in 0..d {
                x[i] = mu[i] - lz[i];
            }
            f(unit, &x);
            produced += 1;
        }
        unit += 1;
    }
    Ok(())
}

/// `n_draws × dim` matrix of draws from the model.
pub fn mvn_sample<T: Real>(model: &GaussianModel<T>, cfg: &McConfig) -> Result<Matrix<T>> {
    let mut data = Vec::with_capacity(cfg.n_draws * model.dim());
    for_each_draw(model, cfg, |_, x| data.extend_from_slice(x))?;
    Matrix::from_row_major(cfg.n_draws, model.dim(), data)
}

/// Estimates `E[f(X)]` for a vector-valued `f` with `width` outputs.
///
/// Standard errors treat each antithetic pair as one independent unit.
pub fn simulate_means<T: Real>(
    model: &GaussianModel<T>,
    cfg: &McConfig,
    width: usize,
    mut f: impl FnMut(&[T], &mut [T]),
) -> Result<Vec<Estimate<T>>> {
    let mut acc = vec![Welford::<T>::default(); width];
    let mut buf = vec![T::zero(); width];
    let mut unit_sum = vec![T::zero(); width];
    let mut unit_len = 0usize;
    let mut current = 0usize;
    let flush = |acc: &mut [Welford<T>], unit_sum: &mut [T], unit_len: usize| {
        if unit_len == 0 {
            return;
        }
        let inv = T::one() / T::from_usize_lossy(unit_len);
        for (a, s) in acc.iter_mut().zip(unit_sum.iter_mut()) {
            a.push(*s * inv);
            *s = T::zero();
        }
    };
    for_each_draw(model, cfg, |unit, x| {
        if unit != current {
            flush(&mut acc, &mut unit_sum, unit_len);
            unit_len = 0;
            current = unit;
        }
        for b in buf.iter_mut() {
            *b = T::zero();
        }
        f(x, &mut buf);
        for (s, b) in unit_sum.iter_mut().zip(&buf) {
            *s = *s + *b;
        }
        unit_len += 1;
    })?;
    flush(&mut acc, &mut unit_sum, unit_len);
    Ok(acc.iter().map(Welford::estimate).collect())
}

#[derive(Debug, Clone, Copy, Default)]
struct Welford<T> {
    n: usize,
    mean: T,
    m2: T,
}

impl<T: Real> Welford<T> {
    fn push(&mut self, v: T) {
        self.n += 1;
        let delta = v - self.mean;
        self.mean = self.mean + delta / T::from_usize_lossy(self.n);
        self.m2 = self.m2 + delta * (v - self.mean);
    }

    fn estimate(&self) -> Estimate<T> {
        let se = if self.n > 1 {
            let n = T::from_usize_lossy(self.n);
            (self.m2 / (n - T::one()) / n).sqrt()
        } else {
            T::infinity()
        };
        Estimate::simulated(self.mean, se)
    }
}
