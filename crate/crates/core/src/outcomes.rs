//! Multiple outcomes: synthetic trials, treatment-effect estimates and the
//! per-policy-maker index rules.

use std::io::{Read, Write};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};
use crate::protocols::{make_index_rule, RecommendationRule};
use crate::scalar::Real;

/// A two-arm trial with `G` outcomes per unit.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticTrial<T> {
    treatment: Vec<bool>,
    /// `n × G`, one row per unit.
    outcomes: Matrix<T>,
    /// Effects the data were generated from, if known.
    pub theta: Option<Vec<T>>,
    pub noise_cov: Option<Matrix<T>>,
}

impl<T: Real> SyntheticTrial<T> {
    pub fn new(treatment: Vec<bool>, outcomes: Matrix<T>) -> Result<Self> {
        if treatment.len() != outcomes.rows() {
            return Err(Error::DimensionMismatch {
                expected: treatment.len(),
                found: outcomes.rows(),
            });
        }
        if outcomes.cols() == 0 {
            return Err(Error::InvalidArgument("a trial needs at least one outcome".into()));
        }
        if !treatment.iter().any(|d| *d) {
            return Err(Error::RankDeficient { arm: "treated" });
        }
        if treatment.iter().all(|d| *d) {
            return Err(Error::RankDeficient { arm: "control" });
        }
        if (0..outcomes.rows()).any(|i| outcomes.row(i).iter().any(|y| !y.is_finite())) {
            return Err(Error::NonFinite { what: "outcomes" });
        }
        Ok(Self {
            treatment,
            outcomes,
            theta: None,
            noise_cov: None,
        })
    }

    /// `Y_i = θ D_i + ε_i` with `ε_i ~ N(0, noise_cov)` and exactly `n_treated`
    /// treated units in random positions.
    pub fn generate(n: usize, n_treated: usize, theta: &[T], noise_cov: &Matrix<T>, seed: u64) -> Result<Self> {
        if noise_cov.rows() != theta.len() {
            return Err(Error::DimensionMismatch {
                expected: theta.len(),
                found: noise_cov.rows(),
            });
        }
        let chol = noise_cov.cholesky()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut treatment: Vec<bool> = (0..n).map(|i| i < n_treated).collect();
        treatment.shuffle(&mut rng);
        let g = theta.len();
        let mut data = Vec::with_capacity(n * g);
        let mut z = vec![T::zero(); g];
        let mut e = vec![T::zero(); g];
        for d in &treatment {
            z.iter_mut().for_each(|v| *v = T::sample_std_normal(&mut rng));
            chol.correlate(&z, &mut e);
            data.extend(theta.iter().zip(&e).map(|(t, e)| if *d { *t + *e } else { *e }));
        }
        let mut trial = Self::new(treatment, Matrix::from_row_major(n, g, data)?)?;
        trial.theta = Some(theta.to_vec());
        trial.noise_cov = Some(noise_cov.clone());
        Ok(trial)
    }

    /// Balanced trial with independent noise of standard deviation `sigma`.
    pub fn homoskedastic(n: usize, theta: &[T], sigma: T, seed: u64) -> Result<Self> {
        let var = vec![sigma * sigma; theta.len()];
        Self::generate(n, n / 2, theta, &Matrix::from_diag(&var), seed)
    }

    pub fn n(&self) -> usize {
        self.treatment.len()
    }

    pub fn outcome_count(&self) -> usize {
        self.outcomes.cols()
    }

    pub fn treatment(&self) -> &[bool] {
        &self.treatment
    }

    pub fn outcomes(&self) -> &Matrix<T> {
        &self.outcomes
    }

    pub fn n_treated(&self) -> usize {
        self.treatment.iter().filter(|d| **d).count()
    }

    /// Trial whose single outcome is `Y w`.
    pub fn aggregated(&self, w: &[T]) -> Result<Self> {
        if w.len() != self.outcome_count() {
            return Err(Error::DimensionMismatch {
                expected: self.outcome_count(),
                found: w.len(),
            });
        }
        let data = (0..self.n()).map(|i| dot(self.outcomes.row(i), w)).collect();
        Self::new(self.treatment.clone(), Matrix::from_row_major(self.n(), 1, data)?)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["unit_id".to_string(), "treatment".to_string()];
        header.extend((1..=self.outcome_count()).map(|g| format!("outcome_{g}")));
        w.write_record(&header)?;
        for i in 0..self.n() {
            let mut rec = vec![i.to_string(), u8::from(self.treatment[i]).to_string()];
            rec.extend(self.outcomes.row(i).iter().map(|y| format!("{:e}", y.as_f64())));
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| Error::Csv(e.to_string()))
    }

    /// Reads `unit_id, treatment, outcome_1, …, outcome_G`; rows are kept in
    /// file order and unit ids are not interpreted.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(reader);
        let header = r.headers()?.clone();
        let g = header.len().saturating_sub(2);
        if header.get(0) != Some("unit_id") || header.get(1) != Some("treatment") || g == 0 {
            return Err(Error::Csv(
                "expected columns unit_id, treatment, outcome_1..outcome_G".into(),
            ));
        }
        for (k, name) in header.iter().skip(2).enumerate() {
            if name != format!("outcome_{}", k + 1) {
                return Err(Error::Csv(format!("unexpected column {name:?}")));
            }
        }
        let mut treatment = Vec::new();
        let mut data = Vec::new();
        for (line, rec) in r.records().enumerate() {
            let rec = rec?;
            let bad = |what: &str| Error::Csv(format!("row {}: {what}", line + 1));
            treatment.push(match rec.get(1) {
                Some("1") => true,
                Some("0") => false,
                _ => return Err(bad("treatment must be 0 or 1")),
            });
            for field in rec.iter().skip(2) {
                let y: f64 = field.trim().parse().map_err(|_| bad("outcome is not a number"))?;
                data.push(T::from_f64(y).ok_or_else(|| bad("outcome out of range"))?);
            }
        }
        let n = treatment.len();
        Self::new(treatment, Matrix::from_row_major(n, g, data)?)
    }
}

/// `θ̂` with its estimated covariance.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct OlsEffects<T> {
    pub estimate: Vec<T>,
    /// Pooled within-arm covariance times `1/N₁ + 1/N₀`; `None` with fewer
    /// than three units.
    pub cov: Option<Matrix<T>>,
    pub n_treated: usize,
    pub n_control: usize,
}

/// OLS of each outcome on a constant and the treatment dummy, which is the
/// difference in arm means.
pub fn ols_effects<T: Real>(trial: &SyntheticTrial<T>) -> Result<OlsEffects<T>> {
    let g = trial.outcome_count();
    let n1 = trial.n_treated();
    let n0 = trial.n() - n1;
    if n1 == 0 {
        return Err(Error::RankDeficient { arm: "treated" });
    }
    if n0 == 0 {
        return Err(Error::RankDeficient { arm: "control" });
    }
    let arm_mean = |treated: bool, count: usize| {
        let mut m = vec![T::zero(); g];
        for i in (0..trial.n()).filter(|&i| trial.treatment[i] == treated) {
            m.iter_mut().zip(trial.outcomes.row(i)).for_each(|(a, y)| *a = *a + *y);
        }
        let c = T::from_usize_lossy(count);
        m.into_iter().map(|v| v / c).collect::<Vec<T>>()
    };
    let m1 = arm_mean(true, n1);
    let m0 = arm_mean(false, n0);
    let estimate = m1.iter().zip(&m0).map(|(a, b)| *a - *b).collect();
    let cov = (trial.n() > 2).then(|| {
        let mut s = Matrix::zeros(g, g);
        for i in 0..trial.n() {
            let m = if trial.treatment[i] { &m1 } else { &m0 };
            let r: Vec<T> = trial.outcomes.row(i).iter().zip(m).map(|(y, m)| *y - *m).collect();
            for a in 0..g {
                for b in 0..g {
                    s[(a, b)] = s[(a, b)] + r[a] * r[b];
                }
            }
        }
        let scale = (T::one() / T::from_usize_lossy(n1) + T::one() / T::from_usize_lossy(n0))
            / T::from_usize_lossy(trial.n() - 2);
        s.scaled(scale)
    });
    Ok(OlsEffects {
        estimate,
        cov,
        n_treated: n1,
        n_control: n0,
    })
}

/// `|w'θ̂ − θ̂(Y w)|`: aggregating the estimates versus estimating the effect
/// on the aggregated outcome.
pub fn aggregation_equivalence<T: Real>(trial: &SyntheticTrial<T>, w: &[T]) -> Result<T> {
    let direct = dot(&ols_effects(trial)?.estimate, w);
    let pooled = ols_effects(&trial.aggregated(w)?)?.estimate[0];
    Ok((direct - pooled).abs())
}

/// One index rule per policy-maker: column `j` of the `G × J` weight matrix
/// gives the index tested at size `C`.
pub fn policy_maker_indices<T: Real>(
    weights: &Matrix<T>,
    cov: &Matrix<T>,
    size: T,
) -> Result<Vec<RecommendationRule<T>>> {
    if weights.rows() != cov.rows() {
        return Err(Error::DimensionMismatch {
            expected: cov.rows(),
            found: weights.rows(),
        });
    }
    (0..weights.cols())
        .map(|j| make_index_rule(&weights.column(j), cov, size))
        .collect()
}
