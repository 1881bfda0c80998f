//! Rejection probabilities and the discovery functionals built on them.
//!
//! Every functional has a closed form when the rule's components are
//! independent (diagonal Σ), all-or-nothing, or mutually exclusive. Anything
//! else goes through Monte Carlo when the caller allows it.

use serde::{Deserialize, Serialize};

use super::model::{GaussianModel, McConfig};
use super::montecarlo::simulate_means;
use super::normal::{norm_cdf, norm_pdf, norm_sf};
use super::quadrature::adaptive_simpson;
use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::protocols::{RecommendationRule, RuleKind};
use crate::scalar::Real;

/// How expectations under `F_θ` are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "method", content = "config")]
pub enum Method {
    /// Closed forms only; fails if a needed quantity has none.
    Exact,
    /// Closed forms where available, Monte Carlo otherwise.
    Auto(McConfig),
    /// Always simulate.
    MonteCarlo(McConfig),
}

impl Method {
    pub fn mc_config(&self) -> Option<&McConfig> {
        match self {
            Method::Exact => None,
            Method::Auto(c) | Method::MonteCarlo(c) => Some(c),
        }
    }

    /// Same method with the Monte Carlo stream set to `stream`.
    pub fn for_stream(self, stream: u64) -> Self {
        match self {
            Method::Exact => Method::Exact,
            Method::Auto(c) => Method::Auto(c.for_stream(stream)),
            Method::MonteCarlo(c) => Method::MonteCarlo(c.for_stream(stream)),
        }
    }
}

/// A value with its Monte Carlo standard error (zero when exact).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Estimate<T> {
    pub value: T,
    pub std_error: T,
    pub simulated: bool,
}

impl<T: Real> Estimate<T> {
    pub fn exact(value: T) -> Self {
        Self {
            value,
            std_error: T::zero(),
            simulated: false,
        }
    }

    pub fn simulated(value: T, std_error: T) -> Self {
        Self {
            value,
            std_error,
            simulated: true,
        }
    }

    pub fn map(self, f: impl FnOnce(T) -> T) -> Self {
        Self {
            value: f(self.value),
            ..self
        }
    }
}

/// Joint law of the recommendation components, as far as it is known in
/// closed form.
#[derive(Debug, Clone)]
enum Law<T> {
    Independent(Vec<T>),
    Comonotone { prob: T, components: usize },
    Exclusive(Vec<T>),
    MarginalsOnly(Vec<T>),
}

impl<T: Real> Law<T> {
    fn marginals(&self) -> Vec<T> {
        match self {
            Law::Independent(p) | Law::Exclusive(p) | Law::MarginalsOnly(p) => p.clone(),
            Law::Comonotone { prob, components } => vec![*prob; *components],
        }
    }

    fn single(&self) -> Option<T> {
        match self {
            Law::Independent(p) | Law::Exclusive(p) | Law::MarginalsOnly(p) if p.len() == 1 => Some(p[0]),
            Law::Comonotone { prob, components: 1 } => Some(*prob),
            _ => None,
        }
    }
}

/// Discovery functionals of one `(rule, θ)` pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct DiscoverySummary<T> {
    /// `P(r_k = 1 | θ)` per component.
    pub marginals: Vec<Estimate<T>>,
    /// `E[#discoveries]`, with group components counting their size.
    pub expected_discoveries: Estimate<T>,
    /// `P(some component fires)`.
    pub any: Option<Estimate<T>>,
    /// `P(#discoveries ≥ κ)` for the requested κ.
    pub at_least_kappa: Option<Estimate<T>>,
    /// Expected false discovery proportion, false meaning a strictly negative
    /// component effect.
    pub fdp: Option<Estimate<T>>,
    /// Same with the usual testing convention: false means effect `≤ 0`.
    pub fdr: Option<Estimate<T>>,
    /// `E[Σ_k r_k e_k 1{#discoveries ≥ κ}]`: welfare of decisions that survive
    /// the submission filter.
    pub filtered_welfare: Option<Estimate<T>>,
    /// `E[Σ_{m ≥ κ} binom(R, m)]` with `R` the number of discoveries: the
    /// expected number of rejected combinations of at least `κ` hypotheses.
    /// Under independence this is `Σ_{|S| ≥ κ} Π_{j ∈ S} p_j`.
    pub combinations_at_least_kappa: Option<Estimate<T>>,
    pub simulated: bool,
}

impl<T: Real> DiscoverySummary<T> {
    fn joint_complete(&self, kappa: Option<usize>) -> bool {
        self.any.is_some()
            && self.fdp.is_some()
            && (kappa.is_none() || (self.at_least_kappa.is_some() && self.filtered_welfare.is_some()))
    }
}

/// Rejection probabilities of each recommendation component.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct RejectionProbs<T> {
    pub probs: Vec<T>,
    pub std_errors: Vec<T>,
    pub simulated: bool,
}

/// `P(r_k(X) = 1 | θ)` for every component `k`.
pub fn rejection_probs<T: Real>(
    rule: &RecommendationRule<T>,
    model: &GaussianModel<T>,
    method: &Method,
) -> Result<RejectionProbs<T>> {
    let s = summarize(rule, model, None, false, method)?;
    Ok(RejectionProbs {
        probs: s.marginals.iter().map(|e| e.value).collect(),
        std_errors: s.marginals.iter().map(|e| e.std_error).collect(),
        simulated: s.simulated,
    })
}

/// Computes the discovery functionals. With `need_joint`, quantities that
/// depend on the joint law (`any`, `fdp`, and the κ-dependent ones) must be
/// available, falling back to simulation when allowed.
pub fn summarize<T: Real>(
    rule: &RecommendationRule<T>,
    model: &GaussianModel<T>,
    kappa: Option<usize>,
    need_joint: bool,
    method: &Method,
) -> Result<DiscoverySummary<T>> {
    if rule.input_dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: rule.input_dim(),
            found: model.dim(),
        });
    }
    match method {
        Method::MonteCarlo(cfg) => simulate_summary(rule, model, kappa, cfg),
        Method::Exact | Method::Auto(_) => {
            let exact = exact_law(rule.kind(), model).map(|law| exact_summary(rule, model, &law, kappa));
            match (exact, method.mc_config()) {
                (Some(s), _) if !need_joint || s.joint_complete(kappa) => Ok(s),
                (_, Some(cfg)) => simulate_summary(rule, model, kappa, cfg),
                (_, None) => Err(Error::NeedsSimulation(if need_joint {
                    "the joint discovery law"
                } else {
                    "the rejection probability"
                })),
            }
        }
    }
}

fn exact_law<T: Real>(kind: &RuleKind<T>, model: &GaussianModel<T>) -> Option<Law<T>> {
    let mu = model.mean();
    match kind {
        RuleKind::SeparateThresholds { thresholds, variances } => {
            let p = (0..mu.len())
                .map(|j| {
                    let cut = thresholds[j] * variances[j].sqrt();
                    if cut == T::infinity() {
                        T::zero()
                    } else {
                        norm_sf((cut - mu[j]) / model.sd(j))
                    }
                })
                .collect();
            Some(if model.is_diagonal() {
                Law::Independent(p)
            } else {
                Law::MarginalsOnly(p)
            })
        }
        RuleKind::MinStatistic { threshold, variances } => {
            if !model.is_diagonal() {
                return None;
            }
            let prob = if *threshold == T::infinity() {
                T::zero()
            } else {
                (0..mu.len())
                    .map(|j| norm_sf((*threshold * variances[j].sqrt() - mu[j]) / model.sd(j)))
                    .fold(T::one(), |a, b| a * b)
            };
            Some(Law::Comonotone {
                prob,
                components: mu.len(),
            })
        }
        RuleKind::GroupArgmaxMax { threshold, .. } => {
            if !model.is_diagonal() {
                return None;
            }
            let sds: Vec<T> = (0..mu.len()).map(|j| model.sd(j)).collect();
            Some(Law::Exclusive(argmax_exceedance(*threshold, mu, &sds)))
        }
        RuleKind::IndexTest {
            weights,
            threshold,
            index_sd,
        } => {
            let model_sd = model.cov().quad_form(weights).sqrt();
            let p = if *threshold == T::infinity() {
                T::zero()
            } else {
                norm_sf((*threshold * *index_sd - dot(weights, mu)) / model_sd)
            };
            Some(Law::Independent(vec![p]))
        }
        RuleKind::HolmStepDown { .. } => None,
        RuleKind::NeverReject { dim } => Some(Law::Independent(vec![T::zero(); *dim])),
        RuleKind::AlwaysReject { dim } => Some(Law::Independent(vec![T::one(); *dim])),
        RuleKind::Stacked(parts) => {
            let mut p = Vec::new();
            for part in parts {
                p.extend(exact_law(part, model)?.marginals());
            }
            Some(Law::MarginalsOnly(p))
        }
    }
}

/// `P(X_k ≥ t and X_k is the largest)` for independent `X_i ~ N(μ_i, s_i²)`.
pub(crate) fn argmax_exceedance<T: Real>(t: T, mu: &[T], sd: &[T]) -> Vec<T> {
    let width = T::lit(12.0);
    (0..mu.len())
        .map(|k| {
            if t == T::infinity() {
                return T::zero();
            }
            let hi = mu[k] + width * sd[k];
            let lo = t.max(mu[k] - width * sd[k]);
            if lo >= hi {
                return T::zero();
            }
            let integrand = |x: T| {
                let mut v = norm_pdf((x - mu[k]) / sd[k]) / sd[k];
                for i in 0..mu.len() {
                    if i != k {
                        v = v * norm_cdf((x - mu[i]) / sd[i]);
                    }
                }
                v
            };
            let core = adaptive_simpson(&integrand, lo, hi, T::lit(1e-15));
            // mass below mu_k - 12 sd_k is below double precision
            core.max(T::zero()).min(T::one())
        })
        .collect()
}

/// Distribution of the number of successes among independent Bernoullis.
fn poisson_binomial<T: Real>(p: &[T]) -> Vec<T> {
    let mut dist = vec![T::zero(); p.len() + 1];
    dist[0] = T::one();
    for (n, &pk) in p.iter().enumerate() {
        for c in (0..=n + 1).rev() {
            let stay = dist[c] * (T::one() - pk);
            let up = if c > 0 { dist[c - 1] * pk } else { T::zero() };
            dist[c] = stay + up;
        }
    }
    dist
}

fn tail_from<T: Real>(dist: &[T], k: usize) -> T {
    if k == 0 {
        return T::one();
    }
    dist.iter().skip(k).copied().sum::<T>().min(T::one())
}

/// `Σ_{m ≥ κ} binom(n, m)`.
fn binomial_tail_count<T: Real>(n: usize, kappa: usize) -> T {
    let mut term = T::one();
    let mut sum = T::zero();
    for m in 0..=n {
        if m > 0 {
            term = term * T::from_usize_lossy(n - m + 1) / T::from_usize_lossy(m);
        }
        if m >= kappa {
            sum = sum + term;
        }
    }
    sum
}

fn combination_count<T: Real>(law: &Law<T>, d: &[usize], kappa: usize) -> Option<T> {
    match law {
        Law::Independent(p) if d.iter().all(|&dk| dk == 1) => {
            // elementary symmetric polynomials e_m(p)
            let mut e = vec![T::zero(); p.len() + 1];
            e[0] = T::one();
            for (n, &pk) in p.iter().enumerate() {
                for c in (1..=n + 1).rev() {
                    e[c] = e[c] + e[c - 1] * pk;
                }
            }
            Some(e.iter().skip(kappa).copied().sum())
        }
        Law::Comonotone { prob, components } => Some(*prob * binomial_tail_count(*components, kappa)),
        Law::Exclusive(p) => Some(
            p.iter()
                .zip(d)
                .map(|(&pk, &dk)| pk * binomial_tail_count(dk, kappa))
                .sum(),
        ),
        Law::MarginalsOnly(_) => law.single().map(|p| p * binomial_tail_count(d[0], kappa)),
        _ => None,
    }
}

/// Expected share of false discoveries among all discoveries (0 if none),
/// with `false_k` marking the components whose effect makes them false.
fn exact_fdp<T: Real>(law: &Law<T>, false_k: &[bool]) -> Option<T> {
    match law {
        Law::Independent(p) => Some(
            (0..p.len())
                .filter(|&k| false_k[k] && p[k] > T::zero())
                .map(|k| {
                    let mut rest = p.clone();
                    rest.remove(k);
                    let inv: T = poisson_binomial(&rest)
                        .iter()
                        .enumerate()
                        .map(|(c, &w)| w / T::from_usize_lossy(c + 1))
                        .sum();
                    p[k] * inv
                })
                .sum(),
        ),
        Law::Comonotone { prob, components } => {
            let n_false = false_k.iter().filter(|f| **f).count();
            Some(*prob * T::from_usize_lossy(n_false) / T::from_usize_lossy(*components))
        }
        Law::Exclusive(p) => Some((0..p.len()).filter(|&k| false_k[k]).map(|k| p[k]).sum()),
        Law::MarginalsOnly(_) => law.single().map(|p| if false_k[0] { p } else { T::zero() }),
    }
}

fn exact_summary<T: Real>(
    rule: &RecommendationRule<T>,
    model: &GaussianModel<T>,
    law: &Law<T>,
    kappa: Option<usize>,
) -> DiscoverySummary<T> {
    let marg = law.marginals();
    let effects = rule.component_effects(model.mean());
    let d: Vec<usize> = (0..marg.len()).map(|k| rule.discoveries(k)).collect();
    let expected: T = marg.iter().zip(&d).map(|(&p, &dk)| p * T::from_usize_lossy(dk)).sum();
    let strict: Vec<bool> = effects.iter().map(|e| *e < T::zero()).collect();
    let weak: Vec<bool> = effects.iter().map(|e| *e <= T::zero()).collect();

    let (any, at_least, filtered) = match law {
        Law::Independent(p) => {
            let none: T = p.iter().map(|&q| T::one() - q).fold(T::one(), |a, b| a * b);
            let dist = poisson_binomial(p);
            let leave_one_out = |k: usize| {
                let mut rest = p.clone();
                rest.remove(k);
                poisson_binomial(&rest)
            };
            let at_least = kappa.map(|k| tail_from(&dist, k));
            let filtered = kappa.map(|kap| {
                (0..p.len())
                    .map(|k| {
                        if p[k] == T::zero() || effects[k] == T::zero() {
                            return T::zero();
                        }
                        let others = leave_one_out(k);
                        effects[k] * p[k] * tail_from(&others, kap.saturating_sub(1))
                    })
                    .sum()
            });
            (Some(T::one() - none), at_least, filtered)
        }
        Law::Comonotone { prob, components } => {
            let reaches = |kap: usize| kap <= *components;
            let at_least = kappa.map(|k| {
                if k == 0 {
                    T::one()
                } else if reaches(k) {
                    *prob
                } else {
                    T::zero()
                }
            });
            let filtered = kappa.map(|k| {
                if reaches(k) {
                    *prob * effects.iter().copied().sum::<T>()
                } else {
                    T::zero()
                }
            });
            (Some(*prob), at_least, filtered)
        }
        Law::Exclusive(p) => {
            let any: T = p.iter().copied().sum();
            let at_least = kappa.map(|kap| {
                if kap == 0 {
                    T::one()
                } else {
                    (0..p.len()).filter(|&k| d[k] >= kap).map(|k| p[k]).sum()
                }
            });
            let filtered = kappa.map(|kap| (0..p.len()).filter(|&k| d[k] >= kap).map(|k| p[k] * effects[k]).sum());
            (Some(any.min(T::one())), at_least, filtered)
        }
        Law::MarginalsOnly(_) => match law.single() {
            Some(p) => {
                let hit = |kap: usize| kap <= d[0];
                (
                    Some(p),
                    kappa.map(|k| {
                        if k == 0 {
                            T::one()
                        } else if hit(k) {
                            p
                        } else {
                            T::zero()
                        }
                    }),
                    kappa.map(|k| if hit(k) { p * effects[0] } else { T::zero() }),
                )
            }
            None => (None, None, None),
        },
    };
    DiscoverySummary {
        marginals: marg.into_iter().map(Estimate::exact).collect(),
        expected_discoveries: Estimate::exact(expected),
        any: any.map(Estimate::exact),
        at_least_kappa: at_least.map(Estimate::exact),
        fdp: exact_fdp(law, &strict).map(Estimate::exact),
        fdr: exact_fdp(law, &weak).map(Estimate::exact),
        filtered_welfare: filtered.map(Estimate::exact),
        combinations_at_least_kappa: kappa.and_then(|k| combination_count(law, &d, k)).map(Estimate::exact),
        simulated: false,
    }
}

fn simulate_summary<T: Real>(
    rule: &RecommendationRule<T>,
    model: &GaussianModel<T>,
    kappa: Option<usize>,
    cfg: &McConfig,
) -> Result<DiscoverySummary<T>> {
    let m = rule.components();
    let effects = rule.component_effects(model.mean());
    let d: Vec<usize> = (0..m).map(|k| rule.discoveries(k)).collect();
    let kap = kappa.unwrap_or(0);
    // layout: marginals, expected discoveries, any, at least κ, fdp, filtered,
    // combination count, fdr
    let width = m + 7;
    let mut rec = vec![false; m];
    let est = simulate_means(model, cfg, width, |x, out| {
        rule.recommend(x, &mut rec);
        let mut count = 0usize;
        let mut false_count = 0usize;
        let mut null_count = 0usize;
        let mut welfare = T::zero();
        for k in 0..m {
            if rec[k] {
                out[k] = T::one();
                count += d[k];
                if effects[k] < T::zero() {
                    false_count += d[k];
                }
                if effects[k] <= T::zero() {
                    null_count += d[k];
                }
                welfare = welfare + effects[k];
            }
        }
        out[m] = T::from_usize_lossy(count);
        out[m + 1] = if count > 0 { T::one() } else { T::zero() };
        let passes = count >= kap;
        out[m + 2] = if passes { T::one() } else { T::zero() };
        out[m + 3] = if count > 0 {
            T::from_usize_lossy(false_count) / T::from_usize_lossy(count)
        } else {
            T::zero()
        };
        out[m + 4] = if passes { welfare } else { T::zero() };
        out[m + 5] = binomial_tail_count(count, kap);
        out[m + 6] = if count > 0 {
            T::from_usize_lossy(null_count) / T::from_usize_lossy(count)
        } else {
            T::zero()
        };
    })?;
    Ok(DiscoverySummary {
        marginals: est[..m].to_vec(),
        expected_discoveries: est[m],
        any: Some(est[m + 1]),
        at_least_kappa: kappa.map(|_| est[m + 2]),
        fdp: Some(est[m + 3]),
        fdr: Some(est[m + 6]),
        filtered_welfare: kappa.map(|_| est[m + 4]),
        combinations_at_least_kappa: kappa.map(|_| est[m + 5]),
        simulated: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::protocols::RuleMeta;

    fn mc(n: usize, seed: u64) -> Method {
        Method::MonteCarlo(McConfig::new(n, seed))
    }

    #[test]
    fn separate_threshold_at_null_is_its_size() {
        let rule = RecommendationRule::separate(vec![1.6449_f64], vec![1.0]).unwrap();
        let model = GaussianModel::standard(vec![0.0]).unwrap();
        let p = rejection_probs(&rule, &model, &Method::Exact).unwrap();
        assert!((p.probs[0] - norm_sf(1.6449)).abs() < 1e-15);
        assert!((p.probs[0] - 0.05).abs() < 1e-5);
    }

    #[test]
    fn min_statistic_joint_size() {
        let rule = RecommendationRule::new(
            RuleKind::MinStatistic {
                threshold: 0.5244_f64,
                variances: vec![1.0, 1.0],
            },
            RuleMeta::default(),
        )
        .unwrap();
        let model = GaussianModel::standard(vec![0.0, 0.0]).unwrap();
        let p = rejection_probs(&rule, &model, &Method::Exact).unwrap();
        // (1 - Φ(0.5244))² with the 4-digit threshold
        assert!((p.probs[0] - 0.09).abs() < 1e-5);
        assert_eq!(p.probs[0], p.probs[1]);
    }

    #[test]
    fn saturation_far_in_the_alternative() {
        let model = GaussianModel::standard(vec![8.0_f64, 8.0]).unwrap();
        let rules = [
            RecommendationRule::separate(vec![1.0, 1.5], vec![1.0, 1.0]).unwrap(),
            RecommendationRule::new(
                RuleKind::MinStatistic {
                    threshold: 1.0,
                    variances: vec![1.0, 1.0],
                },
                RuleMeta::default(),
            )
            .unwrap(),
        ];
        for r in &rules {
            for p in rejection_probs(r, &model, &Method::Exact).unwrap().probs {
                assert!(p >= 1.0 - 1e-6);
            }
        }
    }

    #[test]
    fn holm_requires_simulation() {
        let rule = RecommendationRule::holm(0.1_f64, vec![1.0, 1.0]).unwrap();
        let model = GaussianModel::standard(vec![0.0, 0.0]).unwrap();
        assert!(matches!(
            rejection_probs(&rule, &model, &Method::Exact),
            Err(Error::NeedsSimulation(_))
        ));
        let p = rejection_probs(&rule, &model, &Method::Auto(McConfig::new(20_000, 1))).unwrap();
        assert!(p.simulated);
    }

    #[test]
    fn correlated_marginals_exact_joint_simulated() {
        let cov = Matrix::from_rows(vec![vec![1.0, 0.5], vec![0.5, 1.0]]).unwrap();
        let model = GaussianModel::new(vec![0.0_f64, 0.0], cov).unwrap();
        let rule = RecommendationRule::separate(vec![1.0, 1.0], vec![1.0, 1.0]).unwrap();
        let p = rejection_probs(&rule, &model, &Method::Exact).unwrap();
        assert!(!p.simulated);
        assert!(summarize(&rule, &model, Some(1), true, &Method::Exact).is_err());
        let s = summarize(&rule, &model, Some(1), true, &Method::Auto(McConfig::new(50_000, 2))).unwrap();
        assert!(s.simulated);
        // union probability lies between the marginal and the independent case
        let a = s.any.unwrap();
        let marginal = norm_sf(1.0);
        assert!(a.value > marginal && a.value < 1.0 - (1.0 - marginal).powi(2));
    }

    #[test]
    fn poisson_binomial_matches_enumeration() {
        let p = [0.1_f64, 0.35, 0.7, 0.05];
        let dist = poisson_binomial(&p);
        let mut brute = [0.0_f64; 5];
        for mask in 0u32..16 {
            let mut pr = 1.0;
            for (k, &pk) in p.iter().enumerate() {
                pr *= if mask >> k & 1 == 1 { pk } else { 1.0 - pk };
            }
            brute[mask.count_ones() as usize] += pr;
        }
        for (a, b) in dist.iter().zip(brute) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn group_exceedance_sums_to_max_exceedance() {
        let mu = [0.3_f64, -0.2, 0.9];
        let sd = [1.0, 1.0, 1.0];
        let t = 1.1;
        let p = argmax_exceedance(t, &mu, &sd);
        let total: f64 = p.iter().sum();
        let union = 1.0 - mu.iter().map(|m| norm_cdf(t - m)).product::<f64>();
        assert!((total - union).abs() < 1e-10, "{total} vs {union}");
    }

    #[test]
    fn exact_and_simulated_fdp_agree() {
        let rule = RecommendationRule::separate(vec![1.0_f64, 1.2, 0.8], vec![1.0; 3]).unwrap();
        let model = GaussianModel::standard(vec![-0.3, 0.4, -0.1]).unwrap();
        let exact = summarize(&rule, &model, Some(2), true, &Method::Exact).unwrap();
        let sim = summarize(&rule, &model, Some(2), true, &mc(200_000, 11)).unwrap();
        let pairs = [
            (exact.fdp.unwrap(), sim.fdp.unwrap()),
            (exact.fdr.unwrap(), sim.fdr.unwrap()),
            (exact.any.unwrap(), sim.any.unwrap()),
            (exact.at_least_kappa.unwrap(), sim.at_least_kappa.unwrap()),
            (exact.filtered_welfare.unwrap(), sim.filtered_welfare.unwrap()),
            (
                exact.combinations_at_least_kappa.unwrap(),
                sim.combinations_at_least_kappa.unwrap(),
            ),
            (exact.expected_discoveries, sim.expected_discoveries),
        ];
        for (e, s) in pairs {
            assert!((e.value - s.value).abs() < 4.0 * s.std_error, "{e:?} vs {s:?}");
        }
    }
}
