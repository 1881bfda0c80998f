//! Gaussian probability machinery and the Monte Carlo engine.

pub mod evaluate;
pub mod model;
pub mod montecarlo;
pub mod normal;
pub mod quadrature;

pub use evaluate::{rejection_probs, summarize, DiscoverySummary, Estimate, Method, RejectionProbs};
pub use model::{GaussianModel, McConfig};
pub use montecarlo::{mvn_sample, simulate_means};
pub use normal::{critical_value, norm_cdf, norm_pdf, norm_quantile, norm_sf};
