//! Grid checks of maximin optimality, local power and error rates.

mod brute;
mod demo;
mod maximin;
mod power;
mod rates;
mod space;

pub use brute::{
    brute_force_optimal_threshold, BruteForceConfig, BruteForceResult, Candidate, Crossing, ThresholdSearch,
    MAX_BRUTE_FORCE_J,
};
pub use demo::{separate_vs_index_demo, PowerComparison};
pub use maximin::{
    check_maximin, closed_form_floor, GameSpec, GridMeta, Ladder, Mode, VerificationReport, Witness, MC_SIGMAS,
};
pub use power::{local_power, LocalPower};
pub use rates::{error_rates, ErrorRates};
pub use space::{Grid, NullRegion, ParameterSpace, SHELL};
