//! Simulation and estimation of long-memory processes.
//!
//! * [`generate`]: fractional Gaussian noise and fractional Brownian motion
//!   (circulant embedding, with a Cholesky reference sampler).
//! * [`hermite`]: Hermite processes of order `k` (a lattice Wiener-chaos
//!   sampler for small sizes, and Hermite-transformed fGn partial sums).
//! * [`multifractal`]: binomial cascades, subordination `B_H(θ(t))` and
//!   partition-function estimates of `τ(q)`.
//! * [`estimate`]: R/S, aggregated-variance and periodogram estimators of `H`.
//! * [`analyze`]: normalized partial sums and limit-theorem experiments.

pub mod analyze;
pub mod error;
pub mod estimate;
pub mod generate;
pub mod hermite;
pub mod multifractal;
pub mod numeric;
pub mod rng;
pub mod types;

pub use error::{Error, Result};
pub use rng::{gaussian_stream, RngSpec};
pub use types::{
    make_grid, HermiteOrder, HurstIndex, ProcessPath, SeriesKind, SeriesMeta, StationarySeries,
    TimeGrid,
};
pub use analyze::{convergence_experiment, exact_sn2, normalized_partial_sums};
pub use estimate::{
    aggregated_variance_hurst, periodogram_hurst, rs_hurst, rs_statistic, sample_autocovariance,
    BlockMode, ScalingReport,
};
pub use generate::{fbm_path, generate_fgn_exact, generate_fgn_fast, FgnCovariance};
pub use hermite::{h0_from, hermite_polynomial, HermiteSpec};
pub use multifractal::{generate_cascade, partition_function, ActivityTime, Multiplier};
