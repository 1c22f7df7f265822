//! Fractional Gaussian noise and fractional Brownian motion.
//!
//! All laws are normalized so that `E[B_H(1)^2] = 1`. The circulant sampler
//! is the production path; the Cholesky sampler is the reference it is
//! checked against.

mod circulant;
mod covariance;
mod exact;
mod integral;

pub use circulant::{generate_fgn_fast, CirculantFgn, NEGATIVE_EIGENVALUE_TOLERANCE};
pub use covariance::{fbm_covariance, fgn_autocovariance, FgnCovariance};
pub use exact::{generate_fgn_exact, ExactFgn, EXACT_ORACLE_CAP};
pub use integral::{cumulate, step_integral, StepFunction};

pub(crate) use covariance::fgn_acov;

use crate::error::{Error, Result};
use crate::rng::RngSpec;
use crate::types::{HurstIndex, ProcessPath, StationarySeries};

/// Fractional Brownian motion on `[0, horizon]` with `steps` increments.
pub fn fbm_path(hurst: HurstIndex, steps: usize, horizon: f64, rng: RngSpec) -> Result<ProcessPath> {
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(Error::invalid("horizon", format!("must be positive, got {horizon}")));
    }
    let noise = generate_fgn_fast(hurst, steps, rng)?;
    let dt = horizon / steps as f64;
    let relabelled = StationarySeries::new(noise.into_values(), dt, crate::types::SeriesMeta::new(
        crate::types::SeriesKind::Fgn,
        Some(hurst),
    ))?;
    Ok(cumulate(&relabelled))
}
