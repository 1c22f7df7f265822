use nalgebra::{DMatrix, DVector};

use super::covariance::FgnCovariance;
use crate::error::{Error, Result};
use crate::rng::RngSpec;
use crate::types::{HurstIndex, SeriesKind, SeriesMeta, StationarySeries};

/// Default size cap of the dense-factorization sampler.
pub const EXACT_ORACLE_CAP: usize = 2048;

/// Fractional Gaussian noise via the Cholesky factor of the full Toeplitz
/// covariance. `O(n^3)` setup, `O(n^2)` per sample; used as the reference law.
#[derive(Debug, Clone)]
pub struct ExactFgn {
    hurst: HurstIndex,
    lower: DMatrix<f64>,
}

impl ExactFgn {
    pub fn new(hurst: HurstIndex, n: usize) -> Result<Self> {
        Self::with_cap(hurst, n, EXACT_ORACLE_CAP)
    }

    pub fn with_cap(hurst: HurstIndex, n: usize, cap: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n", "need at least one sample"));
        }
        if n > cap {
            return Err(Error::OracleSizeExceeded { requested: n, cap });
        }
        let gamma = FgnCovariance::new(hurst, n - 1);
        let g = gamma.values();
        let cov = DMatrix::from_fn(n, n, |i, j| g[i.abs_diff(j)]);
        let chol = cov.cholesky().ok_or_else(|| {
            Error::Numerical(format!(
                "covariance matrix of size {n} (H = {hurst}) is not positive definite"
            ))
        })?;
        Ok(Self {
            hurst,
            lower: chol.unpack(),
        })
    }

    pub fn len(&self) -> usize {
        self.lower.nrows()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sample(&self, rng: RngSpec) -> StationarySeries {
        let z = DVector::from_vec(rng.gaussians().take_vec(self.len()));
        let x = &self.lower * z;
        StationarySeries::new(
            x.as_slice().to_vec(),
            1.0,
            SeriesMeta::new(SeriesKind::Fgn, Some(self.hurst)),
        )
        .expect("finite Gaussian sample")
    }
}

/// One exact fGn sample of length `n` (unit lag).
pub fn generate_fgn_exact(hurst: HurstIndex, n: usize, rng: RngSpec) -> Result<StationarySeries> {
    Ok(ExactFgn::new(hurst, n)?.sample(rng))
}
