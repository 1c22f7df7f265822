use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::covariance::fgn_acov;
use crate::error::{Error, Result};
use crate::rng::RngSpec;
use crate::types::{HurstIndex, SeriesKind, SeriesMeta, StationarySeries};

/// Relative threshold below which a circulant eigenvalue counts as negative.
pub const NEGATIVE_EIGENVALUE_TOLERANCE: f64 = 1e-8;

/// Fractional Gaussian noise by circulant embedding of the covariance.
///
/// The first row `γ(0), …, γ(M), γ(M-1), …, γ(1)` with `M >= n-1` a power
/// of two is diagonalized by an FFT of length `2M`. Samples cost one FFT.
#[derive(Clone)]
pub struct CirculantFgn {
    hurst: HurstIndex,
    n: usize,
    /// `sqrt(λ_j / m)` for `j = 0..=M`.
    amplitudes: Vec<f64>,
    fft: Option<Arc<dyn Fft<f64>>>,
}

impl std::fmt::Debug for CirculantFgn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CirculantFgn")
            .field("hurst", &self.hurst)
            .field("n", &self.n)
            .field("embedding", &self.embedding_len())
            .finish()
    }
}

impl CirculantFgn {
    pub fn new(hurst: HurstIndex, n: usize) -> Result<Self> {
        Self::from_autocovariance(hurst, n, |lag| fgn_acov(hurst, lag as u64))
    }

    /// Embedding for an arbitrary autocovariance; `hurst` only labels the output.
    pub(crate) fn from_autocovariance(
        hurst: HurstIndex,
        n: usize,
        acov: impl Fn(usize) -> f64,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n", "need at least one sample"));
        }
        if n == 1 {
            return Ok(Self {
                hurst,
                n,
                amplitudes: vec![1.0],
                fft: None,
            });
        }
        let half = (n - 1).next_power_of_two();
        let m = 2 * half;
        let mut row: Vec<Complex<f64>> = (0..m)
            .map(|j| {
                let lag = if j <= half { j } else { m - j };
                Complex::new(acov(lag), 0.0)
            })
            .collect();
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(m);
        fft.process(&mut row);
        let eig: Vec<f64> = row[..=half].iter().map(|c| c.re).collect();
        let max = eig.iter().cloned().fold(f64::MIN, f64::max);
        if let Some((index, &value)) = eig
            .iter()
            .enumerate()
            .find(|(_, &v)| v < -NEGATIVE_EIGENVALUE_TOLERANCE * max)
        {
            return Err(Error::EmbeddingNotNonnegative { index, value, max });
        }
        // Entries in (-tol·max, 0) are rounding noise around zero.
        let amplitudes = eig.iter().map(|&v| (v.max(0.0) / m as f64).sqrt()).collect();
        Ok(Self {
            hurst,
            n,
            amplitudes,
            fft: Some(fft),
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Circulant size `m` (1 for the single-sample case).
    pub fn embedding_len(&self) -> usize {
        self.fft.as_ref().map_or(1, |f| f.len())
    }

    pub fn sample(&self, rng: RngSpec) -> StationarySeries {
        let values = self.sample_values(rng);
        StationarySeries::new(values, 1.0, SeriesMeta::new(SeriesKind::Fgn, Some(self.hurst)))
            .expect("finite Gaussian sample")
    }

    pub(crate) fn sample_values(&self, rng: RngSpec) -> Vec<f64> {
        let Some(fft) = &self.fft else {
            return rng.gaussians().take_vec(1);
        };
        let m = fft.len();
        let half = m / 2;
        let z = rng.gaussians().take_vec(m);
        let mut w = vec![Complex::new(0.0, 0.0); m];
        w[0] = Complex::new(self.amplitudes[0] * z[0], 0.0);
        w[half] = Complex::new(self.amplitudes[half] * z[1], 0.0);
        for j in 1..half {
            let a = self.amplitudes[j] * std::f64::consts::FRAC_1_SQRT_2;
            let c = Complex::new(a * z[2 * j], a * z[2 * j + 1]);
            w[j] = c;
            w[m - j] = c.conj();
        }
        fft.process(&mut w);
        w[..self.n].iter().map(|c| c.re).collect()
    }
}

/// One fGn sample of length `n` (unit lag) by circulant embedding.
pub fn generate_fgn_fast(hurst: HurstIndex, n: usize, rng: RngSpec) -> Result<StationarySeries> {
    Ok(CirculantFgn::new(hurst, n)?.sample(rng))
}
