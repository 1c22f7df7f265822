//! Estimators of the Hurst index from a stationary series.
//!
//! Each estimator reduces the series to one statistic per scale and fits an
//! unweighted least-squares line in log-log coordinates; the fitted line and
//! the per-scale table are returned as a [`ScalingReport`].

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::numeric::{fit_line, mean, LineFit};
use crate::types::StationarySeries;

pub const MIN_SCALES: usize = 3;
pub const MIN_PERIODOGRAM_LENGTH: usize = 128;
pub const MIN_PERIODOGRAM_FREQUENCIES: usize = 5;
pub const DEFAULT_PERIODOGRAM_CUTOFF: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    RescaledRange,
    AggregatedVariance,
    Periodogram,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::RescaledRange => "rs",
            Method::AggregatedVariance => "aggvar",
            Method::Periodogram => "periodogram",
        }
    }
}

/// Per-scale statistics and their log-log fit.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    pub method: Method,
    /// Window sizes, block sizes or angular frequencies.
    pub scales: Vec<f64>,
    pub statistics: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub residuals: Vec<f64>,
    pub hurst: f64,
    /// Blocks dropped because they had zero variance.
    pub skipped: usize,
}

impl ScalingReport {
    fn build(
        method: Method,
        scales: Vec<f64>,
        statistics: Vec<f64>,
        skipped: usize,
        to_hurst: impl Fn(f64) -> f64,
    ) -> Self {
        let fit = loglog_fit(&scales, &statistics);
        Self {
            method,
            hurst: to_hurst(fit.slope),
            slope: fit.slope,
            intercept: fit.intercept,
            stderr: fit.stderr,
            residuals: fit.residuals,
            scales,
            statistics,
            skipped,
        }
    }

    /// Refit from the stored table.
    pub fn refit(&self) -> LineFit {
        loglog_fit(&self.scales, &self.statistics)
    }
}

fn loglog_fit(scales: &[f64], stats: &[f64]) -> LineFit {
    let xs: Vec<f64> = scales.iter().map(|s| s.ln()).collect();
    let ys: Vec<f64> = stats.iter().map(|s| s.ln()).collect();
    fit_line(&xs, &ys)
}

/// Powers of two `2^lo ..= 2^hi`.
pub fn dyadic_schedule(lo: u32, hi: u32) -> Vec<usize> {
    (lo..=hi).map(|e| 1usize << e).collect()
}

/// R/S windows `64 ..= n/8`, starting lower for short series so that at
/// least three windows remain. Small windows bias R/S upward.
pub fn default_rs_schedule(n: usize) -> Vec<usize> {
    let top = n.max(1).ilog2().saturating_sub(3).max(3);
    dyadic_schedule(6.min(top - 2).max(1), top)
}

/// Aggregation blocks `2 ..= n/16`.
pub fn default_aggvar_blocks(n: usize) -> Vec<usize> {
    let top = n.max(1).ilog2().saturating_sub(4).max(1);
    dyadic_schedule(1, top)
}

/// R/S over a slice: range of mean-adjusted partial sums (with `W_0 = 0`)
/// divided by the population standard deviation.
fn rescaled_range(x: &[f64]) -> Result<f64> {
    if x.iter().all(|&v| v == x[0]) {
        return Err(Error::ZeroVariance);
    }
    let m = mean(x);
    let (mut w, mut lo, mut hi, mut ss) = (0.0f64, 0.0f64, 0.0f64, 0.0);
    for &v in x {
        let d = v - m;
        w += d;
        lo = lo.min(w);
        hi = hi.max(w);
        ss += d * d;
    }
    let s = (ss / x.len() as f64).sqrt();
    Ok((hi - lo) / s)
}

/// R/S statistic of the first `window` values.
pub fn rs_statistic(series: &StationarySeries, window: usize) -> Result<f64> {
    if window < 2 || window > series.len() {
        return Err(Error::invalid(
            "window",
            format!("window must be in 2..={}, got {window}", series.len()),
        ));
    }
    rescaled_range(&series.values()[..window])
}

/// How windows tile the series in [`rs_hurst`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BlockMode {
    #[default]
    Disjoint,
    /// Windows start every half window.
    Overlapping,
}

/// Mean R/S per window size; `Ĥ` is the log-log slope.
pub fn rs_hurst(series: &StationarySeries, schedule: &[usize], mode: BlockMode) -> Result<ScalingReport> {
    check_schedule("schedule", schedule, series.len())?;
    let x = series.values();
    let mut scales = Vec::new();
    let mut stats = Vec::new();
    let mut skipped = 0;
    for &w in schedule {
        if w < 2 {
            return Err(Error::invalid("schedule", format!("window {w} is below 2")));
        }
        let stride = match mode {
            BlockMode::Disjoint => w,
            BlockMode::Overlapping => (w / 2).max(1),
        };
        let mut acc = 0.0;
        let mut used = 0usize;
        let mut start = 0;
        while start + w <= x.len() {
            match rescaled_range(&x[start..start + w]) {
                Ok(rs) => {
                    acc += rs;
                    used += 1;
                }
                Err(Error::ZeroVariance) => skipped += 1,
                Err(e) => return Err(e),
            }
            start += stride;
        }
        if used > 0 {
            scales.push(w as f64);
            stats.push(acc / used as f64);
        }
    }
    if scales.len() < MIN_SCALES {
        return Err(Error::InsufficientScales {
            usable: scales.len(),
            required: MIN_SCALES,
        });
    }
    Ok(ScalingReport::build(Method::RescaledRange, scales, stats, skipped, |s| s))
}

fn check_schedule(param: &'static str, schedule: &[usize], limit: usize) -> Result<()> {
    if schedule.len() < MIN_SCALES {
        return Err(Error::InsufficientScales {
            usable: schedule.len(),
            required: MIN_SCALES,
        });
    }
    if schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid(param, "sizes must be strictly increasing"));
    }
    let max = *schedule.last().unwrap();
    if max > limit {
        return Err(Error::invalid(
            param,
            format!("largest size {max} exceeds the limit {limit} for a length-{} series", limit),
        ));
    }
    Ok(())
}

/// Sample variance of disjoint block means per block size; `Ĥ = 1 + slope/2`.
pub fn aggregated_variance_hurst(series: &StationarySeries, block_sizes: &[usize]) -> Result<ScalingReport> {
    let n = series.len();
    check_schedule("block_sizes", block_sizes, n / 4)?;
    let x = series.values();
    let mut stats = Vec::with_capacity(block_sizes.len());
    for &m in block_sizes {
        if m == 0 {
            return Err(Error::invalid("block_sizes", "block size must be positive"));
        }
        let means: Vec<f64> = x.chunks_exact(m).map(mean).collect();
        let mu = mean(&means);
        let var = means.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / (means.len() - 1) as f64;
        if var.is_nan() || var <= 0.0 {
            return Err(Error::ZeroVariance);
        }
        stats.push(var);
    }
    let scales = block_sizes.iter().map(|&m| m as f64).collect();
    Ok(ScalingReport::build(Method::AggregatedVariance, scales, stats, 0, |s| 1.0 + 0.5 * s))
}

/// Biased sample autocovariance `r̂(0..=maxlag)`.
pub fn sample_autocovariance(series: &StationarySeries, maxlag: usize) -> Result<Vec<f64>> {
    let n = series.len();
    if maxlag >= n {
        return Err(Error::invalid(
            "maxlag",
            format!("maxlag must be below the series length {n}, got {maxlag}"),
        ));
    }
    let x = series.values();
    let m = mean(x);
    let d: Vec<f64> = x.iter().map(|v| v - m).collect();
    Ok((0..=maxlag)
        .map(|k| d.iter().zip(&d[k..]).map(|(a, b)| a * b).sum::<f64>() / n as f64)
        .collect())
}

/// Raw periodogram `I(λ_j) = |Σ_t x_t e^{i t λ_j}|² / (2πn)` at `λ_j = 2πj/n`, `j = 1..=jmax`.
pub fn periodogram(x: &[f64], jmax: usize) -> Vec<(f64, f64)> {
    let n = x.len();
    let mut buf: Vec<Complex<f64>> = x.iter().map(|&v| Complex::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let norm = 2.0 * std::f64::consts::PI * n as f64;
    (1..=jmax)
        .map(|j| {
            let lambda = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            (lambda, buf[j].norm_sqr() / norm)
        })
        .collect()
}

/// Slope of the log periodogram over the lowest `cutoff_fraction · n`
/// Fourier frequencies; `Ĥ = (1 - slope)/2`.
pub fn periodogram_hurst(series: &StationarySeries, cutoff_fraction: f64) -> Result<ScalingReport> {
    let n = series.len();
    if n < MIN_PERIODOGRAM_LENGTH {
        return Err(Error::invalid(
            "series",
            format!("periodogram needs at least {MIN_PERIODOGRAM_LENGTH} values, got {n}"),
        ));
    }
    if !(cutoff_fraction > 0.0 && cutoff_fraction <= 0.5) {
        return Err(Error::invalid(
            "cutoff",
            format!("cutoff fraction must be in (0, 0.5], got {cutoff_fraction}"),
        ));
    }
    let jmax = ((cutoff_fraction * n as f64).floor() as usize).min(n / 2);
    if jmax < MIN_PERIODOGRAM_FREQUENCIES {
        return Err(Error::InsufficientScales {
            usable: jmax,
            required: MIN_PERIODOGRAM_FREQUENCIES,
        });
    }
    let pg = periodogram(series.values(), jmax);
    if pg.iter().any(|&(_, i)| i.is_nan() || i <= 0.0) {
        return Err(Error::ZeroVariance);
    }
    let (scales, stats) = pg.into_iter().unzip();
    Ok(ScalingReport::build(Method::Periodogram, scales, stats, 0, |s| 0.5 * (1.0 - s)))
}
