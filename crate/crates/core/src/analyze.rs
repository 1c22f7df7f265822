//! Normalized partial sums and limit-theorem experiments.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::generate::{fgn_acov, CirculantFgn};
use crate::hermite::hermite_polynomial;
use crate::numeric::{ecdf_sup_distance, moments, normal_cdf};
use crate::rng::RngSpec;
use crate::types::{HermiteOrder, HurstIndex, StationarySeries};

/// `Var(Σ_{k=1}^n X_k) = n γ(0) + 2 Σ_{k=1}^{n-1} (n-k) γ(k)`.
pub fn exact_sn2(autocov: &[f64], n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("n", "n must be positive"));
    }
    if autocov.len() < n {
        return Err(Error::invalid(
            "autocov",
            format!("need lags 0..={}, got {} values", n - 1, autocov.len()),
        ));
    }
    let mut s = 0.0;
    for k in (1..n).rev() {
        s += (n - k) as f64 * autocov[k];
    }
    Ok(n as f64 * autocov[0] + 2.0 * s)
}

/// `(1/s_n) Σ_{k ≤ ⌊nt⌋} X_k` sampled on a grid of times in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialSumProcess {
    pub t_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub s_n: f64,
    pub n: usize,
}

pub fn normalized_partial_sums(series: &StationarySeries, t_grid: &[f64], s_n: f64) -> Result<PartialSumProcess> {
    if !(s_n > 0.0 && s_n.is_finite()) {
        return Err(Error::invalid("s_n", format!("normalization must be positive, got {s_n}")));
    }
    if let Some(t) = t_grid.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return Err(Error::invalid("t_grid", format!("time {t} is outside [0, 1]")));
    }
    let x = series.values();
    let n = x.len();
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    for v in x {
        acc += v;
        prefix.push(acc);
    }
    // The relative nudge keeps products like 0.29·100 from flooring to 28.
    let values = t_grid
        .iter()
        .map(|&t| {
            let idx = ((n as f64 * t) * (1.0 + 1e-12)).floor() as usize;
            prefix[idx.min(n)] / s_n
        })
        .collect();
    Ok(PartialSumProcess {
        t_grid: t_grid.to_vec(),
        values,
        s_n,
        n,
    })
}

/// Input sequence for [`convergence_experiment`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Source {
    Iid,
    Fgn { hurst: HurstIndex },
}

impl Source {
    /// Parse `iid` or `fgn`; fGn needs a Hurst index.
    pub fn parse(name: &str, hurst: Option<HurstIndex>) -> Result<Self> {
        match (name, hurst) {
            ("iid", _) => Ok(Source::Iid),
            ("fgn", Some(hurst)) => Ok(Source::Fgn { hurst }),
            ("fgn", None) => Err(Error::invalid("hurst", "fgn source requires a Hurst index")),
            (other, _) => Err(Error::invalid("source", format!("unknown source '{other}' (expected iid or fgn)"))),
        }
    }

    fn autocov(&self, n: usize) -> Vec<f64> {
        match self {
            Source::Iid => {
                let mut r = vec![0.0; n];
                r[0] = 1.0;
                r
            }
            Source::Fgn { hurst } => (0..n as u64).map(|k| fgn_acov(*hurst, k)).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    Identity,
    Hermite(HermiteOrder),
}

impl Transform {
    fn apply(&self, x: f64) -> f64 {
        match self {
            Transform::Identity => x,
            Transform::Hermite(k) => hermite_polynomial(*k, x),
        }
    }

    /// Autocovariance of the transformed unit-variance Gaussian sequence:
    /// `Cov(h_k(X_i), h_k(X_j)) = k! ρ(i-j)^k`.
    fn map_autocov(&self, rho: &[f64]) -> Vec<f64> {
        match self {
            Transform::Identity => rho.to_vec(),
            Transform::Hermite(k) => {
                let f = k.factorial();
                rho.iter().map(|r| f * r.powi(k.get() as i32)).collect()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// `s_n` from [`exact_sn2`] applied to the known autocovariance.
    #[default]
    Exact,
    /// `s_n` is the sample standard deviation of the replicate sums.
    Empirical,
}

impl Normalization {
    pub fn as_str(self) -> &'static str {
        match self {
            Normalization::Exact => "exact",
            Normalization::Empirical => "empirical",
        }
    }
}

/// Distribution summary of the normalized sum at `t = 1` for one `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub s_n: f64,
    pub variance: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    /// `sup_x |F̂(x) - Φ(x)|`.
    pub sup_distance: f64,
    pub normalization: Normalization,
}

/// Replicates of `Σ_{k=1}^n T(X_k) / s_n` for each `n`, with exact `s_n`.
pub fn convergence_experiment(
    source: Source,
    transform: Transform,
    n_list: &[usize],
    replicates: usize,
    rng: RngSpec,
) -> Result<Vec<ConvergenceRow>> {
    convergence_experiment_with(source, transform, n_list, replicates, rng, Normalization::Exact)
}

pub fn convergence_experiment_with(
    source: Source,
    transform: Transform,
    n_list: &[usize],
    replicates: usize,
    rng: RngSpec,
    normalization: Normalization,
) -> Result<Vec<ConvergenceRow>> {
    if replicates < 2 {
        return Err(Error::invalid("replicates", format!("need at least 2 replicates, got {replicates}")));
    }
    if n_list.is_empty() || n_list.contains(&0) {
        return Err(Error::invalid("n", "n_list must be nonempty with positive entries"));
    }
    n_list
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let base = rng.child(i as u64);
            let generator = match source {
                Source::Fgn { hurst } => Some(CirculantFgn::new(hurst, n)?),
                Source::Iid => None,
            };
            let sums: Vec<f64> = (0..replicates as u64)
                .into_par_iter()
                .map(|r| {
                    let spec = base.child(r);
                    let x = match &generator {
                        Some(g) => g.sample_values(spec),
                        None => spec.gaussians().take_vec(n),
                    };
                    x.iter().map(|&v| transform.apply(v)).sum::<f64>()
                })
                .collect();
            let s_n = match normalization {
                Normalization::Exact => exact_sn2(&transform.map_autocov(&source.autocov(n)), n)?.sqrt(),
                Normalization::Empirical => {
                    let m = moments(&sums);
                    (m.variance * replicates as f64 / (replicates - 1) as f64).sqrt()
                }
            };
            if s_n.is_nan() || s_n <= 0.0 {
                return Err(Error::ZeroVariance);
            }
            let z: Vec<f64> = sums.iter().map(|s| s / s_n).collect();
            let m = moments(&z);
            Ok(ConvergenceRow {
                n,
                s_n,
                variance: m.variance,
                skewness: m.skewness,
                excess_kurtosis: m.excess_kurtosis,
                sup_distance: ecdf_sup_distance(&z, normal_cdf),
                normalization,
            })
        })
        .collect()
}
