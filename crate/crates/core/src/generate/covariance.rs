use crate::error::{Error, Result};
use crate::types::HurstIndex;

/// `E[B_H(s) B_H(t)]` for unit-variance fractional Brownian motion.
pub fn fbm_covariance(h: HurstIndex, s: f64, t: f64) -> Result<f64> {
    if !(s >= 0.0 && t >= 0.0) {
        return Err(Error::invalid(
            "time",
            format!("times must be nonnegative, got s = {s}, t = {t}"),
        ));
    }
    let a = h.twice();
    Ok(0.5 * (s.powf(a) + t.powf(a) - (t - s).abs().powf(a)))
}

/// Autocovariance of unit-lag fractional Gaussian noise at `lag`.
pub fn fgn_autocovariance(h: HurstIndex, lag: i64) -> Result<f64> {
    if lag < 0 {
        return Err(Error::invalid("lag", format!("lag must be nonnegative, got {lag}")));
    }
    Ok(fgn_acov(h, lag as u64))
}

const SERIES_FROM_LAG: u64 = 8;

/// `½((k+1)^{2H} - 2k^{2H} + (k-1)^{2H})`, accurate to a few ulps for every lag.
///
/// For `k >= 8` the second difference is expanded as
/// `k^{2H} Σ_{j>=1} C(2H, 2j) k^{-2j}`, which avoids the cancellation of the
/// direct form at large lags and is exactly zero when `H = 1/2`.
pub(crate) fn fgn_acov(h: HurstIndex, k: u64) -> f64 {
    let a = h.twice();
    match k {
        0 => 1.0,
        k if k < SERIES_FROM_LAG => {
            let k = k as f64;
            0.5 * ((k + 1.0).powf(a) - 2.0 * k.powf(a) + (k - 1.0).powf(a))
        }
        k => {
            let kf = k as f64;
            let x2 = 1.0 / (kf * kf);
            let mut coef = 1.0; // C(a, m)
            let mut power = 1.0; // k^{-2j}
            let mut sum = 0.0;
            let mut m = 0u32;
            for _ in 0..200 {
                coef *= (a - m as f64) / (m + 1) as f64;
                coef *= (a - (m + 1) as f64) / (m + 2) as f64;
                m += 2;
                power *= x2;
                let term = coef * power;
                sum += term;
                if term == 0.0 || term.abs() <= 1e-18 * sum.abs() {
                    break;
                }
            }
            kf.powf(a) * sum
        }
    }
}

/// `γ(0..=maxlag)` for fractional Gaussian noise.
#[derive(Debug, Clone, PartialEq)]
pub struct FgnCovariance {
    hurst: HurstIndex,
    values: Vec<f64>,
}

impl FgnCovariance {
    pub fn new(hurst: HurstIndex, maxlag: usize) -> Self {
        let values = (0..=maxlag as u64).map(|k| fgn_acov(hurst, k)).collect();
        Self { hurst, values }
    }

    pub fn hurst(&self) -> HurstIndex {
        self.hurst
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn maxlag(&self) -> usize {
        self.values.len() - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn h(v: f64) -> HurstIndex {
        HurstIndex::new(v).unwrap()
    }

    #[test]
    fn covariance_examples() {
        assert_eq!(fbm_covariance(h(0.5), 1.0, 2.0).unwrap(), 1.0);
        for v in [0.2, 0.5, 0.75] {
            assert_eq!(fbm_covariance(h(v), 0.0, 3.0).unwrap(), 0.0);
        }
        let c = fbm_covariance(h(0.75), 1.0, 2.0).unwrap();
        assert!((c - 2f64.sqrt()).abs() < 1e-12, "{c}");
        assert!(fbm_covariance(h(0.5), -1.0, 2.0).is_err());
    }

    #[test]
    fn autocovariance_examples() {
        assert_eq!(fgn_autocovariance(h(0.5), 3).unwrap(), 0.0);
        assert_eq!(fgn_autocovariance(h(0.5), 30).unwrap(), 0.0);
        for v in [0.1, 0.5, 0.9] {
            assert_eq!(fgn_autocovariance(h(v), 0).unwrap(), 1.0);
        }
        let g1 = fgn_autocovariance(h(0.75), 1).unwrap();
        assert!((g1 - 0.414_213_562_373_095).abs() < 1e-12);
        assert!(fgn_autocovariance(h(0.7), -1).is_err());
    }

    #[test]
    fn series_and_direct_forms_meet() {
        // At the switch-over lag both forms are accurate to well under 1e-12.
        for v in [0.3, 0.55, 0.7, 0.9] {
            let k = SERIES_FROM_LAG as f64;
            let a = 2.0 * v;
            let direct = 0.5 * ((k + 1.0).powf(a) - 2.0 * k.powf(a) + (k - 1.0).powf(a));
            let series = fgn_acov(h(v), SERIES_FROM_LAG);
            assert!(((direct - series) / series).abs() < 1e-12, "H={v}");
        }
    }

    #[test]
    fn decay_constant_at_large_lag() {
        for v in [0.6, 0.75, 0.9] {
            let k: f64 = 1e6;
            let ratio = fgn_acov(h(v), 1_000_000) * k.powf(2.0 - 2.0 * v) / (v * (2.0 * v - 1.0));
            assert!((ratio - 1.0).abs() < 0.01, "H={v}: {ratio}");
        }
    }

    #[test]
    fn antipersistent_lags_are_negative() {
        for k in 1..50 {
            assert!(fgn_acov(h(0.3), k) < 0.0);
            assert!(fgn_acov(h(0.8), k) > 0.0);
        }
    }

    #[test]
    fn partial_sums_diverge_for_long_memory() {
        // Σ_{k<=K} γ(k) grows like K^{2H-1}; the ratio between decades tends to 10^{2H-1}.
        for v in [0.7, 0.9] {
            let hh = h(v);
            let mut sums = Vec::new();
            let mut acc = 0.0;
            let mut k = 0u64;
            for limit in [1_000u64, 10_000, 100_000] {
                while k <= limit {
                    acc += fgn_acov(hh, k);
                    k += 1;
                }
                sums.push(acc);
            }
            let target = 10f64.powf(2.0 * v - 1.0);
            for w in sums.windows(2) {
                let ratio = w[1] / w[0];
                assert!(ratio > 1.0);
                assert!((ratio / target - 1.0).abs() < 0.05, "H={v}: {ratio} vs {target}");
            }
        }
    }

    proptest! {
        #[test]
        fn self_similar_covariance(v in 0.05f64..0.95, s in 0.0f64..10.0, t in 0.0f64..10.0, a in 0.01f64..100.0) {
            let hh = h(v);
            let lhs = fbm_covariance(hh, a * s, a * t).unwrap();
            let rhs = a.powf(2.0 * v) * fbm_covariance(hh, s, t).unwrap();
            let scale = (a * s.max(t)).powf(2.0 * v).max(1e-300);
            prop_assert!((lhs - rhs).abs() <= 1e-10 * scale, "{} vs {}", lhs, rhs);
        }

        #[test]
        fn stationary_increments(v in 0.05f64..0.95, s in 0.0f64..10.0, t in 0.0f64..10.0) {
            let hh = h(v);
            let var = fbm_covariance(hh, t, t).unwrap() + fbm_covariance(hh, s, s).unwrap()
                - 2.0 * fbm_covariance(hh, s, t).unwrap();
            let want = (t - s).abs().powf(2.0 * v);
            let scale = s.max(t).powf(2.0 * v).max(1.0);
            prop_assert!((var - want).abs() <= 1e-12 * scale);
        }

        #[test]
        fn symmetric(v in 0.05f64..0.95, s in 0.0f64..10.0, t in 0.0f64..10.0) {
            let hh = h(v);
            prop_assert_eq!(fbm_covariance(hh, s, t).unwrap(), fbm_covariance(hh, t, s).unwrap());
        }
    }
}
