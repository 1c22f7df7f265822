//! Binomial multiplicative cascades as activity time, subordination
//! `B_H(θ(t))`, and partition-function estimates of the scaling function.
//!
//! The convention throughout is `E|X(t)|^q = c(q) t^{τ(q)+1}`, so the
//! log-log slope of the mean `q`-th absolute increment is `τ(q)+1` and
//! fractional Brownian motion gives `τ(q) = qH - 1`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numeric::fit_line;
use crate::rng::RngSpec;
use crate::types::{ProcessPath, SeriesKind, SeriesMeta, TimeGrid};

pub const MAX_CASCADE_DEPTH: u32 = 20;
/// Path points per cascade cell required by [`subordinate`].
pub const SUBORDINATION_OVERSAMPLING: usize = 4;
pub const MAX_ABS_MOMENT: f64 = 10.0;

/// Law of the left-child multiplier at each split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Multiplier {
    /// Left child always receives `m0`, right child `1 - m0`.
    Deterministic { m0: f64 },
    /// Left child receives `m0` or `1 - m0` with probability one half each.
    TwoPoint { m0: f64 },
}

impl Multiplier {
    pub fn m0(&self) -> f64 {
        match *self {
            Multiplier::Deterministic { m0 } | Multiplier::TwoPoint { m0 } => m0,
        }
    }

    fn validate(&self) -> Result<()> {
        let m0 = self.m0();
        if m0 > 0.0 && m0 < 1.0 {
            Ok(())
        } else {
            Err(Error::invalid("m0", format!("multiplier must lie in (0, 1), got {m0}")))
        }
    }

    /// `E[M^q]` for the multiplier of a single child.
    pub fn moment(&self, q: f64) -> f64 {
        let m0 = self.m0();
        0.5 * (m0.powf(q) + (1.0 - m0).powf(q))
    }
}

/// Nondecreasing time change on `[0, 1]` given by a cascade measure.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivityTime {
    depth: u32,
    mass: Vec<f64>,
    cumulative: Vec<f64>,
}

impl ActivityTime {
    fn from_mass(depth: u32, mass: Vec<f64>) -> Self {
        let mut cumulative = Vec::with_capacity(mass.len() + 1);
        cumulative.push(0.0);
        let mut acc = 0.0;
        for &m in &mass {
            acc += m;
            cumulative.push(acc);
        }
        // Rounding may leave the last partial sum a few ulps from 1.
        let last = cumulative.len() - 1;
        cumulative[last] = 1.0;
        for i in (0..last).rev() {
            if cumulative[i] > cumulative[i + 1] {
                cumulative[i] = cumulative[i + 1];
            }
        }
        Self {
            depth,
            mass,
            cumulative,
        }
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Mass of each of the `2^depth` dyadic cells.
    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    /// `θ(i / 2^depth)` for `i = 0..=2^depth`.
    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn cells(&self) -> usize {
        self.mass.len()
    }

    /// `θ` as a path on the dyadic grid.
    pub fn to_path(&self) -> ProcessPath {
        let grid = TimeGrid::new(self.cumulative.len(), 1.0 / self.cells() as f64)
            .expect("nonempty dyadic grid");
        ProcessPath::new(
            grid,
            self.cumulative.clone(),
            SeriesMeta::new(SeriesKind::Cascade, None),
            1.0,
        )
        .expect("cascade cumulative starts at 0")
    }
}

/// Binary multiplicative cascade with `2^depth` cells.
///
/// With `conservative` set the right child receives exactly the parent mass
/// minus the left child. Otherwise both children draw independent
/// multipliers and the final measure is renormalized to total mass one.
pub fn generate_cascade(
    depth: u32,
    multiplier: Multiplier,
    rng: RngSpec,
    conservative: bool,
) -> Result<ActivityTime> {
    if !(1..=MAX_CASCADE_DEPTH).contains(&depth) {
        return Err(Error::invalid(
            "depth",
            format!("depth must be in 1..={MAX_CASCADE_DEPTH}, got {depth}"),
        ));
    }
    multiplier.validate()?;
    let m0 = multiplier.m0();
    let mut draws = rng.gaussians();
    let mut pick = |random: bool| -> f64 {
        if random && draws.uniform() >= 0.5 {
            1.0 - m0
        } else {
            m0
        }
    };
    let random = matches!(multiplier, Multiplier::TwoPoint { .. });
    let mut mass = vec![1.0];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(mass.len() * 2);
        for &parent in &mass {
            let left = parent * pick(random);
            let right = if conservative {
                parent - left
            } else {
                parent * (1.0 - pick(random))
            };
            next.push(left);
            next.push(right);
        }
        mass = next;
    }
    if !conservative {
        let total: f64 = mass.iter().sum();
        mass.iter_mut().for_each(|m| *m /= total);
    }
    Ok(ActivityTime::from_mass(depth, mass))
}

/// `E[(mass of the leftmost cell)^q]` at the given depth.
///
/// For independent multipliers this factorizes as `E[M^q]^depth`; a
/// deterministic cascade always hands `m0` to the leftmost cell.
pub fn cascade_moment_exact(depth: u32, q: f64, multiplier: Multiplier) -> f64 {
    let per_level = match multiplier {
        Multiplier::Deterministic { m0 } => m0.powf(q),
        Multiplier::TwoPoint { .. } => multiplier.moment(q),
    };
    let mut acc = 1.0;
    for _ in 0..depth {
        acc *= per_level;
    }
    acc
}

/// `B_H(θ(t))` on the dyadic grid of `theta`, by linear interpolation of `path`.
pub fn subordinate(path: &ProcessPath, theta: &ActivityTime) -> Result<ProcessPath> {
    let grid = path.grid();
    if grid.horizon() < 1.0 - 1e-12 {
        return Err(Error::invalid(
            "path",
            format!("path must cover [0, 1], horizon is {}", grid.horizon()),
        ));
    }
    let steps_per_unit = 1.0 / grid.dt();
    let required = SUBORDINATION_OVERSAMPLING * theta.cells();
    if steps_per_unit + 1e-9 < required as f64 {
        return Err(Error::invalid(
            "path",
            format!(
                "resolution too coarse: need at least {} points on [0, 1] ({}x the {} cascade cells), got {}",
                required + 1,
                SUBORDINATION_OVERSAMPLING,
                theta.cells(),
                steps_per_unit.floor() as usize + 1
            ),
        ));
    }
    let v = path.values();
    let last = v.len() - 1;
    let values: Vec<f64> = theta
        .cumulative()
        .iter()
        .map(|&th| {
            let pos = th / grid.dt();
            let i = (pos.floor() as usize).min(last);
            if i == last {
                return v[last];
            }
            let frac = pos - i as f64;
            if frac == 0.0 {
                v[i]
            } else {
                v[i] + frac * (v[i + 1] - v[i])
            }
        })
        .collect();
    let out_grid = TimeGrid::new(values.len(), 1.0 / theta.cells() as f64)?;
    ProcessPath::new(
        out_grid,
        values,
        SeriesMeta::new(SeriesKind::Subordinated, path.meta().hurst),
        path.scale(),
    )
}

/// Estimated `τ̂(q)` with per-scale data.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFunction {
    pub qs: Vec<f64>,
    pub tau: Vec<f64>,
    /// Intercepts `log ĉ(q)` of the log-log fits.
    pub intercepts: Vec<f64>,
    /// Cell sizes `T / 2^j` per depth.
    pub scales: Vec<f64>,
    /// `statistics[iq][ij]` = mean `|increment|^q` at depth `depths[ij]`.
    pub statistics: Vec<Vec<f64>>,
    pub depths: Vec<u32>,
}

impl ScalingFunction {
    /// Discrete second differences of `τ̂` over consecutive `q`.
    pub fn second_differences(&self) -> Vec<f64> {
        self.tau
            .windows(3)
            .zip(self.qs.windows(3))
            .map(|(t, q)| {
                let left = (t[1] - t[0]) / (q[1] - q[0]);
                let right = (t[2] - t[1]) / (q[2] - q[1]);
                right - left
            })
            .collect()
    }
}

/// Options for [`partition_function`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PartitionOptions {
    pub allow_negative_q: bool,
}

/// Moment scaling of a path with `2^J` increments.
///
/// At depth `j` the path is cut into `2^j` cells; the statistic is the mean
/// of `|increment|^q` over cells, regressed on the log cell size. The slope
/// estimates `τ(q)+1`, so `τ̂(q) = slope - 1`.
pub fn partition_function(
    series: &ProcessPath,
    qs: &[f64],
    depths: &[u32],
    options: PartitionOptions,
) -> Result<ScalingFunction> {
    let steps = series.len() - 1;
    if steps == 0 || !steps.is_power_of_two() {
        return Err(Error::invalid(
            "series",
            format!("number of increments must be a power of two, got {steps}"),
        ));
    }
    let max_depth = steps.trailing_zeros();
    if depths.len() < 2 {
        return Err(Error::InsufficientScales {
            usable: depths.len(),
            required: 2,
        });
    }
    if let Some(&d) = depths.iter().find(|&&d| d > max_depth) {
        return Err(Error::invalid(
            "depth",
            format!("depth {d} exceeds the {steps} available increments (max {max_depth})"),
        ));
    }
    let mut sorted = depths.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::invalid("depth", "depths must be distinct"));
    }
    for &q in qs {
        if !q.is_finite() || q.abs() > MAX_ABS_MOMENT {
            return Err(Error::invalid("q", format!("moment order must satisfy |q| <= {MAX_ABS_MOMENT}, got {q}")));
        }
        if q < 0.0 && !options.allow_negative_q {
            return Err(Error::invalid(
                "q",
                format!("negative moment {q} requires allow_negative_q"),
            ));
        }
    }
    let horizon = series.grid().horizon();
    let v = series.values();
    let increments: Vec<Vec<f64>> = depths
        .iter()
        .map(|&j| {
            let stride = steps >> j;
            (0..(1usize << j))
                .map(|i| (v[(i + 1) * stride] - v[i * stride]).abs())
                .collect()
        })
        .collect();
    let scales: Vec<f64> = depths
        .iter()
        .map(|&j| horizon / (1u64 << j) as f64)
        .collect();
    let log_scales: Vec<f64> = scales.iter().map(|s| s.ln()).collect();

    let per_q: Vec<Result<(f64, f64, Vec<f64>)>> = qs
        .par_iter()
        .map(|&q| {
            let mut stats = Vec::with_capacity(depths.len());
            for (ij, cells) in increments.iter().enumerate() {
                if q < 0.0 {
                    if let Some(cell) = cells.iter().position(|&d| d == 0.0) {
                        return Err(Error::DegenerateIncrement {
                            q,
                            depth: depths[ij],
                            cell,
                        });
                    }
                }
                let s = cells.iter().map(|d| d.powf(q)).sum::<f64>() / cells.len() as f64;
                stats.push(s);
            }
            let logs: Vec<f64> = stats.iter().map(|s| s.ln()).collect();
            if logs.iter().any(|l| !l.is_finite()) {
                return Err(Error::Numerical(format!(
                    "zero partition sum for q = {q}; the path is constant at some scale"
                )));
            }
            let fit = fit_line(&log_scales, &logs);
            Ok((fit.slope - 1.0, fit.intercept, stats))
        })
        .collect();
    let mut tau = Vec::with_capacity(qs.len());
    let mut intercepts = Vec::with_capacity(qs.len());
    let mut statistics = Vec::with_capacity(qs.len());
    for r in per_q {
        let (t, c, s) = r?;
        tau.push(t);
        intercepts.push(c);
        statistics.push(s);
    }
    Ok(ScalingFunction {
        qs: qs.to_vec(),
        tau,
        intercepts,
        scales,
        statistics,
        depths: depths.to_vec(),
    })
}

/// `τ(q)` of the cascade measure itself, `-log2 E[M^q] - 1`.
pub fn cascade_tau(q: f64, multiplier: Multiplier) -> f64 {
    -multiplier.moment(q).log2() - 1.0
}
