//! Domain types shared by every module.

use std::fmt;

use crate::error::{Error, Result};

/// Self-similarity index, strictly inside `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct HurstIndex(f64);

impl HurstIndex {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 && value < 1.0 {
            Ok(Self(value))
        } else {
            Err(Error::invalid(
                "hurst",
                format!("H must lie strictly inside (0, 1), got {value}"),
            ))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `2H`, the exponent of the variance `t^{2H}`.
    pub fn twice(self) -> f64 {
        2.0 * self.0
    }

    /// True for `H > 1/2`, the long-memory regime.
    pub fn is_long_memory(self) -> bool {
        self.0 > 0.5
    }
}

impl fmt::Display for HurstIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Order `k >= 1` of a Hermite process or Hermite polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HermiteOrder(u32);

impl HermiteOrder {
    pub fn new(k: u32) -> Result<Self> {
        if k >= 1 {
            Ok(Self(k))
        } else {
            Err(Error::invalid("order", "Hermite order must be at least 1"))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Order one is the Gaussian case: the process is fractional Brownian motion.
    pub fn is_gaussian(self) -> bool {
        self.0 == 1
    }

    /// `k!` as a float.
    pub fn factorial(self) -> f64 {
        (1..=self.0).map(f64::from).product()
    }
}

/// Equally spaced time points `0, dt, ..., (n-1) dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    n: usize,
    dt: f64,
}

impl TimeGrid {
    pub fn new(n: usize, dt: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n", "grid needs at least one point"));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::invalid("dt", format!("step must be positive, got {dt}")));
        }
        Ok(Self { n, dt })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.dt
    }

    /// Last time on the grid.
    pub fn horizon(&self) -> f64 {
        self.time(self.n - 1)
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.time(i))
    }

    /// Index of a grid point equal to `t` up to a relative tolerance, if any.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let pos = t / self.dt;
        let idx = pos.round();
        if idx < 0.0 || idx > (self.n - 1) as f64 {
            return None;
        }
        let tol = 1e-9 * pos.abs().max(1.0);
        ((pos - idx).abs() <= tol).then_some(idx as usize)
    }
}

/// Constructs a grid; the free-standing form mirrors the rest of the API.
pub fn make_grid(n: usize, dt: f64) -> Result<TimeGrid> {
    TimeGrid::new(n, dt)
}

/// What produced a series or path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesKind {
    Fgn,
    Fbm,
    Hermite,
    Cascade,
    Subordinated,
    External,
}

impl SeriesKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SeriesKind::Fgn => "fgn",
            SeriesKind::Fbm => "fbm",
            SeriesKind::Hermite => "hermite",
            SeriesKind::Cascade => "cascade",
            SeriesKind::Subordinated => "subordinated",
            SeriesKind::External => "external",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "fgn" => SeriesKind::Fgn,
            "fbm" => SeriesKind::Fbm,
            "hermite" => SeriesKind::Hermite,
            "cascade" => SeriesKind::Cascade,
            "subordinated" => SeriesKind::Subordinated,
            "external" => SeriesKind::External,
            _ => return None,
        })
    }
}

impl fmt::Display for SeriesKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Generator descriptor attached to series and paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesMeta {
    pub kind: SeriesKind,
    pub hurst: Option<HurstIndex>,
}

impl SeriesMeta {
    pub fn new(kind: SeriesKind, hurst: Option<HurstIndex>) -> Self {
        Self { kind, hurst }
    }

    pub fn external() -> Self {
        Self::new(SeriesKind::External, None)
    }
}

/// Equally spaced stationary observations (increments).
#[derive(Debug, Clone, PartialEq)]
pub struct StationarySeries {
    values: Vec<f64>,
    dt: f64,
    meta: SeriesMeta,
}

impl StationarySeries {
    pub fn new(values: Vec<f64>, dt: f64, meta: SeriesMeta) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("series", "series must not be empty"));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(
                "series",
                format!("non-finite value at index {i}"),
            ));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::invalid("dt", format!("step must be positive, got {dt}")));
        }
        Ok(Self { values, dt, meta })
    }

    /// External data with unit step.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        Self::new(values, 1.0, SeriesMeta::external())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn meta(&self) -> SeriesMeta {
        self.meta
    }
}

/// Sample path on a time grid, anchored at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessPath {
    grid: TimeGrid,
    values: Vec<f64>,
    meta: SeriesMeta,
    scale: f64,
}

impl ProcessPath {
    /// `scale` records the multiplicative normalization applied when the
    /// path was built (1 when none).
    pub fn new(grid: TimeGrid, values: Vec<f64>, meta: SeriesMeta, scale: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(
                "path",
                format!("{} values for a {}-point grid", values.len(), grid.len()),
            ));
        }
        if values[0] != 0.0 {
            return Err(Error::invalid(
                "path",
                format!("path must start at 0, got {}", values[0]),
            ));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid("path", format!("non-finite value at index {i}")));
        }
        Ok(Self {
            grid,
            values,
            meta,
            scale,
        })
    }

    pub fn grid(&self) -> TimeGrid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn meta(&self) -> SeriesMeta {
        self.meta
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Value at grid time `t`; `None` if `t` is off-grid.
    pub fn at(&self, t: f64) -> Option<f64> {
        self.grid.index_of(t).map(|i| self.values[i])
    }

    /// Successive differences, as a stationary series with the grid step.
    pub fn increments(&self) -> Result<StationarySeries> {
        let diffs: Vec<f64> = self.values.windows(2).map(|w| w[1] - w[0]).collect();
        StationarySeries::new(diffs, self.grid.dt(), self.meta)
    }
}
