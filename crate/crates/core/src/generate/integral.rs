use crate::error::{Error, Result};
use crate::types::{ProcessPath, SeriesKind, StationarySeries, TimeGrid};

/// Piecewise-constant function: `levels[j]` on `[breakpoints[j], breakpoints[j+1])`, zero elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    levels: Vec<f64>,
}

impl StepFunction {
    pub fn new(breakpoints: Vec<f64>, levels: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::invalid("step function", "need at least two breakpoints"));
        }
        if levels.len() + 1 != breakpoints.len() {
            return Err(Error::invalid(
                "step function",
                format!(
                    "{} breakpoints require {} levels, got {}",
                    breakpoints.len(),
                    breakpoints.len() - 1,
                    levels.len()
                ),
            ));
        }
        if breakpoints.iter().chain(&levels).any(|v| !v.is_finite()) {
            return Err(Error::invalid("step function", "non-finite breakpoint or level"));
        }
        if let Some(w) = breakpoints.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::invalid(
                "step function",
                format!("breakpoints must increase strictly ({} then {})", w[0], w[1]),
            ));
        }
        Ok(Self { breakpoints, levels })
    }

    /// `1` on `[a, b)`.
    pub fn indicator(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![a, b], vec![1.0])
    }

    /// Constant `c` on `[a, b)`.
    pub fn constant(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(vec![a, b], vec![c])
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// `(start, end, level)` per piece.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.breakpoints
            .windows(2)
            .zip(&self.levels)
            .map(|(w, &c)| (w[0], w[1], c))
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.pieces()
            .find(|&(a, b, _)| s >= a && s < b)
            .map_or(0.0, |(_, _, c)| c)
    }
}

/// Partial sums of `noise`, anchored at zero.
///
/// When the series carries a Hurst index the increments are rescaled by
/// `dt^H`, so unit-lag fGn relabelled with step `dt` yields a path whose
/// value at `i·dt` has variance `(i·dt)^{2H}`. The factor is recorded as
/// the path scale.
pub fn cumulate(noise: &StationarySeries) -> ProcessPath {
    let meta = noise.meta();
    let scale = meta
        .hurst
        .map_or(1.0, |h| noise.dt().powf(h.value()));
    let mut values = Vec::with_capacity(noise.len() + 1);
    values.push(0.0);
    let mut acc = 0.0;
    for &x in noise.values() {
        acc += x * scale;
        values.push(acc);
    }
    let kind = match meta.kind {
        SeriesKind::Fgn => SeriesKind::Fbm,
        other => other,
    };
    let grid = TimeGrid::new(values.len(), noise.dt()).expect("validated step");
    ProcessPath::new(grid, values, crate::types::SeriesMeta::new(kind, meta.hurst), scale)
        .expect("finite partial sums")
}

/// `Σ_j c_j (path(t_j) - path(t_{j-1}))`; every breakpoint must be a grid time.
pub fn step_integral(g: &StepFunction, path: &ProcessPath) -> Result<f64> {
    let grid = path.grid();
    let idx = g
        .breakpoints()
        .iter()
        .map(|&t| {
            grid.index_of(t).ok_or_else(|| {
                Error::invalid(
                    "breakpoint",
                    format!(
                        "breakpoint {t} is not on the path grid (step {}, horizon {})",
                        grid.dt(),
                        grid.horizon()
                    ),
                )
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let v = path.values();
    Ok(idx
        .windows(2)
        .zip(g.levels())
        .map(|(w, c)| c * (v[w[1]] - v[w[0]]))
        .sum())
}
