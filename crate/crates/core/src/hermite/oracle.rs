use rayon::prelude::*;

use super::kernel::{KernelEvaluator, KernelQuadrature};
use super::HermiteSpec;
use crate::error::{Error, Result};
use crate::rng::RngSpec;
use crate::types::{ProcessPath, SeriesKind, SeriesMeta, TimeGrid};

pub const ORACLE_MAX_ORDER: u32 = 2;
pub const ORACLE_MAX_POINTS: usize = 64;

/// Lattice used to discretize the Wiener integrator.
///
/// Cells are uniform on `[-L, t_max]`, `t_max = max(horizon, 1)`, with
/// `L ≈ left_factor · t_max`. The width is adjusted so that grid times are
/// cell edges, which makes the total slightly differ from `cells`. The kernel
/// is evaluated at cell midpoints with `epsilon` equal to half a cell width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiteLattice {
    pub cells: usize,
    pub left_factor: f64,
    pub quad: KernelQuadrature,
}

impl Default for HermiteLattice {
    fn default() -> Self {
        Self {
            cells: 600,
            left_factor: 10.0,
            quad: KernelQuadrature::default(),
        }
    }
}

/// Off-diagonal lattice sum for a Hermite process of order 1 or 2.
///
/// Kernel tables are computed once; each sample draws one Gaussian per cell.
/// Values are scaled so that the lattice sum at `t = 1` has variance exactly
/// one (the variance of the discretized sum is known in closed form).
#[derive(Debug, Clone)]
pub struct HermiteOracle {
    spec: HermiteSpec,
    grid: TimeGrid,
    cell_width: f64,
    cells: usize,
    /// Per grid time (excluding 0): kernel vector (k = 1) or packed strict
    /// upper triangle (k = 2).
    tables: Vec<Vec<f64>>,
    scale: f64,
}

impl HermiteOracle {
    pub fn new(spec: HermiteSpec, grid: TimeGrid, lattice: HermiteLattice) -> Result<Self> {
        let k = spec.order().get();
        if k > ORACLE_MAX_ORDER {
            return Err(Error::OracleSizeExceeded {
                requested: k as usize,
                cap: ORACLE_MAX_ORDER as usize,
            });
        }
        if grid.len() > ORACLE_MAX_POINTS {
            return Err(Error::OracleSizeExceeded {
                requested: grid.len(),
                cap: ORACLE_MAX_POINTS,
            });
        }
        if lattice.cells < 2 {
            return Err(Error::invalid("cells", "lattice needs at least two cells"));
        }
        if lattice.left_factor.is_nan() || lattice.left_factor <= 0.0 {
            return Err(Error::invalid("left_factor", "must be positive"));
        }
        let t_max = grid.horizon().max(1.0);
        let left_target = lattice.left_factor * t_max;
        // Cell edges fall on every grid time and on t = 1.
        let steps = grid.len().saturating_sub(1).max(1);
        let step = t_max / lcm_steps(steps, grid, t_max);
        let right_share = t_max / (left_target + t_max) * lattice.cells as f64;
        let per_step = (right_share / (t_max / step)).round().max(1.0);
        let width = step / per_step;
        let right_cells = (t_max / width).round() as usize;
        let left_cells = (left_target / width).round().max(1.0) as usize;
        let cells = left_cells + right_cells;
        let left = left_cells as f64 * width;
        let mids: Vec<f64> = (0..cells).map(|i| -left + (i as f64 + 0.5) * width).collect();
        let quad = lattice.quad.with_epsilon(0.5 * width);
        let eval = KernelEvaluator::new(&spec, quad);

        let table_for = |t: f64| -> Vec<f64> {
            if k == 1 {
                mids.iter().map(|&x| eval.eval(t, &mut [x])).collect()
            } else {
                (0..cells)
                    .into_par_iter()
                    .flat_map_iter(|i| {
                        let eval = &eval;
                        let mids = &mids;
                        ((i + 1)..cells).map(move |j| eval.eval(t, &mut [mids[i], mids[j]]))
                    })
                    .collect()
            }
        };
        let tables: Vec<Vec<f64>> = (1..grid.len()).map(|r| table_for(grid.time(r))).collect();
        let unit = match grid.index_of(1.0) {
            Some(r) if r > 0 => None,
            _ => Some(table_for(1.0)),
        };
        let unit_table = unit.as_ref().unwrap_or_else(|| {
            let r = grid.index_of(1.0).expect("checked above");
            &tables[r - 1]
        });
        let variance = discrete_variance(k, unit_table, width);
        if variance.is_nan() || variance <= 0.0 {
            return Err(Error::Numerical("lattice sum has zero variance at t = 1".into()));
        }
        Ok(Self {
            spec,
            grid,
            cell_width: width,
            cells,
            tables,
            scale: variance.sqrt().recip(),
        })
    }

    pub fn spec(&self) -> HermiteSpec {
        self.spec
    }

    /// Actual number of lattice cells.
    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn cell_width(&self) -> f64 {
        self.cell_width
    }

    /// Factor applied to the raw lattice sum.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Variance of the normalized lattice sum at each grid time (index 0 is time 0).
    pub fn exact_variances(&self) -> Vec<f64> {
        let k = self.spec.order().get();
        std::iter::once(0.0)
            .chain(
                self.tables
                    .iter()
                    .map(|t| discrete_variance(k, t, self.cell_width) * self.scale * self.scale),
            )
            .collect()
    }

    pub fn sample(&self, rng: RngSpec) -> ProcessPath {
        let mut increments = rng.gaussians().take_vec(self.cells);
        self.sample_from(&mut increments)
    }

    /// Sample from given standard normals (one per cell), rescaled in place to cell variance.
    pub(crate) fn sample_from(&self, z: &mut [f64]) -> ProcessPath {
        let sd = self.cell_width.sqrt();
        z.iter_mut().for_each(|v| *v *= sd);
        let k = self.spec.order().get();
        let mut values = Vec::with_capacity(self.grid.len());
        values.push(0.0);
        for table in &self.tables {
            let raw = if k == 1 {
                table.iter().zip(z.iter()).map(|(g, b)| g * b).sum::<f64>()
            } else {
                let mut acc = 0.0;
                let mut offset = 0;
                for i in 0..self.cells {
                    let len = self.cells - 1 - i;
                    let row = &table[offset..offset + len];
                    let inner: f64 = row.iter().zip(&z[i + 1..]).map(|(g, b)| g * b).sum();
                    acc += z[i] * inner;
                    offset += len;
                }
                2.0 * acc
            };
            values.push(raw * self.scale);
        }
        ProcessPath::new(
            self.grid,
            values,
            SeriesMeta::new(SeriesKind::Hermite, Some(self.spec.hurst())),
            self.scale,
        )
        .expect("finite lattice sum")
    }
}

/// Number of equal segments of `[0, t_max]` whose edges include every grid time.
fn lcm_steps(steps: usize, grid: TimeGrid, t_max: f64) -> f64 {
    if (grid.horizon() - t_max).abs() <= 1e-12 * t_max {
        steps as f64
    } else {
        // Horizon below 1: keep grid times on edges when dt divides 1.
        let per_unit = (t_max / grid.dt()).round();
        if ((t_max / grid.dt()) - per_unit).abs() < 1e-9 {
            per_unit
        } else {
            steps as f64
        }
    }
}

/// Variance of the off-diagonal lattice sum given its kernel table.
fn discrete_variance(k: u32, table: &[f64], width: f64) -> f64 {
    let sq: f64 = table.iter().map(|g| g * g).sum();
    if k == 1 {
        sq * width
    } else {
        // 2 Σ_{i<j} g ΔB_i ΔB_j has variance 4 Σ_{i<j} g² w².
        4.0 * sq * width * width
    }
}

/// One path from the lattice sampler.
pub fn generate_hermite_oracle(
    spec: HermiteSpec,
    grid: TimeGrid,
    rng: RngSpec,
    lattice: HermiteLattice,
) -> Result<ProcessPath> {
    Ok(HermiteOracle::new(spec, grid, lattice)?.sample(rng))
}
