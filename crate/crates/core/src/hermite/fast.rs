use super::{hermite_polynomial, HermiteSpec};
use crate::error::{Error, Result};
use crate::generate::{fgn_acov, CirculantFgn};
use crate::rng::RngSpec;
use crate::types::{ProcessPath, SeriesKind, SeriesMeta, TimeGrid};

pub const DEFAULT_INNER_FACTOR: usize = 256;
pub const MIN_INNER_FACTOR: usize = 64;

/// Hermite process on `[0, 1]` from partial sums of `h_k(ξ_j)`, where `ξ` is
/// unit-variance fGn with index `H₀`.
///
/// The sum over `N = n_out · m` terms is divided by its exact standard
/// deviation `sqrt(k! Σ_{i,j} ρ(i-j)^k)`, which grows like `N^H`; both the
/// exact factor and the nominal `N^{-H}` are kept.
#[derive(Debug, Clone)]
pub struct HermiteFast {
    spec: HermiteSpec,
    n_out: usize,
    inner: usize,
    noise: CirculantFgn,
    scale: f64,
    nominal_scale: f64,
}

impl HermiteFast {
    pub fn new(spec: HermiteSpec, n_out: usize, inner: usize) -> Result<Self> {
        if n_out < 2 {
            return Err(Error::invalid("n", format!("need at least 2 output steps, got {n_out}")));
        }
        if inner < MIN_INNER_FACTOR {
            return Err(Error::invalid(
                "inner",
                format!("inner factor must be at least {MIN_INNER_FACTOR}, got {inner}"),
            ));
        }
        let total = n_out
            .checked_mul(inner)
            .ok_or_else(|| Error::invalid("n", "n_out · inner overflows"))?;
        let noise = CirculantFgn::new(spec.h0(), total)?;
        let k = spec.order();
        let kk = k.get() as i32;
        let mut s = total as f64;
        for lag in 1..total {
            s += 2.0 * (total - lag) as f64 * fgn_acov(spec.h0(), lag as u64).powi(kk);
        }
        let variance = k.factorial() * s;
        Ok(Self {
            spec,
            n_out,
            inner,
            noise,
            scale: variance.sqrt().recip(),
            nominal_scale: (total as f64).powf(-spec.hurst().value()),
        })
    }

    pub fn with_default_inner(spec: HermiteSpec, n_out: usize) -> Result<Self> {
        Self::new(spec, n_out, DEFAULT_INNER_FACTOR)
    }

    pub fn spec(&self) -> HermiteSpec {
        self.spec
    }

    pub fn inner(&self) -> usize {
        self.inner
    }

    /// Exact normalization applied to the partial sums.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `N^{-H}`.
    pub fn nominal_scale(&self) -> f64 {
        self.nominal_scale
    }

    pub fn sample(&self, rng: RngSpec) -> ProcessPath {
        let xi = self.noise.sample_values(rng);
        let k = self.spec.order();
        let mut values = Vec::with_capacity(self.n_out + 1);
        values.push(0.0);
        let mut acc = 0.0;
        for chunk in xi.chunks(self.inner) {
            for &x in chunk {
                acc += hermite_polynomial(k, x);
            }
            values.push(acc * self.scale);
        }
        let grid = TimeGrid::new(self.n_out + 1, 1.0 / self.n_out as f64).expect("n_out >= 2");
        ProcessPath::new(
            grid,
            values,
            SeriesMeta::new(SeriesKind::Hermite, Some(self.spec.hurst())),
            self.scale,
        )
        .expect("finite partial sums")
    }
}

pub fn generate_hermite_fast(
    spec: HermiteSpec,
    n_out: usize,
    inner: usize,
    rng: RngSpec,
) -> Result<ProcessPath> {
    Ok(HermiteFast::new(spec, n_out, inner)?.sample(rng))
}
