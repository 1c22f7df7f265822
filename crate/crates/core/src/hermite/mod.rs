//! Hermite processes of order `k`.
//!
//! Two samplers share one normalization (unit variance at `t = 1`):
//! [`HermiteOracle`] evaluates the off-diagonal multiple Wiener integral on a
//! lattice and is only meant for small sizes; [`HermiteFast`] uses partial
//! sums of `h_k(ξ_j)` over long fGn with index `H₀`.

mod fast;
mod iterated;
mod kernel;
mod oracle;

pub use fast::{generate_hermite_fast, HermiteFast, DEFAULT_INNER_FACTOR, MIN_INNER_FACTOR};
pub use iterated::{iterated_integral_check, ITERATED_RESOLUTION};
pub use kernel::{hermite_kernel, KernelQuadrature};
pub use oracle::{
    generate_hermite_oracle, HermiteLattice, HermiteOracle, ORACLE_MAX_ORDER, ORACLE_MAX_POINTS,
};

use crate::error::{Error, Result};
use crate::types::{HermiteOrder, HurstIndex};

/// Target index `H ∈ (1/2, 1)`, order `k`, and the derived `H₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiteSpec {
    hurst: HurstIndex,
    order: HermiteOrder,
    h0: HurstIndex,
}

impl HermiteSpec {
    pub fn new(hurst: HurstIndex, order: HermiteOrder) -> Result<Self> {
        let h0 = h0_from(hurst, order)?;
        Ok(Self { hurst, order, h0 })
    }

    pub fn hurst(&self) -> HurstIndex {
        self.hurst
    }

    pub fn order(&self) -> HermiteOrder {
        self.order
    }

    pub fn h0(&self) -> HurstIndex {
        self.h0
    }

    /// Exponent `H₀ - 3/2` of each kernel factor.
    pub fn kernel_exponent(&self) -> f64 {
        self.h0.value() - 1.5
    }
}

/// `H₀ = 1 - (1 - H)/k`, which lies in `(1 - 1/(2k), 1)`.
pub fn h0_from(hurst: HurstIndex, order: HermiteOrder) -> Result<HurstIndex> {
    if hurst.value() <= 0.5 {
        return Err(Error::invalid(
            "hurst",
            format!("H must exceed 1/2 for Hermite processes, got {hurst}"),
        ));
    }
    if order.is_gaussian() {
        return Ok(hurst);
    }
    HurstIndex::new(1.0 - (1.0 - hurst.value()) / f64::from(order.get()))
}

/// Probabilists' Hermite polynomial `h_k(x)`.
pub fn hermite_polynomial(order: HermiteOrder, x: f64) -> f64 {
    let k = order.get();
    let (mut prev, mut cur) = (1.0, x);
    for j in 1..k {
        let next = x * cur - f64::from(j) * prev;
        prev = cur;
        cur = next;
    }
    cur
}
