//! Criterion benchmarks for `longmem-core`; see `benches/`.

use longmem_core::{generate_fgn_fast, HurstIndex, RngSpec, StationarySeries};

/// Fixed fGn input shared by the estimator benchmarks.
pub fn fixture(h: f64, n: usize) -> StationarySeries {
    generate_fgn_fast(HurstIndex::new(h).expect("valid H"), n, RngSpec::new(2024, 0)).expect("fixture")
}
