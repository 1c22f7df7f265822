mod common;

use longmem_core::multifractal::{
    cascade_moment_exact, cascade_tau, generate_cascade, partition_function, subordinate, Multiplier,
    PartitionOptions,
};
use longmem_core::*;
use rayon::prelude::*;

fn hurst(h: f64) -> HurstIndex {
    HurstIndex::new(h).unwrap()
}

#[test]
fn fbm_partition_function() {
    let depths: Vec<u32> = (4..=12).collect();
    let qs = [1.0, 2.0, 3.0];
    let taus: Vec<Vec<f64>> = (0..10u64)
        .into_par_iter()
        .map(|s| {
            let p = generate::fbm_path(hurst(0.5), 1 << 14, 1.0, RngSpec::new(s, 5)).unwrap();
            partition_function(&p, &qs, &depths, PartitionOptions::default()).unwrap().tau
        })
        .collect();
    let t: Vec<f64> = (0..3).map(|i| common::mean(&common::column(&taus, i))).collect();
    for (q, v) in qs.iter().zip(&t) {
        assert!((v - (0.5 * q - 1.0)).abs() < 0.1, "q={q}: {v}");
    }
    let slope = (t[2] - t[0]) / 2.0;
    assert!((slope - 0.5).abs() < 0.1, "{slope}");

    let p = generate::fbm_path(hurst(0.7), 1 << 14, 1.0, RngSpec::new(99, 5)).unwrap();
    let tau2 = partition_function(&p, &[2.0], &depths, PartitionOptions::default()).unwrap().tau[0];
    assert!((tau2 - 0.4).abs() < 0.1, "{tau2}");
}

#[test]
fn cascade_moment_examples() {
    assert!((cascade_moment_exact(3, 1.0, Multiplier::TwoPoint { m0: 0.7 }) - 0.125).abs() < 1e-15);
    assert!((cascade_moment_exact(2, 2.0, Multiplier::Deterministic { m0: 0.6 }) - 0.1296).abs() < 1e-15);
    let th = generate_cascade(2, Multiplier::Deterministic { m0: 0.6 }, RngSpec::new(0, 0), true).unwrap();
    assert!((th.mass()[0].powi(2) - 0.1296).abs() < 1e-15);
}

#[test]
fn random_cascade_leftmost_moment() {
    let m = Multiplier::TwoPoint { m0: 0.7 };
    let draws: Vec<f64> = (0..20_000u64)
        .into_par_iter()
        .map(|r| generate_cascade(6, m, RngSpec::new(3, 0).child(r), true).unwrap().mass()[0].powi(2))
        .collect();
    let got = common::mean(&draws);
    let want = cascade_moment_exact(6, 2.0, m);
    assert!((got / want - 1.0).abs() < 0.05, "{got} vs {want}");
}

#[test]
fn non_conservative_cascade_is_normalized() {
    let th = generate_cascade(12, Multiplier::TwoPoint { m0: 0.6 }, RngSpec::new(8, 0), false).unwrap();
    assert!((common::exact_sum(th.mass()) - 1.0).abs() < 1e-12);
    assert_eq!(*th.cumulative().last().unwrap(), 1.0);
    assert!(th.cumulative().windows(2).all(|w| w[1] >= w[0]));
}

/// Subordinating Brownian motion to a two-point cascade bends `τ̂` below the
/// monofractal line at high moments. A uniform time change on the same paths
/// serves as the control, which removes the finite-sample bias that both
/// estimates share.
#[test]
fn subordinated_brownian_motion_is_multifractal() {
    let m = Multiplier::TwoPoint { m0: 0.6 };
    let qs = [2.0, 5.0];
    let depths: Vec<u32> = (1..=8).collect();
    let pairs: Vec<(Vec<f64>, Vec<f64>)> = (0..100u64)
        .into_par_iter()
        .map(|s| {
            let path = generate::fbm_path(hurst(0.5), 4096, 1.0, RngSpec::new(s, 2)).unwrap();
            let th = generate_cascade(10, m, RngSpec::new(s, 1), true).unwrap();
            let flat = generate_cascade(10, Multiplier::Deterministic { m0: 0.5 }, RngSpec::new(s, 1), true).unwrap();
            let opts = PartitionOptions::default();
            let a = partition_function(&subordinate(&path, &th).unwrap(), &qs, &depths, opts).unwrap().tau;
            let b = partition_function(&subordinate(&path, &flat).unwrap(), &qs, &depths, opts).unwrap().tau;
            (a, b)
        })
        .collect();
    let mean_at = |i: usize, cascade: bool| {
        common::mean(&pairs.iter().map(|(a, b)| if cascade { a[i] } else { b[i] }).collect::<Vec<_>>())
    };
    let gap5 = mean_at(1, false) - mean_at(1, true);
    let want5 = 1.5 - cascade_tau(2.5, m);
    assert!(gap5 > 0.05, "q=5 gap {gap5} (composition predicts {want5})");
    // At q = 2 the composition gives τ_X(2) = τ_θ(1) = 0, the monofractal value.
    let gap2 = mean_at(0, false) - mean_at(0, true);
    assert!(gap2.abs() < 0.05, "q=2 gap {gap2}");
}

#[test]
fn subordination_requires_resolution() {
    let path = generate::fbm_path(hurst(0.5), 1024, 1.0, RngSpec::new(0, 0)).unwrap();
    let th = generate_cascade(10, Multiplier::TwoPoint { m0: 0.6 }, RngSpec::new(0, 0), true).unwrap();
    let err = subordinate(&path, &th).unwrap_err();
    assert!(err.to_string().contains("resolution"), "{err}");
}
