//! The four subcommands. Each reads its parameters from a [`RunConfig`]
//! (recording defaults as it goes) and returns the text to write.

use longmem_core::analyze::{convergence_experiment_with, Normalization, Source, Transform};
use longmem_core::estimate::{default_aggvar_blocks, default_rs_schedule, DEFAULT_PERIODOGRAM_CUTOFF};
use longmem_core::generate::{cumulate, ExactFgn};
use longmem_core::hermite::{HermiteFast, HermiteLattice, HermiteOracle, HermiteSpec, DEFAULT_INNER_FACTOR};
use longmem_core::multifractal::{
    cascade_tau, generate_cascade, partition_function, subordinate, ActivityTime, Multiplier, PartitionOptions,
    ScalingFunction, SUBORDINATION_OVERSAMPLING,
};
use longmem_core::{
    aggregated_variance_hurst, generate, periodogram_hurst, rs_hurst, BlockMode, HermiteOrder, HurstIndex,
    ProcessPath, RngSpec, SeriesKind, SeriesMeta, StationarySeries, TimeGrid,
};

use crate::config::{CommandKind, RunConfig};
use crate::error::{CliError, CliResult};
use crate::format::{self, SeriesData};

/// Minimum series length per estimator, below which the CLI refuses to run.
pub const MIN_LENGTH_RS: usize = 64;
pub const MIN_LENGTH_AGGVAR: usize = 128;
pub const MIN_LENGTH_PERIODOGRAM: usize = 128;

/// "simulate fbm", "estimate rs", ...: used in messages.
pub fn context(cfg: &RunConfig) -> String {
    let sub = match cfg.command {
        CommandKind::Simulate | CommandKind::Analyze => cfg.params().get("process"),
        CommandKind::Estimate => cfg.params().get("method"),
        CommandKind::Cascade => None,
    };
    match sub {
        Some(s) => format!("{} {s}", cfg.command),
        None => cfg.command.to_string(),
    }
}

pub fn execute(cfg: &mut RunConfig) -> CliResult<String> {
    match cfg.command {
        CommandKind::Simulate => simulate(cfg),
        CommandKind::Estimate => estimate(cfg),
        CommandKind::Cascade => cascade(cfg),
        CommandKind::Analyze => analyze(cfg),
    }
}

fn hurst(cfg: &RunConfig) -> CliResult<HurstIndex> {
    let v: f64 = cfg.value("hurst", &context(cfg))?;
    Ok(HurstIndex::new(v)?)
}

fn order(cfg: &RunConfig) -> CliResult<HermiteOrder> {
    let k: u32 = cfg.value("order", &context(cfg))?;
    Ok(HermiteOrder::new(k)?)
}

fn positive(key: &str, v: f64) -> CliResult<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::param(key, format!("must be positive, got {v}")))
    }
}

fn at_least(key: &str, v: usize, min: usize) -> CliResult<usize> {
    if v >= min {
        Ok(v)
    } else {
        Err(CliError::param(key, format!("must be at least {min}, got {v}")))
    }
}

fn fgn_values(cfg: &mut RunConfig, h: HurstIndex, n: usize, rng: RngSpec) -> CliResult<Vec<f64>> {
    match cfg.text_or("method", "fast").as_str() {
        "fast" => Ok(generate::generate_fgn_fast(h, n, rng)?.into_values()),
        "exact" => Ok(ExactFgn::new(h, n)?.sample(rng).into_values()),
        other => Err(CliError::param("method", format!("unknown fGn generator '{other}' (expected fast or exact)"))),
    }
}

fn multiplier(cfg: &mut RunConfig) -> CliResult<Multiplier> {
    let m0: f64 = cfg.value_or("m0", "0.6")?;
    match cfg.text_or("law", "two-point").as_str() {
        "two-point" => Ok(Multiplier::TwoPoint { m0 }),
        "deterministic" => Ok(Multiplier::Deterministic { m0 }),
        other => Err(CliError::param("law", format!("unknown law '{other}' (expected two-point or deterministic)"))),
    }
}

fn activity_time(cfg: &mut RunConfig, rng: RngSpec) -> CliResult<ActivityTime> {
    let depth: u32 = cfg.value_or("depth", "10")?;
    let m = multiplier(cfg)?;
    Ok(generate_cascade(depth, m, rng, true)?)
}

fn simulate(cfg: &mut RunConfig) -> CliResult<String> {
    let process = cfg.text("process", "simulate")?;
    let seed = cfg.require_seed()?;
    let rng = RngSpec::new(seed, 0);
    let data = match process.as_str() {
        "fgn" => {
            let h = hurst(cfg)?;
            let n = at_least("n", cfg.value_or("n", "1024")?, 1)?;
            let dt = positive("dt", cfg.value_or("dt", "1")?)?;
            let values = fgn_values(cfg, h, n, rng)?;
            SeriesData::Series(StationarySeries::new(values, dt, SeriesMeta::new(SeriesKind::Fgn, Some(h)))?)
        }
        "fbm" => {
            let h = hurst(cfg)?;
            let n = at_least("n", cfg.value_or("n", "1025")?, 2)?;
            let dt = positive("dt", cfg.value_or("dt", (1.0 / (n - 1) as f64).to_string())?)?;
            let values = fgn_values(cfg, h, n - 1, rng)?;
            let noise = StationarySeries::new(values, dt, SeriesMeta::new(SeriesKind::Fgn, Some(h)))?;
            SeriesData::Path(cumulate(&noise))
        }
        "hermite" => {
            let spec = HermiteSpec::new(hurst(cfg)?, order(cfg)?)?;
            let n = at_least("n", cfg.value_or("n", "257")?, 3)?;
            let path = match cfg.text_or("method", "fast").as_str() {
                "fast" => {
                    let inner = cfg.value_or("inner", DEFAULT_INNER_FACTOR.to_string())?;
                    HermiteFast::new(spec, n - 1, inner)?.sample(rng)
                }
                "oracle" => {
                    let grid = TimeGrid::new(n, 1.0 / (n - 1) as f64)?;
                    HermiteOracle::new(spec, grid, HermiteLattice::default())?.sample(rng)
                }
                other => {
                    return Err(CliError::param(
                        "method",
                        format!("unknown Hermite generator '{other}' (expected fast or oracle)"),
                    ))
                }
            };
            SeriesData::Path(path)
        }
        "cascade" => SeriesData::Path(activity_time(cfg, rng)?.to_path()),
        "subordinated" => {
            let h = hurst(cfg)?;
            let theta = activity_time(cfg, rng.child(1))?;
            let steps = SUBORDINATION_OVERSAMPLING * theta.cells();
            let path = generate::fbm_path(h, steps, 1.0, rng.child(0))?;
            SeriesData::Path(subordinate(&path, &theta)?)
        }
        other => {
            return Err(CliError::param(
                "process",
                format!("unknown process '{other}' (expected fgn, fbm, hermite, cascade or subordinated)"),
            ))
        }
    };
    Ok(format::write_data(&data))
}

fn stationary(data: SeriesData) -> CliResult<StationarySeries> {
    Ok(match data {
        SeriesData::Series(s) => s,
        SeriesData::Path(p) => p.increments()?,
    })
}

fn long_enough(method: &str, series: &StationarySeries, min: usize) -> CliResult<()> {
    if series.len() < min {
        return Err(CliError::param(
            "input",
            format!("series too short for {method}: need at least {min} values, got {}", series.len()),
        ));
    }
    Ok(())
}

/// The leading `2^J` increments of a path.
fn dyadic_prefix(path: ProcessPath) -> CliResult<(ProcessPath, bool)> {
    let steps = path.len() - 1;
    if steps == 0 {
        return Err(CliError::param("input", "series too short for partition: need at least 2 points"));
    }
    if steps.is_power_of_two() {
        return Ok((path, false));
    }
    let keep = 1usize << steps.ilog2();
    let grid = TimeGrid::new(keep + 1, path.grid().dt())?;
    let values = path.values()[..=keep].to_vec();
    Ok((ProcessPath::new(grid, values, path.meta(), path.scale())?, true))
}

fn depth_range(cfg: &mut RunConfig, max_depth: u32) -> CliResult<Vec<u32>> {
    let top: u32 = cfg.value_or("depth", max_depth.saturating_sub(2).max(1).to_string())?;
    if top == 0 || top > max_depth {
        return Err(CliError::param(
            "depth",
            format!("must be in 1..={max_depth} for this series, got {top}"),
        ));
    }
    let lo = if top >= 8 { 4 } else { 1 };
    if top <= lo {
        return Err(CliError::param("depth", format!("need at least two depths below {top}")));
    }
    Ok((lo..=top).collect())
}

fn estimate(cfg: &mut RunConfig) -> CliResult<String> {
    let input = cfg
        .input
        .clone()
        .ok_or_else(|| CliError::Usage("estimate requires --input".into()))?;
    let data = format::read_series_file(&input)?;
    let method = cfg.text_or("method", "rs");
    let mut extra = vec![("input", input.display().to_string())];
    let body = match method.as_str() {
        "rs" => {
            let series = stationary(data)?;
            long_enough("rs", &series, MIN_LENGTH_RS)?;
            let windows: Vec<usize> = cfg.list_or("windows", join(&default_rs_schedule(series.len())))?;
            let mode = if cfg.flag_or("overlap", false)? {
                BlockMode::Overlapping
            } else {
                BlockMode::Disjoint
            };
            extra.push(("n", series.len().to_string()));
            format::scaling_report(&rs_hurst(&series, &windows, mode)?, &extra)
        }
        "aggvar" => {
            let series = stationary(data)?;
            long_enough("aggvar", &series, MIN_LENGTH_AGGVAR)?;
            let blocks: Vec<usize> = cfg.list_or("windows", join(&default_aggvar_blocks(series.len())))?;
            extra.push(("n", series.len().to_string()));
            format::scaling_report(&aggregated_variance_hurst(&series, &blocks)?, &extra)
        }
        "periodogram" => {
            let series = stationary(data)?;
            long_enough("periodogram", &series, MIN_LENGTH_PERIODOGRAM)?;
            let cutoff: f64 = cfg.value_or("cutoff", DEFAULT_PERIODOGRAM_CUTOFF.to_string())?;
            extra.push(("n", series.len().to_string()));
            format::scaling_report(&periodogram_hurst(&series, cutoff)?, &extra)
        }
        "partition" => {
            let path = match data {
                SeriesData::Path(p) => p,
                SeriesData::Series(s) => cumulate(&s),
            };
            let (path, truncated) = dyadic_prefix(path)?;
            let steps = path.len() - 1;
            let depths = depth_range(cfg, steps.trailing_zeros())?;
            let qs: Vec<f64> = cfg.list_or("q", "1,2,3")?;
            let sf = partition_function(&path, &qs, &depths, PartitionOptions::default())?;
            extra.push(("increments", steps.to_string()));
            extra.push(("truncated", truncated.to_string()));
            format::partition_report(&sf, &extra)
        }
        other => {
            return Err(CliError::param(
                "method",
                format!("unknown estimator '{other}' (expected rs, aggvar, periodogram or partition)"),
            ))
        }
    };
    Ok(body)
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn cascade(cfg: &mut RunConfig) -> CliResult<String> {
    let seed = cfg.require_seed()?;
    let theta = activity_time(cfg, RngSpec::new(seed, 0))?;
    let m = multiplier(cfg)?;
    let qs: Vec<f64> = cfg.list_or("q", "0.5,1,2,3")?;
    let depths: Vec<u32> = (1..=theta.depth()).collect();
    let options = PartitionOptions { allow_negative_q: true };
    let sf: ScalingFunction = partition_function(&theta.to_path(), &qs, &depths, options)?;
    let exact: Vec<f64> = qs.iter().map(|&q| cascade_tau(q, m)).collect();
    let extra = [
        ("depth", theta.depth().to_string()),
        ("m0", m.m0().to_string()),
        ("tau_exact", join(&exact)),
    ];
    Ok(format::partition_report(&sf, &extra))
}

fn analyze(cfg: &mut RunConfig) -> CliResult<String> {
    let seed = cfg.require_seed()?;
    let name = cfg.text_or("process", "iid");
    let h = if name == "fgn" { Some(hurst(cfg)?) } else { None };
    let source = Source::parse(&name, h)?;
    let k: u32 = cfg.value_or("order", "1")?;
    let transform = match HermiteOrder::new(k)? {
        k if k.is_gaussian() => Transform::Identity,
        k => Transform::Hermite(k),
    };
    let ns: Vec<usize> = cfg.list_or("n", "256,1024,4096")?;
    let replicates: usize = cfg.value_or("replicates", "1000")?;
    let normalization = match cfg.text_or("normalization", "exact").as_str() {
        "exact" => Normalization::Exact,
        "empirical" => Normalization::Empirical,
        other => {
            return Err(CliError::param(
                "normalization",
                format!("unknown normalization '{other}' (expected exact or empirical)"),
            ))
        }
    };
    let rows = convergence_experiment_with(source, transform, &ns, replicates, RngSpec::new(seed, 0), normalization)?;
    let mut extra = vec![("source", name)];
    if let Some(h) = h {
        extra.push(("hurst", h.to_string()));
    }
    extra.push(("order", k.to_string()));
    extra.push(("replicates", replicates.to_string()));
    Ok(format::convergence_report(&rows, &extra))
}
