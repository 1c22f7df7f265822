//! Series files and report tables.
//!
//! A series file starts with `# dt=<real> kind=<kind>` (optionally followed
//! by `hurst=<H>` and `scale=<s>`), then holds either one value per line or
//! `time,value` rows for a path. Values are written with 17 significant
//! digits, so reading a file back reproduces the values bit for bit.

use std::path::Path;

use longmem_core::analyze::ConvergenceRow;
use longmem_core::estimate::ScalingReport;
use longmem_core::multifractal::ScalingFunction;
use longmem_core::{HurstIndex, ProcessPath, SeriesKind, SeriesMeta, StationarySeries, TimeGrid};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub enum SeriesData {
    Series(StationarySeries),
    Path(ProcessPath),
}

fn header(dt: f64, meta: SeriesMeta, scale: Option<f64>) -> String {
    let mut h = format!("# dt={dt} kind={}", meta.kind);
    if let Some(hurst) = meta.hurst {
        h.push_str(&format!(" hurst={}", hurst.value()));
    }
    if let Some(s) = scale {
        h.push_str(&format!(" scale={s}"));
    }
    h.push('\n');
    h
}

pub fn write_series(series: &StationarySeries) -> String {
    let mut out = header(series.dt(), series.meta(), None);
    for v in series.values() {
        out.push_str(&format!("{v:.16e}\n"));
    }
    out
}

pub fn write_path(path: &ProcessPath) -> String {
    let grid = path.grid();
    let mut out = header(grid.dt(), path.meta(), Some(path.scale()));
    for (i, v) in path.values().iter().enumerate() {
        out.push_str(&format!("{:.16e},{v:.16e}\n", grid.time(i)));
    }
    out
}

pub fn write_data(data: &SeriesData) -> String {
    match data {
        SeriesData::Series(s) => write_series(s),
        SeriesData::Path(p) => write_path(p),
    }
}

pub fn read_series_file(path: &Path) -> CliResult<SeriesData> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_series(&text, &path.display().to_string())
}

struct Header {
    dt: f64,
    kind: SeriesKind,
    hurst: Option<HurstIndex>,
    scale: Option<f64>,
}

fn parse_header(line: &str, err: &dyn Fn(usize, String) -> CliError) -> CliResult<Header> {
    let Some(rest) = line.strip_prefix('#') else {
        return Err(err(1, "missing header line '# dt=<real> kind=<kind>'".into()));
    };
    let (mut dt, mut kind, mut hurst, mut scale) = (None, None, None, None);
    for token in rest.split_whitespace() {
        let Some((key, value)) = token.split_once('=') else {
            return Err(err(1, format!("malformed header token '{token}'")));
        };
        let real = || {
            value
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| err(1, format!("{key} must be a finite number, got '{value}'")))
        };
        match key {
            "dt" => dt = Some(real()?),
            "kind" => {
                kind = Some(SeriesKind::parse(value).ok_or_else(|| err(1, format!("unknown kind '{value}'")))?)
            }
            "hurst" => hurst = Some(HurstIndex::new(real()?).map_err(|e| err(1, e.to_string()))?),
            "scale" => scale = Some(real()?),
            other => return Err(err(1, format!("unknown header key '{other}'"))),
        }
    }
    let dt = dt.ok_or_else(|| err(1, "header lacks dt=".into()))?;
    if dt <= 0.0 {
        return Err(err(1, format!("dt must be positive, got {dt}")));
    }
    let kind = kind.ok_or_else(|| err(1, "header lacks kind=".into()))?;
    Ok(Header { dt, kind, hurst, scale })
}

/// Strict parser: every data line must be a number (or a `time,value` pair
/// for paths); blank lines, comments and mixed layouts are rejected.
pub fn parse_series(text: &str, label: &str) -> CliResult<SeriesData> {
    let err = |line: usize, reason: String| CliError::Parse {
        path: label.to_string(),
        line,
        reason,
    };
    let mut lines = text.lines();
    let first = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
    let h = parse_header(first, &err)?;
    let number = |lineno: usize, field: &str, what: &str| -> CliResult<f64> {
        let v: f64 = field
            .trim()
            .parse()
            .map_err(|_| err(lineno, format!("{what} '{field}' is not a number")))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(err(lineno, format!("{what} '{field}' is not finite")))
        }
    };

    let mut times = Vec::new();
    let mut values = Vec::new();
    let mut paired: Option<bool> = None;
    for (idx, raw) in lines.enumerate() {
        let lineno = idx + 2;
        if raw.trim().is_empty() {
            return Err(err(lineno, "blank value row".into()));
        }
        let fields: Vec<&str> = raw.split(',').collect();
        let is_pair = match fields.len() {
            1 => false,
            2 => true,
            n => return Err(err(lineno, format!("expected 1 or 2 fields, got {n}"))),
        };
        match paired {
            None => paired = Some(is_pair),
            Some(p) if p != is_pair => return Err(err(lineno, "row layout differs from the first data row".into())),
            _ => {}
        }
        if is_pair {
            let t = number(lineno, fields[0], "time")?;
            if let Some(&prev) = times.last() {
                if t <= prev {
                    return Err(err(lineno, format!("time {t} does not increase (previous {prev})")));
                }
            }
            let i = times.len();
            let expected = i as f64 * h.dt;
            if (t - expected).abs() > 1e-9 * expected.abs().max(1.0) {
                return Err(err(lineno, format!("time {t} does not match row {i} of a grid with dt={}", h.dt)));
            }
            times.push(t);
            values.push(number(lineno, fields[1], "value")?);
        } else {
            values.push(number(lineno, fields[0], "value")?);
        }
    }
    if values.is_empty() {
        return Err(err(2, "no data rows".into()));
    }
    let meta = SeriesMeta::new(h.kind, h.hurst);
    if paired == Some(true) {
        if values[0] != 0.0 {
            return Err(err(2, format!("a path must start at 0, got {}", values[0])));
        }
        let grid = TimeGrid::new(values.len(), h.dt)?;
        Ok(SeriesData::Path(ProcessPath::new(grid, values, meta, h.scale.unwrap_or(1.0))?))
    } else {
        if h.scale.is_some() {
            return Err(err(1, "scale= applies only to paths".into()));
        }
        Ok(SeriesData::Series(StationarySeries::new(values, h.dt, meta)?))
    }
}

fn header_block(pairs: &[(&str, String)]) -> String {
    pairs.iter().map(|(k, v)| format!("# {k}={v}\n")).collect()
}

fn list(xs: &[f64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn scaling_report(report: &ScalingReport, extra: &[(&str, String)]) -> String {
    let mut pairs = vec![
        ("method", report.method.as_str().to_string()),
        ("hurst", report.hurst.to_string()),
        ("slope", report.slope.to_string()),
        ("intercept", report.intercept.to_string()),
        ("stderr", report.stderr.to_string()),
        ("skipped", report.skipped.to_string()),
    ];
    pairs.extend(extra.iter().cloned());
    let mut out = header_block(&pairs);
    out.push_str("scale,statistic,log_scale,log_statistic\n");
    for (s, v) in report.scales.iter().zip(&report.statistics) {
        out.push_str(&format!("{s},{v},{},{}\n", s.ln(), v.ln()));
    }
    out
}

pub fn partition_report(sf: &ScalingFunction, extra: &[(&str, String)]) -> String {
    let mut pairs = vec![
        ("method", "partition".to_string()),
        ("q", list(&sf.qs)),
        ("tau", list(&sf.tau)),
        (
            "depths",
            sf.depths.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(","),
        ),
    ];
    pairs.extend(extra.iter().cloned());
    let mut out = header_block(&pairs);
    out.push_str("q,scale,statistic,log_scale,log_statistic\n");
    for (q, stats) in sf.qs.iter().zip(&sf.statistics) {
        for (s, v) in sf.scales.iter().zip(stats) {
            out.push_str(&format!("{q},{s},{v},{},{}\n", s.ln(), v.ln()));
        }
    }
    out
}

pub fn convergence_report(rows: &[ConvergenceRow], extra: &[(&str, String)]) -> String {
    let mut out = header_block(extra);
    out.push_str("n,s_n,variance,skewness,excess_kurtosis,sup_distance,normalization\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.n,
            r.s_n,
            r.variance,
            r.skewness,
            r.excess_kurtosis,
            r.sup_distance,
            r.normalization.as_str()
        ));
    }
    out
}

/// Value of `# key=value` in a report header.
pub fn report_value<'a>(report: &'a str, key: &str) -> Option<&'a str> {
    report
        .lines()
        .take_while(|l| l.starts_with('#'))
        .find_map(|l| l.strip_prefix("# ")?.strip_prefix(key)?.strip_prefix('='))
}
