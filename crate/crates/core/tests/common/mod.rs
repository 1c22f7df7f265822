#![allow(dead_code)]

use astro_float::{BigFloat, Consts, RoundingMode};
use longmem_core::numeric::moments;

const PREC: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;

fn big(x: f64) -> BigFloat {
    BigFloat::from_f64(x, PREC)
}

fn to_f64(x: &BigFloat) -> f64 {
    x.to_string().parse().expect("decimal BigFloat")
}

/// `½((k+1)^{2H} - 2k^{2H} + |k-1|^{2H})` in 256-bit arithmetic, rounded once.
pub fn fgn_acov_reference(h: f64, k: u64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut cc = Consts::new().expect("constants cache");
    let e = big(2.0 * h);
    let pw = |v: u64, cc: &mut Consts| big(v as f64).pow(&e, PREC, RM, cc);
    let a = pw(k + 1, &mut cc);
    let b = pw(k, &mut cc).mul(&big(2.0), PREC, RM);
    let c = if k == 1 { big(0.0) } else { pw(k - 1, &mut cc) };
    let s = a.sub(&b, PREC, RM).add(&c, PREC, RM).mul(&big(0.5), PREC, RM);
    to_f64(&s)
}

/// Sample covariance `E[x_i x_j]` (mean known to be zero) over replicate rows.
pub fn raw_covariance(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = rows[0].len();
    let mut c = vec![vec![0.0; n]; n];
    for r in rows {
        for i in 0..n {
            let ri = r[i];
            let ci = &mut c[i];
            for j in i..n {
                ci[j] += ri * r[j];
            }
        }
    }
    let m = rows.len() as f64;
    for i in 0..n {
        for j in i..n {
            let v = c[i][j] / m;
            c[i][j] = v;
            c[j][i] = v;
        }
    }
    c
}

pub fn column(rows: &[Vec<f64>], j: usize) -> Vec<f64> {
    rows.iter().map(|r| r[j]).collect()
}

pub fn variance(xs: &[f64]) -> f64 {
    moments(xs).variance
}

pub fn skewness(xs: &[f64]) -> f64 {
    moments(xs).skewness
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Neumaier-compensated sum, so that summation error does not mask the
/// quantity being checked.
pub fn exact_sum(xs: &[f64]) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for &x in xs {
        let t = s + x;
        c += if s.abs() >= x.abs() { (s - t) + x } else { (x - t) + s };
        s = t;
    }
    s + c
}
