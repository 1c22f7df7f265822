use crate::generate::StepFunction;
use crate::numeric::GaussLegendre;

/// Subintervals of `[0, t]` used by the nested trapezoid rule.
pub const ITERATED_RESOLUTION: usize = 4096;

/// Both sides of the Cauchy repeated-integration formula
///
/// `∫_0^t dt_{n-1} ⋯ ∫_0^{t_1} g(s) ds = (1/(n-1)!) ∫_0^t (t-s)^{n-1} g(s) ds`.
///
/// The left side applies `n` cumulative trapezoid rules on a mesh that
/// contains every breakpoint of `g`; the right side integrates once against
/// the `(t-s)^{n-1}/(n-1)!` kernel, piece by piece.
pub fn iterated_integral_check(g: &StepFunction, t: f64, n: u32) -> (f64, f64) {
    assert!(t > 0.0 && n >= 1, "need t > 0 and n >= 1");
    let mut mesh: Vec<f64> = (0..=ITERATED_RESOLUTION)
        .map(|i| t * i as f64 / ITERATED_RESOLUTION as f64)
        .chain(g.breakpoints().iter().copied().filter(|&b| b > 0.0 && b < t))
        .collect();
    mesh.sort_by(f64::total_cmp);
    mesh.dedup();

    // First level: g is constant on every mesh cell.
    let mut level: Vec<f64> = Vec::with_capacity(mesh.len());
    level.push(0.0);
    for w in mesh.windows(2) {
        let last = *level.last().unwrap();
        level.push(last + g.eval(0.5 * (w[0] + w[1])) * (w[1] - w[0]));
    }
    for _ in 1..n {
        let mut next = Vec::with_capacity(mesh.len());
        next.push(0.0);
        for (i, w) in mesh.windows(2).enumerate() {
            let last = *next.last().unwrap();
            next.push(last + 0.5 * (level[i] + level[i + 1]) * (w[1] - w[0]));
        }
        level = next;
    }
    let lhs = *level.last().unwrap();

    let fact: f64 = (1..n).map(f64::from).product();
    let rule = GaussLegendre::new((n as usize).div_ceil(2) + 1);
    let rhs = g
        .pieces()
        .filter_map(|(a, b, c)| {
            let (a, b) = (a.max(0.0), b.min(t));
            (b > a).then(|| c * rule.integrate(a, b, |s| (t - s).powi(n as i32 - 1)))
        })
        .sum::<f64>()
        / fact;
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_one() {
        let one = StepFunction::constant(0.0, 10.0, 1.0).unwrap();
        let (l, r) = iterated_integral_check(&one, 1.0, 2);
        assert!((l - 0.5).abs() < 1e-9 && (r - 0.5).abs() < 1e-12);
        let (l, r) = iterated_integral_check(&one, 1.0, 3);
        assert!((l - 1.0 / 6.0).abs() < 1e-7 && (r - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn zero_function() {
        let zero = StepFunction::constant(0.0, 1.0, 0.0).unwrap();
        assert_eq!(iterated_integral_check(&zero, 1.0, 4), (0.0, 0.0));
    }

    #[test]
    fn multi_step_agreement() {
        let g = StepFunction::new(vec![0.0, 0.3, 0.7, 2.0], vec![2.0, -1.0, 0.5]).unwrap();
        for n in 1..=5 {
            for t in [0.5, 1.0] {
                let (l, r) = iterated_integral_check(&g, t, n);
                assert!(((l - r) / r).abs() < 1e-3, "n={n} t={t}: {l} vs {r}");
            }
        }
    }
}
