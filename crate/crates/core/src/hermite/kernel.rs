use super::HermiteSpec;
use crate::numeric::GaussLegendre;

/// Settings for the inner time integral of the Hermite kernel.
///
/// The integral is taken in the variable `u = (s - x_max)^{p}`, `p = H₀ - 1/2`,
/// which turns the endpoint singularity `(s - x_max)^{H₀-3/2}` into a constant
/// factor. Graded Gauss-Legendre panels cluster toward the lower end where the
/// remaining factors vary fastest. When `x_max` lies inside `[0, t)` the
/// neighbourhood `[x_max, x_max + epsilon]` is excluded from the panels and
/// replaced by its leading-order term, so the result converges as
/// `epsilon -> 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelQuadrature {
    pub panels: usize,
    pub nodes: usize,
    pub epsilon: f64,
}

impl Default for KernelQuadrature {
    fn default() -> Self {
        Self {
            panels: 10,
            nodes: 12,
            epsilon: 1e-6,
        }
    }
}

impl KernelQuadrature {
    pub fn with_epsilon(self, epsilon: f64) -> Self {
        Self { epsilon, ..self }
    }
}

/// Reusable evaluator; holds the Gauss-Legendre rule.
#[derive(Debug, Clone)]
pub(crate) struct KernelEvaluator {
    exponent: f64,
    quad: KernelQuadrature,
    rule: GaussLegendre,
}

impl KernelEvaluator {
    pub(crate) fn new(spec: &HermiteSpec, quad: KernelQuadrature) -> Self {
        Self {
            exponent: spec.kernel_exponent(),
            quad,
            rule: GaussLegendre::new(quad.nodes.max(1)),
        }
    }

    /// `∫_0^t Π_j (s - x_j)_+^α ds`. `xs` is sorted in place.
    pub(crate) fn eval(&self, t: f64, xs: &mut [f64]) -> f64 {
        xs.sort_by(f64::total_cmp);
        let Some((&x_max, rest)) = xs.split_last() else {
            return t;
        };
        let lower = x_max.max(0.0);
        if lower >= t {
            return 0.0;
        }
        let alpha = self.exponent;
        let p = alpha + 1.0;
        let inv_p = 1.0 / p;
        let gaps: Vec<f64> = rest.iter().map(|x| x_max - x).collect();
        let others = |r: f64| gaps.iter().map(|g| (g + r).powf(alpha)).product::<f64>();

        let eps = self.quad.epsilon;
        let mut start = lower - x_max;
        let mut head = 0.0;
        if x_max >= 0.0 && eps > 0.0 {
            let cut = eps.min(t - x_max);
            head = cut.powf(p) * inv_p * others(0.5 * cut);
            start = cut;
        }
        let u_lo = start.powf(p);
        let u_hi = (t - x_max).powf(p);
        if u_hi <= u_lo {
            return head;
        }
        let integrand = |u: f64| others(u.powf(inv_p)) * inv_p;
        if gaps.is_empty() {
            return head + (u_hi - u_lo) * inv_p;
        }
        let panels = self.quad.panels.max(1);
        let width = u_hi - u_lo;
        let mut body = 0.0;
        let mut a = u_lo;
        for i in 0..panels {
            let b = if i + 1 == panels {
                u_hi
            } else {
                u_lo + width * 0.5f64.powi((panels - 1 - i) as i32)
            };
            body += self.rule.integrate(a, b, integrand);
            a = b;
        }
        head + body
    }
}

/// The kernel `g_t(x_1, …, x_k)` of the time representation; `xs.len()` must equal `k`.
pub fn hermite_kernel(t: f64, xs: &[f64], spec: &HermiteSpec, quad: KernelQuadrature) -> f64 {
    assert_eq!(
        xs.len(),
        spec.order().get() as usize,
        "kernel arity must match the Hermite order"
    );
    let mut buf = xs.to_vec();
    KernelEvaluator::new(spec, quad).eval(t, &mut buf)
}
