//! Fixed-order Gauss–Legendre panels with adaptive bisection.

use std::sync::OnceLock;

/// Nodes and weights of an n-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the rule by Newton iteration on the Legendre recurrence.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss–Legendre order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess for the i-th largest root.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            weights[i] = w;
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integrates `f` over a single panel [a, b].
    pub fn panel<F: FnMut(f64) -> f64>(&self, f: &mut F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x);
        }
        sum * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let dp = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, dp)
}

/// The 10-point rule used by every adaptive integration in the crate.
pub fn gauss_legendre_10() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(10))
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Sum of the accepted per-panel halving estimates.
    pub error: f64,
    pub panels: usize,
}

/// Failure to meet the requested tolerance within `max_depth` bisections.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NotConverged {
    pub value: f64,
    pub error: f64,
}

/// Adaptive bisection driver.
///
/// Each panel is accepted once the two half-panel estimates agree with the
/// whole-panel estimate to within the panel's share of `tol`. The share is
/// halved at every bisection, so accepted errors sum to at most `tol`.
#[derive(Debug, Clone)]
pub struct AdaptiveQuadrature<'a> {
    rule: &'a GaussLegendre,
    max_depth: usize,
}

impl Default for AdaptiveQuadrature<'static> {
    fn default() -> Self {
        Self {
            rule: gauss_legendre_10(),
            max_depth: 40,
        }
    }
}

impl<'a> AdaptiveQuadrature<'a> {
    pub fn with_rule(rule: &'a GaussLegendre, max_depth: usize) -> Self {
        Self { rule, max_depth }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(
        &self,
        mut f: F,
        a: f64,
        b: f64,
        tol: f64,
    ) -> Result<Integral, NotConverged> {
        if a == b {
            return Ok(Integral {
                value: 0.0,
                error: 0.0,
                panels: 0,
            });
        }
        let whole = self.rule.panel(&mut f, a, b);
        let mut value = 0.0;
        let mut error = 0.0;
        let mut panels = 0;
        let mut exhausted = false;
        // (a, b, estimate, tolerance share, depth)
        let mut stack = vec![(a, b, whole, tol, 0usize)];
        while let Some((lo, hi, est, share, depth)) = stack.pop() {
            let mid = 0.5 * (lo + hi);
            let left = self.rule.panel(&mut f, lo, mid);
            let right = self.rule.panel(&mut f, mid, hi);
            let refined = left + right;
            let diff = (refined - est).abs();
            // Below ~64 ulp of the panel value, the difference is rounding noise.
            let noise = 64.0 * f64::EPSILON * refined.abs();
            if diff <= share || diff <= noise || depth >= self.max_depth {
                if depth >= self.max_depth && diff > share && diff > noise {
                    exhausted = true;
                }
                value += refined;
                error += diff;
                panels += 2;
            } else {
                stack.push((mid, hi, right, 0.5 * share, depth + 1));
                stack.push((lo, mid, left, 0.5 * share, depth + 1));
            }
        }
        // Panels cut off at max depth still count if the total stays in budget.
        if !exhausted || error <= tol {
            Ok(Integral {
                value,
                error,
                panels,
            })
        } else {
            Err(NotConverged { value, error })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(10);
        let weight_sum: f64 = rule.weights().iter().sum();
        assert!((weight_sum - 2.0).abs() < 1e-14);
        // degree 19 is the highest degree integrated exactly
        let mut f = |x: f64| x.powi(18);
        let v = rule.panel(&mut f, -1.0, 1.0);
        assert!((v - 2.0 / 19.0).abs() < 1e-14, "{v}");
    }

    #[test]
    fn nodes_are_sorted_and_symmetric() {
        for order in [1, 2, 5, 10, 20] {
            let rule = GaussLegendre::new(order);
            let nodes = rule.nodes();
            assert!(nodes.windows(2).all(|w| w[0] < w[1]));
            for (x, y) in nodes.iter().zip(nodes.iter().rev()) {
                assert!((x + y).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn adaptive_handles_sqrt_endpoint() {
        let quad = AdaptiveQuadrature::default();
        let res = quad.integrate(|x: f64| x.sqrt(), 0.0, 1.0, 1e-12).unwrap();
        assert!((res.value - 2.0 / 3.0).abs() < 1e-12, "{res:?}");
    }

    #[test]
    fn adaptive_reports_failure_when_depth_exhausted() {
        let quad = AdaptiveQuadrature::with_rule(gauss_legendre_10(), 2);
        let res = quad.integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, 1e-14);
        assert!(res.is_err());
    }
}
