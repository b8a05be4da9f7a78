//! Gauss-Legendre rules and composite panel integration.

use std::f64::consts::PI;

/// An n-point Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on P_n from the Tricomi initial guesses.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "rule needs at least one node");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
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
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
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

    /// Integral of `f` over [a, b].
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Integral over [a, b] split into `panels` equal panels.
    pub fn composite(&self, a: f64, b: f64, panels: usize, mut f: impl FnMut(f64) -> f64) -> f64 {
        let width = (b - a) / panels as f64;
        (0..panels)
            .map(|k| {
                let lo = a + width * k as f64;
                self.integrate(lo, lo + width, &mut f)
            })
            .sum()
    }

    /// Integral over [a, b] with panels shrinking geometrically towards `a`.
    ///
    /// The innermost sliver [a, a + (b-a)·ratio^levels] is dropped; callers
    /// pick `levels` so that it is negligible.
    pub fn graded_towards_start(
        &self,
        a: f64,
        b: f64,
        levels: usize,
        ratio: f64,
        mut f: impl FnMut(f64) -> f64,
    ) -> f64 {
        let mut acc = 0.0;
        let mut hi = b;
        let len = b - a;
        for k in 1..=levels {
            let lo = a + len * ratio.powi(k as i32);
            acc += self.integrate(lo, hi, &mut f);
            hi = lo;
        }
        acc
    }

    /// Nodes and weights of the composite rule, for tabulated integrands.
    pub fn composite_nodes(&self, a: f64, b: f64, panels: usize) -> (Vec<f64>, Vec<f64>) {
        let width = (b - a) / panels as f64;
        let mut xs = Vec::with_capacity(panels * self.order());
        let mut ws = Vec::with_capacity(panels * self.order());
        for k in 0..panels {
            let mid = a + width * (k as f64 + 0.5);
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                xs.push(mid + 0.5 * width * x);
                ws.push(0.5 * width * w);
            }
        }
        (xs, ws)
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
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(10);
        let exact = 2.0 / 19.0;
        let got = rule.integrate(-1.0, 1.0, |x| x.powi(18));
        assert!((got - exact).abs() < 1e-14);
        assert!((rule.weights().iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn composite_handles_oscillation() {
        let rule = GaussLegendre::new(20);
        let got = rule.composite(0.0, PI, 40, |x| (50.0 * x).cos() * x);
        // ∫_0^π x cos(50x) dx = (cos(50π) - 1)/2500
        let exact = ((50.0 * PI).cos() - 1.0) / 2500.0;
        assert!((got - exact).abs() < 1e-14);
    }

    #[test]
    fn graded_rule_integrates_endpoint_singularity() {
        let rule = GaussLegendre::new(16);
        let got = rule.graded_towards_start(0.0, 1.0, 60, 0.25, |x| x.powf(-0.5));
        assert!((got - 2.0).abs() < 1e-12);
    }
}
