//! Gauss–Legendre rules on `[-1, 1]` and helpers for mapping them to an
//! interval.

use std::f64::consts::PI;

/// Nodes of the two-point rule on `[0, 1]`, left to right.
pub const GAUSS2_UNIT: [f64; 2] = [
    0.5 - 0.288_675_134_594_812_9, // 1/(2 sqrt 3)
    0.5 + 0.288_675_134_594_812_9,
];

#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// `order`-point rule computed by Newton iteration on the Legendre
    /// recurrence.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let m = order.div_ceil(2);
        let nf = order as f64;
        for i in 0..m {
            let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp;
            loop {
                let (p, d) = legendre(order, z);
                dp = d;
                let dz = p / d;
                z -= dz;
                if dz.abs() < 1e-15 {
                    break;
                }
            }
            let (_, d) = legendre(order, z);
            dp = if d != 0.0 { d } else { dp };
            nodes[i] = -z;
            nodes[order - 1 - i] = z;
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        crate::sum::compensated_sum(self.on(a, b).map(|(x, w)| w * f(x)))
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        for order in 1..=12 {
            let rule = GaussLegendre::new(order);
            let degree = 2 * order - 1;
            let exact = 1.0 / (degree as f64 + 1.0);
            let got = rule.integrate(0.0, 1.0, |x| x.powi(degree as i32));
            assert!(
                (got - exact).abs() < 1e-13,
                "order {order}: {got} vs {exact}"
            );
        }
    }

    #[test]
    fn two_point_nodes_match_constant() {
        let rule = GaussLegendre::new(2);
        let nodes: Vec<f64> = rule.on(0.0, 1.0).map(|(x, _)| x).collect();
        assert!((nodes[0] - GAUSS2_UNIT[0]).abs() < 1e-15);
        assert!((nodes[1] - GAUSS2_UNIT[1]).abs() < 1e-15);
    }
}
