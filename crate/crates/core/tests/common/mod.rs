//! Independent oracles shared by the integration tests. Nothing here calls
//! the closed forms it is used to check.

#![allow(dead_code)]

use fbm_bvp::quad::GaussLegendre;

/// fBm covariance written out directly.
pub fn fbm_cov(s: f64, t: f64, h: f64) -> f64 {
    let a = 2.0 * h;
    0.5 * (s.powf(a) + t.powf(a) - (s - t).abs().powf(a))
}

/// `Σ_{i≠j} ∬_{D_i×D_j} |x - y|^{2H-2}` cell pair by cell pair. The inner
/// integral over `y` is done analytically; the outer one over `x` uses
/// `subdivisions` Gauss panels in the variable `s` with
/// `x = b - h s^{1/(2H)}`, which flattens the endpoint singularity.
pub fn brute_kernel_sum(n: usize, hurst: f64, subdivisions: usize) -> f64 {
    let a = 2.0 * hurst;
    let h = 1.0 / n as f64;
    let rule = GaussLegendre::new(8);
    let mut total = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            // distances from the right end of cell i to both ends of cell j
            let (near, far) = ((j - i - 1) as f64 * h, (j - i) as f64 * h);
            let mut pair = 0.0;
            for p in 0..subdivisions {
                let s0 = p as f64 / subdivisions as f64;
                let s1 = (p + 1) as f64 / subdivisions as f64;
                // t = b - x; the far end is always at least h away
                pair += rule.integrate(s0 * h, s1 * h, |t| (far + t).powf(a - 1.0));
                pair -= if near > 0.0 {
                    rule.integrate(s0 * h, s1 * h, |t| (near + t).powf(a - 1.0))
                } else {
                    // t = h s^{1/a} removes the endpoint singularity
                    rule.integrate(s0, s1, |s| {
                        let t = h * s.powf(1.0 / a);
                        t.powf(a - 1.0) * h / a * s.powf(1.0 / a - 1.0)
                    })
                };
            }
            pair /= a - 1.0;
            total += 2.0 * pair;
        }
    }
    total
}

/// `E|Eⁿ(x)|²` from the global decomposition
/// `Var(∫G dW) - 2 Σ Ĝ_i Cov(∫G dW, ΔW_i) + Σ Ĝ_i Ĝ_j Cov(ΔW_i, ΔW_j)`,
/// with `∫ G(x, ·) dW = ∫ w W` after integration by parts, `w = -(1 - x)` on
/// `(0, x)` and `x` on `(x, 1)`, and every covariance integral in closed form.
pub fn en_second_moment_oracle(x: f64, n: usize, hurst: f64) -> f64 {
    let a = 2.0 * hurst;
    let pw = |u: f64| u.powf(a + 1.0) / (a + 1.0); // ∫_0^u s^a
    let q = |u: f64| u.signum() * u.abs().powf(a + 1.0) / (a + 1.0);
    let f2 = |u: f64| u.abs().powf(a + 2.0) / ((a + 1.0) * (a + 2.0));
    // ∬_{[p,r]×[c,d]} R(s, t)
    let rect = |p: f64, r: f64, c: f64, d: f64| {
        let diag = -(f2(r - d) - f2(p - d) - f2(r - c) + f2(p - c));
        0.5 * ((d - c) * (pw(r) - pw(p)) + (r - p) * (pw(d) - pw(c)) - diag)
    };
    // ∫_p^r R(s, c) ds
    let line = |p: f64, r: f64, c: f64| {
        0.5 * ((pw(r) - pw(p)) + (r - p) * c.powf(a) - (q(r - c) - q(p - c)))
    };
    let pieces = [(0.0, x, -(1.0 - x)), (x, 1.0, x)];
    let mut var = 0.0;
    for &(p, r, wp) in &pieces {
        for &(c, d, wc) in &pieces {
            var += wp * wc * rect(p, r, c, d);
        }
    }
    let h = 1.0 / n as f64;
    let node = |i: usize| i as f64 * h;
    let green = |y: f64| if x <= y { x * (1.0 - y) } else { y * (1.0 - x) };
    let rule = GaussLegendre::new(4);
    let avg: Vec<f64> = (0..n)
        .map(|i| {
            let (lo, hi) = (node(i), node(i + 1));
            let v = if x > lo && x < hi {
                rule.integrate(lo, x, green) + rule.integrate(x, hi, green)
            } else {
                rule.integrate(lo, hi, green)
            };
            v / h
        })
        .collect();
    let mut cross = 0.0;
    for (i, g) in avg.iter().enumerate() {
        for &(p, r, w) in &pieces {
            cross += g * w * (line(p, r, node(i + 1)) - line(p, r, node(i)));
        }
    }
    let mut quad = 0.0;
    for i in 0..n {
        for j in 0..n {
            let c = fbm_cov(node(i + 1), node(j + 1), hurst)
                - fbm_cov(node(i + 1), node(j), hurst)
                - fbm_cov(node(i), node(j + 1), hurst)
                + fbm_cov(node(i), node(j), hurst);
            quad += avg[i] * avg[j] * c;
        }
    }
    var - 2.0 * cross + quad
}

/// Dense solve with partial pivoting, for cross-checking the tridiagonal
/// solvers.
pub fn dense_solve(matrix: Vec<Vec<f64>>, rhs: Vec<f64>) -> Vec<f64> {
    let m = rhs.len();
    let a = nalgebra::DMatrix::from_fn(m, m, |i, j| matrix[i][j]);
    let b = nalgebra::DVector::from_vec(rhs);
    a.lu()
        .solve(&b)
        .expect("nonsingular")
        .iter()
        .copied()
        .collect()
}

/// Sample mean and standard error.
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}
