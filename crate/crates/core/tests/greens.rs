mod common;

use std::f64::consts::PI;

use fbm_bvp::fem::{assemble_load, assemble_stiffness, solve_linear_fem};
use fbm_bvp::greens::{
    apply_k, greens_cell_integral, greens_function, solve_hammerstein, solve_hammerstein_with,
    stochastic_convolution, stochastic_convolution_at,
};
use fbm_bvp::iteration::{IterationOptions, NonlinearMethod};
use fbm_bvp::noise::{ito_isometry, sample_stream, step_noise};
use fbm_bvp::quad::GaussLegendre;
use fbm_bvp::{
    Forcing, GridFunction, HurstIndex, IncrementPath, IncrementSampler, ProblemSpec, ReactionTerm,
    SamplerMethod, StepFunction, UniformGrid,
};
use proptest::prelude::*;
use rand::Rng;

fn hurst(v: f64) -> HurstIndex {
    HurstIndex::new(v).unwrap()
}

fn draw(n: usize, h: f64, seed: u64) -> IncrementPath {
    IncrementSampler::new(
        UniformGrid::new(n).unwrap(),
        hurst(h),
        SamplerMethod::Cholesky,
    )
    .unwrap()
    .sample(&mut sample_stream(seed, 0))
}

#[test]
fn kernel_symmetry_boundary_and_range() {
    let mut rng = sample_stream(5, 0);
    for _ in 0..10_000 {
        let (x, y): (f64, f64) = (rng.random(), rng.random());
        let g = greens_function(x, y).unwrap();
        assert!((g - greens_function(y, x).unwrap()).abs() <= 1e-15);
        assert!((0.0..=0.25).contains(&g));
        assert!(greens_function(x, 0.0).unwrap().abs() <= 1e-15);
        assert!(greens_function(x, 1.0).unwrap().abs() <= 1e-15);
    }
    assert_eq!(greens_function(0.25, 0.75).unwrap(), 0.0625);
    assert!(greens_function(1.5, 0.5).is_err());
}

proptest! {
    #[test]
    fn cell_integrals_sum_to_the_parabola(x in 0.0..=1.0f64, n in 1usize..80) {
        let grid = UniformGrid::new(n).unwrap();
        let total: f64 = (0..n).map(|i| greens_cell_integral(x, i, grid).unwrap()).sum();
        prop_assert!((total - x * (1.0 - x) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn cell_integral_matches_split_quadrature(x in 0.0..=1.0f64, n in 1usize..20, pick in 0.0..1.0f64) {
        let grid = UniformGrid::new(n).unwrap();
        let i = ((pick * n as f64) as usize).min(n - 1);
        let (lo, hi) = (grid.node(i), grid.node(i + 1));
        // G(x, .) is linear on each side of x, so a 2-point rule per side is exact
        let rule = GaussLegendre::new(2);
        let g = |y: f64| if x <= y { x * (1.0 - y) } else { y * (1.0 - x) };
        let oracle = if x > lo && x < hi {
            rule.integrate(lo, x, g) + rule.integrate(x, hi, g)
        } else {
            rule.integrate(lo, hi, g)
        };
        prop_assert!((greens_cell_integral(x, i, grid).unwrap() - oracle).abs() < 1e-15);
    }

    #[test]
    fn k_preserves_sign(values in proptest::collection::vec(0.0..5.0f64, 2..40)) {
        let n = values.len() - 1;
        let grid = UniformGrid::new(n).unwrap();
        let phi = GridFunction::nodal(grid, values).unwrap();
        let k = apply_k(&phi, grid).unwrap();
        prop_assert!(k.values().iter().all(|&v| v >= -1e-15));
    }

    #[test]
    fn convolution_is_linear(s1 in any::<u64>(), s2 in any::<u64>(), a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let (p, q) = (draw(16, 0.25, s1), draw(16, 0.25, s2));
        let eval = UniformGrid::new(32).unwrap();
        let lhs = stochastic_convolution(&p.combine(a, &q, b).unwrap(), eval).unwrap();
        let cp = stochastic_convolution(&p, eval).unwrap();
        let cq = stochastic_convolution(&q, eval).unwrap();
        for j in 0..=32 {
            let rhs = a * cp.values()[j] + b * cq.values()[j];
            prop_assert!((lhs.values()[j] - rhs).abs() < 1e-12);
        }
    }
}

#[test]
fn sine_is_an_eigenfunction_of_k() {
    let grid = UniformGrid::new(256).unwrap();
    let phi = GridFunction::interpolate(grid, |y| (PI * y).sin());
    let k = apply_k(&phi, grid).unwrap();
    let err = grid
        .nodes()
        .zip(k.values())
        .map(|(x, v)| (v - (PI * x).sin() / (PI * PI)).abs())
        .fold(0.0, f64::max);
    assert!(err < 1e-4, "{err}");
}

#[test]
fn single_cell_convolution() {
    let path = IncrementPath::new(UniformGrid::new(1).unwrap(), vec![0.7]).unwrap();
    let xs = [0.0, 0.2, 0.5, 0.9, 1.0];
    let got = stochastic_convolution_at(&path, &xs).unwrap();
    for (x, v) in xs.iter().zip(got) {
        assert!((v - 0.7 * x * (1.0 - x) / 2.0).abs() < 1e-15);
    }
}

/// `(K Ẇⁿ)(x) = Σ ΔW_i Ĝ_i(x)`, so its variance is the isometry of the
/// averaged kernel.
#[test]
fn convolution_variance_is_the_isometry_of_the_averaged_kernel() {
    let n = 16;
    let grid = UniformGrid::new(n).unwrap();
    let avg: Vec<f64> = (0..n)
        .map(|i| greens_cell_integral(0.5, i, grid).unwrap() * n as f64)
        .collect();
    let step = StepFunction::on_grid(grid, avg).unwrap();
    let target = ito_isometry(&step, &step, hurst(0.25));
    let sampler = IncrementSampler::new(grid, hurst(0.25), SamplerMethod::Cholesky).unwrap();
    let squares: Vec<f64> = (0..100_000)
        .map(|s| {
            let p = sampler.sample(&mut sample_stream(99, s));
            stochastic_convolution_at(&p, &[0.5]).unwrap()[0].powi(2)
        })
        .collect();
    let (mean, se) = common::mean_and_stderr(&squares);
    assert!(
        (mean - target).abs() < 3.0 * se,
        "{mean} vs {target} ± {se}"
    );
}

#[test]
fn convolution_equals_the_linear_finite_element_solution() {
    for (n, h) in [(2, 0.25), (17, 0.1), (128, 0.25), (64, 0.5)] {
        let path = draw(n, h, n as u64);
        let grid = path.grid();
        let load = assemble_load(|_| 0.0, &step_noise(&path), grid).unwrap();
        let fem = solve_linear_fem(&assemble_stiffness(grid).unwrap(), &load).unwrap();
        let conv = stochastic_convolution(&path, grid).unwrap();
        for (a, b) in fem.nodal_values().iter().zip(conv.values()) {
            assert!((a - b).abs() < 1e-12, "n={n}: {a} vs {b}");
        }
    }
}

#[test]
fn zero_reaction_with_unit_forcing_is_the_parabola() {
    let spec = ProblemSpec::new(hurst(0.25), Forcing::one(), ReactionTerm::zero());
    let path = IncrementPath::zeros(UniformGrid::new(10).unwrap());
    let sol = solve_hammerstein(&spec, &path, 1e-12, 10).unwrap();
    assert_eq!(sol.iterations, 1);
    for (x, v) in path.grid().nodes().zip(sol.solution.values()) {
        assert!((v - x * (1.0 - x) / 2.0).abs() < 1e-12);
    }
}

/// For `f = λr` the mild system on nodes is `(A + λM) u = (g, φ)` with the
/// consistent mass matrix `M`.
#[test]
fn linear_reaction_matches_mass_matrix_system() {
    let lambda = 1.5;
    let n = 24;
    let grid = UniformGrid::new(n).unwrap();
    let h = grid.h();
    let spec = ProblemSpec::new(
        hurst(0.25),
        Forcing::one(),
        ReactionTerm::linear(lambda).unwrap(),
    );
    let path = draw(n, 0.25, 3);
    let sol = solve_hammerstein(&spec, &path, 1e-13, 500).unwrap();
    let m = n - 1;
    let mut matrix = vec![vec![0.0; m]; m];
    for i in 0..m {
        matrix[i][i] = 2.0 / h + lambda * 2.0 * h / 3.0;
        if i + 1 < m {
            matrix[i][i + 1] = -1.0 / h + lambda * h / 6.0;
            matrix[i + 1][i] = -1.0 / h + lambda * h / 6.0;
        }
    }
    let d = path.increments();
    let rhs: Vec<f64> = (0..m).map(|i| h + 0.5 * (d[i] + d[i + 1])).collect();
    let oracle = common::dense_solve(matrix, rhs);
    for (a, b) in sol.solution.values()[1..n].iter().zip(&oracle) {
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }
}

#[test]
fn linear_reaction_agrees_with_finite_differences() {
    for n in [8, 32, 128] {
        let grid = UniformGrid::new(n).unwrap();
        let h = grid.h();
        let spec = ProblemSpec::new(
            hurst(0.25),
            Forcing::one(),
            ReactionTerm::linear(1.0).unwrap(),
        );
        let sol = solve_hammerstein(&spec, &IncrementPath::zeros(grid), 1e-13, 500).unwrap();
        let m = n - 1;
        let mut matrix = vec![vec![0.0; m]; m];
        for i in 0..m {
            matrix[i][i] = 2.0 / (h * h) + 1.0;
            if i + 1 < m {
                matrix[i][i + 1] = -1.0 / (h * h);
                matrix[i + 1][i] = -1.0 / (h * h);
            }
        }
        let fd = common::dense_solve(matrix, vec![1.0; m]);
        let diff = sol.solution.values()[1..n]
            .iter()
            .zip(&fd)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(diff < 5.0 * h * h, "n={n}: {diff}");
    }
}

/// With `θ = 2/3` and `L = 1`, each damped step contracts the residual by
/// at most `(1 - θ) + θ L / γ` with `γ = 2`.
#[test]
fn picard_residuals_contract() {
    let spec = ProblemSpec::new(hurst(0.25), Forcing::one(), ReactionTerm::sin());
    let path = draw(64, 0.25, 8);
    let mut options = IterationOptions::new(1e-12, 200);
    options.method = NonlinearMethod::Picard;
    let sol = solve_hammerstein_with(&spec, &path, &options).unwrap();
    let theta = spec.reaction.default_damping();
    assert!((theta - 2.0 / 3.0).abs() < 1e-15);
    let bound = (1.0 - theta) + theta * 1.0 / 2.0;
    let hist = &sol.residual_history;
    assert!(hist.len() > 3);
    for w in hist.windows(2) {
        assert!(w[1] <= bound * w[0], "{} -> {}", w[0], w[1]);
    }
}
