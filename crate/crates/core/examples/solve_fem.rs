//! Assemble and solve the finite element system for one noisy path, first
//! without a reaction term and then with `f(x, u) = sin(u)`.

use fbm_bvp::fem::{
    assemble_load, assemble_stiffness, l2_norm, solve_linear_fem, solve_nonlinear_fem,
};
use fbm_bvp::noise::{sample_stream, step_noise};
use fbm_bvp::{
    Forcing, HurstIndex, IncrementSampler, ProblemSpec, ReactionTerm, SamplerMethod, UniformGrid,
};

fn main() -> fbm_bvp::Result<()> {
    let hurst = HurstIndex::new(0.25)?;
    let grid = UniformGrid::new(64)?;
    let path = IncrementSampler::new(grid, hurst, SamplerMethod::Circulant)?
        .sample(&mut sample_stream(2024, 0));

    let stiffness = assemble_stiffness(grid)?;
    let load = assemble_load(|_| 1.0, &step_noise(&path), grid)?;
    let linear = solve_linear_fem(&stiffness, &load)?;
    println!(
        "f = 0:      ||u_h|| = {:.6}, residual {:.1e}",
        l2_norm(&linear.to_grid_function()),
        linear.residual
    );

    let spec = ProblemSpec::new(hurst, Forcing::one(), ReactionTerm::sin());
    let sol = solve_nonlinear_fem(&spec, &path, 1e-10, 200)?;
    println!(
        "f = sin(u): ||u_h|| = {:.6}, residual {:.1e} after {} iterations",
        l2_norm(&sol.to_grid_function()),
        sol.residual,
        sol.iterations
    );
    for (x, u) in grid.nodes().zip(sol.nodal_values()).step_by(8) {
        println!("  u({x:.3}) = {u:+.6}");
    }
    Ok(())
}
