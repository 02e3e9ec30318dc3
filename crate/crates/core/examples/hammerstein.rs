//! The mild (integral-equation) form solved by damped Picard and by
//! Newton, compared with the finite element solution on the same path.

use fbm_bvp::fem::{discrete_l2_error, solve_nonlinear_fem};
use fbm_bvp::greens::solve_hammerstein_with;
use fbm_bvp::iteration::{IterationOptions, NonlinearMethod};
use fbm_bvp::noise::sample_stream;
use fbm_bvp::{
    Forcing, HurstIndex, IncrementSampler, ProblemSpec, ReactionTerm, SamplerMethod, UniformGrid,
};

fn main() -> fbm_bvp::Result<()> {
    let hurst = HurstIndex::new(0.25)?;
    let grid = UniformGrid::new(128)?;
    let path = IncrementSampler::new(grid, hurst, SamplerMethod::Cholesky)?
        .sample(&mut sample_stream(11, 0));

    for reaction in [ReactionTerm::sin(), ReactionTerm::sqrt_clip()] {
        let spec = ProblemSpec::new(hurst, Forcing::sin_pi(), reaction);
        let fem = solve_nonlinear_fem(&spec, &path, 1e-10, 500)?.to_grid_function();
        for method in [NonlinearMethod::Picard, NonlinearMethod::Newton] {
            let options = IterationOptions {
                method,
                ..IterationOptions::new(1e-10, 2000)
            };
            match solve_hammerstein_with(&spec, &path, &options) {
                Ok(sol) => println!(
                    "{:<9} {method}: {:>4} iterations, ||u_greens - u_fem|| = {:.2e}",
                    spec.reaction.name(),
                    sol.iterations,
                    discrete_l2_error(&sol.solution, &fem)
                ),
                Err(e) => println!("{:<9} {method}: {e}", spec.reaction.name()),
            }
        }
    }
    Ok(())
}
