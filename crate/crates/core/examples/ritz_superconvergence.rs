//! Ritz projection of a smooth function, and the super-convergence study
//! comparing it with finite element solutions on coupled noisy paths.

use std::f64::consts::PI;

use fbm_bvp::experiments::{superconvergence_study, StudyConfig};
use fbm_bvp::fem::{discrete_l2_error, ritz_projection};
use fbm_bvp::{GridFunction, UniformGrid};

fn main() -> fbm_bvp::Result<()> {
    let w = |x: f64| (PI * x).sin();
    let fine = GridFunction::interpolate(UniformGrid::new(4096)?, w);
    for n in [8, 16, 32, 64] {
        let r = ritz_projection(w, UniformGrid::new(n)?)?;
        println!(
            "n = {n:>3}: ||w - R_h w|| ~ {:.3e}",
            discrete_l2_error(&fine, &r.to_grid_function())
        );
    }

    let study = superconvergence_study(
        &StudyConfig {
            samples: 100,
            ..StudyConfig::default()
        },
        0,
    )?;
    for (n, v) in study.n.iter().zip(&study.value) {
        println!("n = {n:>3}: E||(R_h u - u_h)'||^2 = {v:.3e}");
    }
    println!("fitted rate {:.3}", study.fit.slope);
    Ok(())
}
