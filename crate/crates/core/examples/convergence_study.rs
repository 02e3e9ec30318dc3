//! Strong mean-square convergence on coupled paths for both solvers.
//!
//! cargo run --release --example convergence_study -- 0.25 sin

use fbm_bvp::experiments::{run_convergence_studies, Solver, StudyConfig};
use fbm_bvp::{HurstIndex, ReactionCase};

fn main() -> fbm_bvp::Result<()> {
    let mut args = std::env::args().skip(1);
    let hurst = HurstIndex::new(args.next().and_then(|s| s.parse().ok()).unwrap_or(0.25))?;
    let reaction: ReactionCase = match args.next() {
        Some(s) => s.parse()?,
        None => ReactionCase::Sin,
    };
    let config = StudyConfig {
        hurst,
        reaction,
        solver: Solver::Both,
        ..StudyConfig::default()
    };
    for report in run_convergence_studies(&config, 0)? {
        println!(
            "solver {} ({:?})",
            report.config.solver, report.monotonicity
        );
        for l in &report.levels {
            println!(
                "  n = {:>4}  rms error {:.4e} ± {:.1e}",
                l.n, l.rms_error, l.stderr
            );
        }
        println!(
            "  rate {:.3} ± {:.3} (H + 1/2 = {:.2}), {:.2} s",
            report.fitted_rate,
            report.rate_stderr,
            hurst.value() + 0.5,
            report.wall_time
        );
    }
    Ok(())
}
