//! Runs the default verification suite and prints the verdict table.

use fbm_bvp::experiments::{default_suite, SuiteSamples};
use fbm_bvp::HurstIndex;

fn main() -> fbm_bvp::Result<()> {
    for h in [0.25, 0.5] {
        let verdicts = default_suite(HurstIndex::new(h)?, 1, SuiteSamples::default())?;
        for v in verdicts {
            println!(
                "{:<32} target {:>12.6} estimate {:>12.6} stat {:>8.3}  {}",
                v.check, v.target, v.estimate, v.statistic, v.status
            );
        }
    }
    Ok(())
}
