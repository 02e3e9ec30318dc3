//! Draw one fBm increment path with both samplers and look at the
//! piecewise-constant noise built from it.
//!
//! cargo run --example sample_noise -- 0.25 16

use fbm_bvp::noise::{aggregate_increments, sample_stream, step_noise};
use fbm_bvp::{HurstIndex, IncrementSampler, SamplerMethod, UniformGrid};

fn main() -> fbm_bvp::Result<()> {
    let mut args = std::env::args().skip(1);
    let hurst = HurstIndex::new(args.next().and_then(|s| s.parse().ok()).unwrap_or(0.25))?;
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(16);
    let grid = UniformGrid::new(n)?;

    for method in [SamplerMethod::Cholesky, SamplerMethod::Circulant] {
        let sampler = IncrementSampler::new(grid, hurst, method)?;
        let path = sampler.sample(&mut sample_stream(7, 0));
        let noise = step_noise(&path);
        println!(
            "{method:?}: W(1) = {:+.5}, ||dW/dx||^2 = {:.3} (mean h^(2H-2) = {:.3})",
            path.endpoint(),
            noise.l2_norm_sq(),
            grid.h().powf(hurst.two_h() - 2.0)
        );
    }

    // coarse paths are sums of fine increments, so W(1) is shared
    let fine = IncrementSampler::new(grid, hurst, SamplerMethod::Cholesky)?
        .sample(&mut sample_stream(7, 0));
    let mut factor = 1;
    while n.is_multiple_of(2 * factor) {
        factor *= 2;
        let coarse = aggregate_increments(&fine, factor)?;
        println!(
            "n = {:>3}: W(1) = {:+.5}",
            coarse.grid().cells(),
            coarse.endpoint()
        );
    }
    Ok(())
}
