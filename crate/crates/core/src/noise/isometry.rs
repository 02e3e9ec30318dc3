use super::covariance::pow0;
use super::{fbm_covariance, HurstIndex, StepFunction};
use crate::sum::NeumaierSum;

/// `Psi(f, g) = E[I(f) I(g)]` for step integrands, evaluated in closed form
/// from the singular double integral plus the boundary-weighted term.
///
/// On the common refinement with pieces `P_j = (a_j, b_j]`:
///
/// * boundary term: `H ∫_{P_j} (x^{2H-1} + (1-x)^{2H-1}) dx
///   = ((b^{2H} - a^{2H}) + ((1-a)^{2H} - (1-b)^{2H})) / 2`;
/// * singular term, for `P_j` left of `P_k = (c, d]`:
///   `(H(1-2H)/2) * 2 ∬ |x-y|^{2H-2} = ((d-b)^{2H} + (c-a)^{2H} - (d-a)^{2H} - (c-b)^{2H}) / 2`.
///
/// The second form has no `1 - 2H` in a denominator; at `H = 1/2` the
/// singular term is skipped and the boundary term reduces to `∫ f g`.
pub fn ito_isometry(f: &StepFunction, g: &StepFunction, hurst: HurstIndex) -> f64 {
    let bps = f.merged_breakpoints(g);
    let pieces = bps.len() - 1;
    let a = hurst.two_h();
    let mid = |j: usize| 0.5 * (bps[j] + bps[j + 1]);
    let fv: Vec<f64> = (0..pieces).map(|j| f.eval(mid(j))).collect();
    let gv: Vec<f64> = (0..pieces).map(|j| g.eval(mid(j))).collect();

    let mut acc = NeumaierSum::new();
    for j in 0..pieces {
        let (lo, hi) = (bps[j], bps[j + 1]);
        let weight = if hurst.is_white() {
            hi - lo
        } else {
            0.5 * ((pow0(hi, a) - pow0(lo, a)) + (pow0(1.0 - lo, a) - pow0(1.0 - hi, a)))
        };
        acc.add(fv[j] * gv[j] * weight);
    }
    if !hurst.is_white() {
        for j in 0..pieces {
            let (pa, pb) = (bps[j], bps[j + 1]);
            for k in (j + 1)..pieces {
                let coeff = (fv[j] - fv[k]) * (gv[j] - gv[k]);
                if coeff == 0.0 {
                    continue;
                }
                let (pc, pd) = (bps[k], bps[k + 1]);
                let pair = 0.5
                    * (pow0(pd - pb, a) + pow0(pc - pa, a) - pow0(pd - pa, a) - pow0(pc - pb, a));
                acc.add(coeff * pair);
            }
        }
    }
    acc.value()
}

/// Independent route: `sum_{j,k} f_j g_k Cov(dW_j, dW_k)` with the increment
/// covariances read off [`fbm_covariance`] at the refined breakpoints.
pub fn ito_isometry_by_covariance(f: &StepFunction, g: &StepFunction, hurst: HurstIndex) -> f64 {
    let bps = f.merged_breakpoints(g);
    let pieces = bps.len() - 1;
    let cov = |x: f64, y: f64| fbm_covariance(x, y, hurst).expect("breakpoints lie in [0, 1]");
    let mut acc = NeumaierSum::new();
    for j in 0..pieces {
        let fj = f.eval(0.5 * (bps[j] + bps[j + 1]));
        if fj == 0.0 {
            continue;
        }
        for k in 0..pieces {
            let gk = g.eval(0.5 * (bps[k] + bps[k + 1]));
            if gk == 0.0 {
                continue;
            }
            let (a, b, c, d) = (bps[j], bps[j + 1], bps[k], bps[k + 1]);
            let c_jk = cov(b, d) - cov(b, c) - cov(a, d) + cov(a, c);
            acc.add(fj * gk * c_jk);
        }
    }
    acc.value()
}
