use crate::greens::{GridFunction, Rule};
use crate::sum::NeumaierSum;
use crate::{Error, Result};

use super::lcm;

/// Sub-cell end values of `a - b` on the common refinement, fed to `cell`.
fn on_refinement<F: FnMut(f64, f64, f64)>(a: &GridFunction, b: &GridFunction, mut cell: F) {
    let (na, nb) = (a.grid().cells(), b.grid().cells());
    let fine = lcm(na, nb);
    let w = 1.0 / fine as f64;
    for s in 0..fine {
        let (a0, a1) = a.sub_cell_ends(s, fine / na);
        let (b0, b1) = b.sub_cell_ends(s, fine / nb);
        cell(w, a0 - b0, a1 - b1);
    }
}

/// Exact `‖a - b‖` in `L²(0, 1)`.
pub fn discrete_l2_error(a: &GridFunction, b: &GridFunction) -> f64 {
    let mut acc = NeumaierSum::new();
    on_refinement(a, b, |w, e0, e1| {
        acc.add(w / 3.0 * (e0 * e0 + e0 * e1 + e1 * e1));
    });
    acc.value().max(0.0).sqrt()
}

/// Exact `‖(a - b)'‖` in `L²(0, 1)`; both functions must be piecewise linear.
pub fn discrete_h1_error(a: &GridFunction, b: &GridFunction) -> Result<f64> {
    if a.rule() != Rule::PiecewiseLinear || b.rule() != Rule::PiecewiseLinear {
        return Err(Error::InvalidArgument(
            "H1 seminorm needs piecewise linear functions".into(),
        ));
    }
    let mut acc = NeumaierSum::new();
    on_refinement(a, b, |w, e0, e1| {
        let d = e1 - e0;
        acc.add(d * d / w);
    });
    Ok(acc.value().sqrt())
}

pub fn l2_norm(a: &GridFunction) -> f64 {
    discrete_l2_error(a, &GridFunction::zero(a.grid()))
}

pub fn h1_seminorm(a: &GridFunction) -> Result<f64> {
    discrete_h1_error(a, &GridFunction::zero(a.grid()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::UniformGrid;

    #[test]
    fn hat_norms() {
        let g = UniformGrid::new(2).unwrap();
        let hat = GridFunction::nodal(g, vec![0.0, 1.0, 0.0]).unwrap();
        assert!((l2_norm(&hat) - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((h1_seminorm(&hat).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(discrete_l2_error(&hat, &hat), 0.0);
    }

    #[test]
    fn mixed_grids_and_rules() {
        let coarse = UniformGrid::new(2).unwrap();
        let fine = UniformGrid::new(3).unwrap();
        let x = GridFunction::interpolate(coarse, |x| x);
        let y = GridFunction::interpolate(fine, |x| x);
        assert!(discrete_l2_error(&x, &y) < 1e-15);
        let c = GridFunction::cellwise(fine, vec![1.0, 1.0, 1.0]).unwrap();
        let one = GridFunction::interpolate(coarse, |_| 1.0);
        assert!(discrete_l2_error(&c, &one) < 1e-15);
        assert!(discrete_h1_error(&c, &one).is_err());
    }
}
