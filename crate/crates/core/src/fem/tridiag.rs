use crate::{Error, Result};

/// Square tridiagonal matrix stored by diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix {
    sub: Vec<f64>,
    main: Vec<f64>,
    sup: Vec<f64>,
}

impl TridiagonalMatrix {
    /// `sub[i]` is entry `(i + 1, i)` and `sup[i]` is entry `(i, i + 1)`.
    pub fn new(sub: Vec<f64>, main: Vec<f64>, sup: Vec<f64>) -> Result<Self> {
        let m = main.len();
        if m == 0 || sub.len() + 1 != m || sup.len() + 1 != m {
            return Err(Error::InvalidArgument(format!(
                "inconsistent diagonals: sub {}, main {}, super {}",
                sub.len(),
                m,
                sup.len()
            )));
        }
        Ok(Self { sub, main, sup })
    }

    pub fn dim(&self) -> usize {
        self.main.len()
    }

    pub fn sub(&self) -> &[f64] {
        &self.sub
    }

    pub fn main(&self) -> &[f64] {
        &self.main
    }

    pub fn sup(&self) -> &[f64] {
        &self.sup
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim(), "vector length must match matrix");
        let m = self.dim();
        (0..m)
            .map(|i| {
                let mut s = self.main[i] * v[i];
                if i > 0 {
                    s += self.sub[i - 1] * v[i - 1];
                }
                if i + 1 < m {
                    s += self.sup[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        self.mul_vec(v).iter().zip(v).map(|(a, b)| a * b).sum()
    }

    /// Thomas algorithm.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let m = self.dim();
        if rhs.len() != m {
            return Err(Error::GridMismatch {
                expected: m,
                found: rhs.len(),
            });
        }
        let mut c = vec![0.0; m];
        let mut d = vec![0.0; m];
        let mut pivot = self.main[0];
        if pivot == 0.0 {
            return Err(Error::Singular { row: 0 });
        }
        if m > 1 {
            c[0] = self.sup[0] / pivot;
        }
        d[0] = rhs[0] / pivot;
        for i in 1..m {
            pivot = self.main[i] - self.sub[i - 1] * c[i - 1];
            if pivot == 0.0 || !pivot.is_finite() {
                return Err(Error::Singular { row: i });
            }
            if i + 1 < m {
                c[i] = self.sup[i] / pivot;
            }
            d[i] = (rhs[i] - self.sub[i - 1] * d[i - 1]) / pivot;
        }
        for i in (0..m - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        Ok(d)
    }
}
