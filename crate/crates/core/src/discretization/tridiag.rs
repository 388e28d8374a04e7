use crate::error::{Error, Result};

/// Tridiagonal system over the unknowns. `sub[0]` and `sup[m-1]` are unused
/// and kept at zero.
#[derive(Clone, Debug, PartialEq)]
pub struct TridiagonalSystem {
    pub sub: Vec<f64>,
    pub main: Vec<f64>,
    pub sup: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl TridiagonalSystem {
    pub fn zeros(m: usize) -> Self {
        Self {
            sub: vec![0.0; m],
            main: vec![0.0; m],
            sup: vec![0.0; m],
            rhs: vec![0.0; m],
        }
    }

    pub fn len(&self) -> usize {
        self.main.len()
    }

    pub fn is_empty(&self) -> bool {
        self.main.is_empty()
    }

    /// `A x`
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let m = self.len();
        (0..m)
            .map(|i| {
                let mut y = self.main[i] * x[i];
                if i > 0 {
                    y += self.sub[i] * x[i - 1];
                }
                if i + 1 < m {
                    y += self.sup[i] * x[i + 1];
                }
                y
            })
            .collect()
    }
}

/// Thomas algorithm: forward elimination then back substitution.
pub fn tridiag_solve(sys: &TridiagonalSystem) -> Result<Vec<f64>> {
    let m = sys.len();
    let mut c = vec![0.0; m];
    let mut x = vec![0.0; m];
    let mut denom = sys.main.first().copied().unwrap_or(1.0);
    for i in 0..m {
        if i > 0 {
            denom = sys.main[i] - sys.sub[i] * c[i - 1];
        }
        if denom == 0.0 || !denom.is_finite() {
            return Err(Error::SingularSystem { row: i });
        }
        c[i] = if i + 1 < m { sys.sup[i] / denom } else { 0.0 };
        x[i] = if i > 0 {
            (sys.rhs[i] - sys.sub[i] * x[i - 1]) / denom
        } else {
            sys.rhs[0] / denom
        };
    }
    for i in (0..m.saturating_sub(1)).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity() {
        let mut s = TridiagonalSystem::zeros(4);
        s.main.fill(1.0);
        s.rhs = vec![1.0, -2.0, 3.5, 0.0];
        assert_eq!(tridiag_solve(&s).unwrap(), s.rhs);
    }

    #[test]
    fn second_difference() {
        let s = TridiagonalSystem {
            sub: vec![0.0, -1.0, -1.0],
            main: vec![2.0; 3],
            sup: vec![-1.0, -1.0, 0.0],
            rhs: vec![1.0; 3],
        };
        let x = tridiag_solve(&s).unwrap();
        for (a, b) in x.iter().zip([1.5, 2.0, 1.5]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_pivot() {
        let s = TridiagonalSystem {
            sub: vec![0.0, 1.0],
            main: vec![1.0, 1.0],
            sup: vec![1.0, 0.0],
            rhs: vec![1.0, 1.0],
        };
        assert!(matches!(tridiag_solve(&s), Err(Error::SingularSystem { row: 1 })));
    }

    #[test]
    fn large_diagonally_dominant_residual() {
        let m = 2000;
        let mut s = TridiagonalSystem::zeros(m);
        for i in 0..m {
            let t = i as f64 / m as f64;
            s.main[i] = 3.0 + t.sin();
            if i > 0 {
                s.sub[i] = -1.0 - t;
            }
            if i + 1 < m {
                s.sup[i] = -0.5 * (1.0 + t * t);
            }
            s.rhs[i] = (7.0 * t).cos();
        }
        let x = tridiag_solve(&s).unwrap();
        let ax = s.apply(&x);
        let err = ax.iter().zip(&s.rhs).fold(0.0f64, |e, (a, b)| e.max((a - b).abs()));
        assert!(err <= 1e-12);
    }
}
