//! Timelike foliation vectors, their derived spatial frames, and Lorentz
//! boosts, for spacetime dimension D in 2..=4 with signature (+,-,...,-).

use crate::error::{CoreError, Result};
use crate::scalar::Real;

/// Minkowski inner product with signature (+,-,...,-).
pub fn mink_dot<R: Real>(a: &[R], b: &[R]) -> R {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = a[0] * b[0];
    for k in 1..a.len() {
        acc -= a[k] * b[k];
    }
    acc
}

/// Timelike foliation vector with its derived spatial frame.
///
/// The frame vectors satisfy `n_i · n = 0` and `n_i · n_j = -|n|^2 delta_ij`,
/// so the resolution `n^u n^v - sum_i n_i^u n_i^v = |n|^2 eta^{uv}` holds.
#[derive(Debug, Clone)]
pub struct Foliation<R: Real> {
    n: Vec<R>,
    norm: R,
    frame: Vec<Vec<R>>,
}

impl<R: Real> Foliation<R> {
    pub fn new(n: Vec<R>) -> Result<Self> {
        let dim = n.len();
        if !(2..=4).contains(&dim) {
            return Err(CoreError::InvalidInput(format!(
                "supported spacetime dimensions are 2..=4, got {dim}"
            )));
        }
        let norm_sq = mink_dot(&n, &n);
        if !(norm_sq > R::zero()) {
            return Err(CoreError::NotTimelike { norm_sq: norm_sq.as_f64() });
        }
        let norm = norm_sq.sqrt();
        // Minkowski Gram-Schmidt on the coordinate axes, normalized so each
        // spatial frame vector has n_i · n_i = -|n|^2.
        let mut frame: Vec<Vec<R>> = Vec::with_capacity(dim - 1);
        for axis in 1..dim {
            let mut v = vec![R::zero(); dim];
            v[axis] = R::one();
            let c0 = mink_dot(&v, &n) / norm_sq;
            for k in 0..dim {
                v[k] = v[k] - c0 * n[k];
            }
            for f in &frame {
                let ff = mink_dot(f, f);
                let cf = mink_dot(&v, f) / ff;
                for k in 0..dim {
                    v[k] = v[k] - cf * f[k];
                }
            }
            let vv = mink_dot(&v, &v);
            if !(vv < R::zero()) {
                return Err(CoreError::InvalidInput(
                    "degenerate frame construction for the given foliation".into(),
                ));
            }
            let scale = norm / (-vv).sqrt();
            for k in 0..dim {
                v[k] = v[k] * scale;
            }
            frame.push(v);
        }
        Ok(Foliation { n, norm, frame })
    }

    /// Rest-frame foliation `n = e_0` in the given dimension.
    pub fn canonical(dim: usize) -> Self {
        let mut n = vec![R::zero(); dim];
        n[0] = R::one();
        Self::new(n).expect("canonical vector is timelike")
    }

    pub fn n(&self) -> &[R] {
        &self.n
    }

    pub fn dim(&self) -> usize {
        self.n.len()
    }

    pub fn norm(&self) -> R {
        self.norm
    }

    pub fn norm_sq(&self) -> R {
        self.norm * self.norm
    }

    pub fn frame(&self) -> &[Vec<R>] {
        &self.frame
    }

    /// Rescaled foliation `s * n` (s > 0 keeps it timelike).
    pub fn scaled(&self, s: R) -> Result<Self> {
        Self::new(self.n.iter().map(|&x| x * s).collect())
    }

    pub fn boosted(&self, boost: &BoostMatrix<R>) -> Result<Self> {
        Self::new(boost.apply(&self.n))
    }

    /// Max abs deviation of `n^u n^v - sum_i n_i^u n_i^v - |n|^2 eta^{uv}`.
    pub fn resolution_residual(&self) -> R {
        let dim = self.dim();
        let mut worst = R::zero();
        for u in 0..dim {
            for v in 0..dim {
                let mut t = self.n[u] * self.n[v];
                for f in &self.frame {
                    t -= f[u] * f[v];
                }
                let eta = if u == v {
                    if u == 0 {
                        R::one()
                    } else {
                        -R::one()
                    }
                } else {
                    R::zero()
                };
                worst = worst.max((t - self.norm_sq() * eta).abs());
            }
        }
        worst
    }
}

/// Lorentz transformation matrix with `Lambda^T eta Lambda = eta`,
/// `det Lambda = 1`.
#[derive(Debug, Clone)]
pub struct BoostMatrix<R: Real> {
    lambda: Vec<Vec<R>>,
}

impl<R: Real> BoostMatrix<R> {
    pub fn identity(dim: usize) -> Self {
        let mut lambda = vec![vec![R::zero(); dim]; dim];
        for (k, row) in lambda.iter_mut().enumerate() {
            row[k] = R::one();
        }
        BoostMatrix { lambda }
    }

    /// Wrap explicit rows; the caller vouches for the Lorentz property,
    /// which [`Self::orthogonality_residual`] can confirm.
    pub fn from_rows(lambda: Vec<Vec<R>>) -> Self {
        let dim = lambda.len();
        assert!(lambda.iter().all(|r| r.len() == dim), "square matrix required");
        BoostMatrix { lambda }
    }

    /// Boost of the given rapidity along spatial axis `axis` (1 = x).
    pub fn boost(dim: usize, axis: usize, rapidity: R) -> Self {
        assert!((1..dim).contains(&axis), "boost axis out of range");
        let mut m = Self::identity(dim);
        let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
        m.lambda[0][0] = ch;
        m.lambda[0][axis] = sh;
        m.lambda[axis][0] = sh;
        m.lambda[axis][axis] = ch;
        BoostMatrix { lambda: m.lambda }
    }

    /// Spatial rotation in the plane of two spatial axes.
    pub fn rotation(dim: usize, axis_a: usize, axis_b: usize, angle: R) -> Self {
        assert!(axis_a != axis_b && axis_a >= 1 && axis_b >= 1 && axis_a < dim && axis_b < dim);
        let mut m = Self::identity(dim);
        let (cs, sn) = (angle.cos(), angle.sin());
        m.lambda[axis_a][axis_a] = cs;
        m.lambda[axis_a][axis_b] = -sn;
        m.lambda[axis_b][axis_a] = sn;
        m.lambda[axis_b][axis_b] = cs;
        BoostMatrix { lambda: m.lambda }
    }

    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    pub fn matrix(&self) -> &[Vec<R>] {
        &self.lambda
    }

    pub fn apply(&self, v: &[R]) -> Vec<R> {
        let dim = self.dim();
        assert_eq!(v.len(), dim);
        let mut out = vec![R::zero(); dim];
        for (i, row) in self.lambda.iter().enumerate() {
            let mut acc = R::zero();
            for (a, b) in row.iter().zip(v) {
                acc += *a * *b;
            }
            out[i] = acc;
        }
        out
    }

    pub fn compose(&self, other: &Self) -> Self {
        let dim = self.dim();
        let mut lambda = vec![vec![R::zero(); dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                let mut acc = R::zero();
                for k in 0..dim {
                    acc += self.lambda[i][k] * other.lambda[k][j];
                }
                lambda[i][j] = acc;
            }
        }
        BoostMatrix { lambda }
    }

    pub fn inverse(&self) -> Self {
        // eta Lambda^T eta for Lorentz matrices.
        let dim = self.dim();
        let sign = |k: usize| if k == 0 { R::one() } else { -R::one() };
        let mut lambda = vec![vec![R::zero(); dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                lambda[i][j] = sign(i) * sign(j) * self.lambda[j][i];
            }
        }
        BoostMatrix { lambda }
    }

    /// Max abs deviation of `Lambda^T eta Lambda - eta`.
    pub fn orthogonality_residual(&self) -> R {
        let dim = self.dim();
        let sign = |k: usize| if k == 0 { R::one() } else { -R::one() };
        let mut worst = R::zero();
        for a in 0..dim {
            for b in 0..dim {
                let mut acc = R::zero();
                for k in 0..dim {
                    acc += self.lambda[k][a] * sign(k) * self.lambda[k][b];
                }
                let eta = if a == b { sign(a) } else { R::zero() };
                worst = worst.max((acc - eta).abs());
            }
        }
        worst
    }

    pub fn det(&self) -> R {
        let dim = self.dim();
        match dim {
            2 => self.lambda[0][0] * self.lambda[1][1] - self.lambda[0][1] * self.lambda[1][0],
            3 => {
                let m = &self.lambda;
                m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                    - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                    + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
            }
            4 => {
                let m = &self.lambda;
                let minor = |r: usize, c: usize| {
                    let rows: Vec<usize> = (0..4).filter(|&k| k != r).collect();
                    let cols: Vec<usize> = (0..4).filter(|&k| k != c).collect();
                    m[rows[0]][cols[0]]
                        * (m[rows[1]][cols[1]] * m[rows[2]][cols[2]]
                            - m[rows[1]][cols[2]] * m[rows[2]][cols[1]])
                        - m[rows[0]][cols[1]]
                            * (m[rows[1]][cols[0]] * m[rows[2]][cols[2]]
                                - m[rows[1]][cols[2]] * m[rows[2]][cols[0]])
                        + m[rows[0]][cols[2]]
                            * (m[rows[1]][cols[0]] * m[rows[2]][cols[1]]
                                - m[rows[1]][cols[1]] * m[rows[2]][cols[0]])
                };
                let mut acc = R::zero();
                let mut sign = R::one();
                for c in 0..4 {
                    acc += sign * m[0][c] * minor(0, c);
                    sign = -sign;
                }
                acc
            }
            _ => unreachable!(),
        }
    }
}
