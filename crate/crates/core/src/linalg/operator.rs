//! Square dense complex operators tagged with a tensor-factor shape.

use crate::error::{CoreError, Result};
use crate::numeric::DEFAULT_DIM_CAP;
use crate::scalar::{c, cr, Real, C};
use num_complex::Complex;

/// Row-major multi-index over a factor-dimension list. Factor 0 is the most
/// significant factor; with slices this means slice 1 is leftmost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiIndex {
    dims: Vec<usize>,
    strides: Vec<usize>,
}

impl MultiIndex {
    pub fn new(dims: &[usize]) -> Self {
        assert!(!dims.is_empty(), "factor list must be nonempty");
        assert!(dims.iter().all(|&d| d >= 1), "factor dims must be >= 1");
        let mut strides = vec![1usize; dims.len()];
        for k in (0..dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        MultiIndex { dims: dims.to_vec(), strides }
    }

    pub fn total(&self) -> usize {
        self.dims[0] * self.strides[0]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Flat index from per-factor digits.
    pub fn rank(&self, digits: &[usize]) -> usize {
        debug_assert_eq!(digits.len(), self.dims.len());
        digits.iter().zip(&self.strides).map(|(d, s)| d * s).sum()
    }

    /// Per-factor digits from a flat index.
    pub fn unrank(&self, mut flat: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.dims.len());
        for s in &self.strides {
            out.push(flat / s);
            flat %= s;
        }
        out
    }
}

/// Dense complex square matrix with a factorized-space shape.
///
/// Invariants: the matrix side equals the product of the factor dimensions,
/// the shape list is nonempty and every factor dimension is at least 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator<R: Real> {
    data: Vec<C<R>>,
    shape: Vec<usize>,
    side: usize,
}

impl<R: Real> Operator<R> {
    pub fn new(data: Vec<C<R>>, shape: Vec<usize>) -> Self {
        assert!(!shape.is_empty(), "shape list must be nonempty");
        assert!(shape.iter().all(|&d| d >= 1), "factor dims must be >= 1");
        let side: usize = shape.iter().product();
        assert_eq!(data.len(), side * side, "data length must equal side^2");
        Operator { data, shape, side }
    }

    pub fn zeros(shape: Vec<usize>) -> Self {
        let side: usize = shape.iter().product();
        Operator { data: vec![Complex::default(); side * side], shape, side }
    }

    pub fn identity(shape: Vec<usize>) -> Self {
        let mut op = Self::zeros(shape);
        for i in 0..op.side {
            op.data[i * op.side + i] = cr(R::one());
        }
        op
    }

    /// Build from a function of (row, col).
    pub fn from_fn(shape: Vec<usize>, f: impl Fn(usize, usize) -> C<R>) -> Self {
        let side: usize = shape.iter().product();
        let mut data = Vec::with_capacity(side * side);
        for i in 0..side {
            for j in 0..side {
                data.push(f(i, j));
            }
        }
        Operator { data, shape, side }
    }

    /// Permutation operator: maps basis state `j` to basis state `perm(j)`.
    pub fn from_permutation(shape: Vec<usize>, perm: impl Fn(usize) -> usize) -> Self {
        let mut op = Self::zeros(shape);
        for j in 0..op.side {
            let i = perm(j);
            op.data[i * op.side + j] = cr(R::one());
        }
        op
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    /// Reinterpret the factor structure without touching the matrix.
    pub fn with_shape(mut self, shape: Vec<usize>) -> Self {
        let side: usize = shape.iter().product();
        assert_eq!(side, self.side, "reshape must preserve the matrix side");
        self.shape = shape;
        self
    }

    pub fn data(&self) -> &[C<R>] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C<R> {
        self.data[i * self.side + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C<R>) {
        self.data[i * self.side + j] = v;
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn trace(&self) -> C<R> {
        let mut t = Complex::default();
        for i in 0..self.side {
            t += self.data[i * self.side + i];
        }
        t
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.shape.clone(), |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, a: C<R>) -> Self {
        let data = self.data.iter().map(|&z| z * a).collect();
        Operator { data, shape: self.shape.clone(), side: self.side }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.side, other.side, "operator add: side mismatch");
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect();
        Operator { data, shape: self.shape.clone(), side: self.side }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.side, other.side, "operator sub: side mismatch");
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect();
        Operator { data, shape: self.shape.clone(), side: self.side }
    }

    /// Matrix product; ikj loop order for row-major locality, fixed reduction
    /// order so results are reproducible.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.side, other.side, "operator mul: side mismatch");
        let n = self.side;
        let mut out = vec![Complex::<R>::default(); n * n];
        for i in 0..n {
            let row_a = &self.data[i * n..(i + 1) * n];
            let out_row = &mut out[i * n..(i + 1) * n];
            for (k, &aik) in row_a.iter().enumerate() {
                if aik.re.is_zero() && aik.im.is_zero() {
                    continue;
                }
                let row_b = &other.data[k * n..(k + 1) * n];
                for (o, &bkj) in out_row.iter_mut().zip(row_b) {
                    *o += aik * bkj;
                }
            }
        }
        Operator { data: out, shape: self.shape.clone(), side: n }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn frobenius_norm(&self) -> R {
        self.data
            .iter()
            .map(|z| z.norm_sqr())
            .fold(R::zero(), |a, b| a + b)
            .sqrt()
    }

    pub fn max_abs(&self) -> R {
        self.data.iter().map(|z| z.norm()).fold(R::zero(), R::max)
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> R {
        let n = self.side;
        let mut best = R::zero();
        for j in 0..n {
            let mut s = R::zero();
            for i in 0..n {
                s += self.data[i * n + j].norm();
            }
            best = best.max(s);
        }
        best
    }

    pub fn max_abs_diff(&self, other: &Self) -> R {
        assert_eq!(self.side, other.side);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(R::zero(), R::max)
    }

    pub fn is_hermitian(&self, tol: R) -> bool {
        let n = self.side;
        for i in 0..n {
            for j in i..n {
                if (self.get(i, j) - self.get(j, i).conj()).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_unitary(&self, tol: R) -> bool {
        let gram = self.adjoint().mul(self);
        gram.max_abs_diff(&Self::identity(self.shape.clone())) <= tol
    }

    pub fn is_normal(&self, tol: R) -> bool {
        let left = self.mul(&self.adjoint());
        let right = self.adjoint().mul(self);
        left.max_abs_diff(&right) <= tol
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C<R>]) -> Vec<C<R>> {
        assert_eq!(v.len(), self.side, "matvec: length mismatch");
        let n = self.side;
        let mut out = vec![Complex::<R>::default(); n];
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let mut acc = Complex::<R>::default();
            for (a, b) in row.iter().zip(v) {
                acc += *a * *b;
            }
            out[i] = acc;
        }
        out
    }

    /// Partial trace keeping the listed factors (original order preserved).
    ///
    /// An empty keep set yields the 1x1 operator holding the full trace.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Operator<R>> {
        let m = self.shape.len();
        let mut keep_sorted = keep.to_vec();
        keep_sorted.sort_unstable();
        keep_sorted.dedup();
        if keep_sorted.len() != keep.len() {
            return Err(CoreError::InvalidInput("duplicate factors in keep set".into()));
        }
        if keep_sorted.iter().any(|&k| k >= m) {
            return Err(CoreError::InvalidInput(format!(
                "keep set references factor out of range 0..{m}"
            )));
        }
        if keep_sorted.is_empty() {
            let mut out = Operator::zeros(vec![1]);
            out.data[0] = self.trace();
            return Ok(out);
        }

        let traced: Vec<usize> = (0..m).filter(|k| !keep_sorted.contains(k)).collect();
        let kept_dims: Vec<usize> = keep_sorted.iter().map(|&k| self.shape[k]).collect();
        let traced_dims: Vec<usize> = traced.iter().map(|&k| self.shape[k]).collect();
        let kept_idx = MultiIndex::new(&kept_dims);
        let full_idx = MultiIndex::new(&self.shape);
        let traced_total: usize = traced_dims.iter().product();
        let traced_idx = if traced.is_empty() { None } else { Some(MultiIndex::new(&traced_dims)) };

        let kept_total = kept_idx.total();
        let mut out = Operator::zeros(kept_dims);
        let mut row_digits = vec![0usize; m];
        let mut col_digits = vec![0usize; m];
        for a in 0..kept_total {
            let ad = kept_idx.unrank(a);
            for b in 0..kept_total {
                let bd = kept_idx.unrank(b);
                let mut acc = Complex::<R>::default();
                for t in 0..traced_total {
                    let td = traced_idx.as_ref().map(|ix| ix.unrank(t)).unwrap_or_default();
                    for (pos, &f) in keep_sorted.iter().enumerate() {
                        row_digits[f] = ad[pos];
                        col_digits[f] = bd[pos];
                    }
                    for (pos, &f) in traced.iter().enumerate() {
                        row_digits[f] = td[pos];
                        col_digits[f] = td[pos];
                    }
                    let i = full_idx.rank(&row_digits);
                    let j = full_idx.rank(&col_digits);
                    acc += self.get(i, j);
                }
                out.set(a, b, acc);
            }
        }
        Ok(out)
    }
}

/// Tensor product with resource guard. `cap = None` uses the default cap.
///
/// The resulting shape is the concatenation of the input shapes and
/// `(a ⊗ b)[(i,k),(j,l)] = a[i,j] b[k,l]`.
pub fn tensor_product<R: Real>(
    a: &Operator<R>,
    b: &Operator<R>,
    cap: Option<usize>,
) -> Result<Operator<R>> {
    let cap = cap.unwrap_or(DEFAULT_DIM_CAP);
    let side = a
        .side()
        .checked_mul(b.side())
        .ok_or(CoreError::DimensionCap { requested: usize::MAX, cap })?;
    if side > cap {
        return Err(CoreError::DimensionCap { requested: side, cap });
    }
    let mut shape = a.shape().to_vec();
    shape.extend_from_slice(b.shape());
    let (na, nb) = (a.side(), b.side());
    let mut data = vec![Complex::<R>::default(); side * side];
    for i in 0..na {
        for j in 0..na {
            let aij = a.get(i, j);
            if aij.re.is_zero() && aij.im.is_zero() {
                continue;
            }
            for k in 0..nb {
                let row = (i * nb + k) * side + j * nb;
                let brow = &b.data[k * nb..(k + 1) * nb];
                for (l, &bkl) in brow.iter().enumerate() {
                    data[row + l] = aij * bkl;
                }
            }
        }
    }
    Ok(Operator { data, shape, side })
}

/// Pauli matrices; index 0 is the identity.
pub fn pauli<R: Real>(k: usize) -> Operator<R> {
    let (z, o) = (c::<R>(0.0, 0.0), c::<R>(1.0, 0.0));
    let data = match k {
        0 => vec![o, z, z, o],
        1 => vec![z, o, o, z],
        2 => vec![z, c(0.0, -1.0), c(0.0, 1.0), z],
        3 => vec![o, z, z, c(-1.0, 0.0)],
        _ => panic!("pauli index must be 0..=3"),
    };
    Operator::new(data, vec![2])
}
