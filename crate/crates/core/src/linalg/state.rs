//! State vectors over factorized spaces and generalized two-vector states.

use super::operator::{MultiIndex, Operator};
use crate::error::{CoreError, Result};
use crate::scalar::{Real, C};
use num_complex::Complex;

/// Dense complex vector with a factorized-space shape.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<R: Real> {
    data: Vec<C<R>>,
    shape: Vec<usize>,
}

impl<R: Real> StateVector<R> {
    pub fn new(data: Vec<C<R>>, shape: Vec<usize>) -> Self {
        assert!(!shape.is_empty(), "shape list must be nonempty");
        let len: usize = shape.iter().product();
        assert_eq!(data.len(), len, "vector length must match factor product");
        StateVector { data, shape }
    }

    pub fn zeros(shape: Vec<usize>) -> Self {
        let len: usize = shape.iter().product();
        StateVector { data: vec![Complex::default(); len], shape }
    }

    /// Computational basis vector.
    pub fn basis(shape: Vec<usize>, index: usize) -> Self {
        let mut v = Self::zeros(shape);
        v.data[index] = Complex::new(R::one(), R::zero());
        v
    }

    pub fn data(&self) -> &[C<R>] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [C<R>] {
        &mut self.data
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn norm(&self) -> R {
        self.data
            .iter()
            .map(|z| z.norm_sqr())
            .fold(R::zero(), |a, b| a + b)
            .sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        assert!(n > R::zero(), "cannot normalize the zero vector");
        self.scale(Complex::new(n.recip(), R::zero()))
    }

    pub fn scale(&self, a: C<R>) -> Self {
        StateVector {
            data: self.data.iter().map(|&z| z * a).collect(),
            shape: self.shape.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        StateVector {
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect(),
            shape: self.shape.clone(),
        }
    }

    pub fn conj(&self) -> Self {
        StateVector {
            data: self.data.iter().map(|z| z.conj()).collect(),
            shape: self.shape.clone(),
        }
    }

    /// Hermitian inner product `<self|other>`.
    pub fn inner(&self, other: &Self) -> C<R> {
        assert_eq!(self.len(), other.len());
        let mut acc = Complex::default();
        for (a, b) in self.data.iter().zip(&other.data) {
            acc += a.conj() * *b;
        }
        acc
    }

    /// Plain bilinear pairing (no conjugation): `sum_i self_i other_i`.
    pub fn pair(&self, other: &Self) -> C<R> {
        assert_eq!(self.len(), other.len());
        let mut acc = Complex::default();
        for (a, b) in self.data.iter().zip(&other.data) {
            acc += *a * *b;
        }
        acc
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut shape = self.shape.clone();
        shape.extend_from_slice(&other.shape);
        let mut data = Vec::with_capacity(self.len() * other.len());
        for &a in &self.data {
            for &b in &other.data {
                data.push(a * b);
            }
        }
        StateVector { data, shape }
    }

    pub fn apply(&self, op: &Operator<R>) -> Self {
        StateVector { data: op.apply(&self.data), shape: self.shape.clone() }
    }

    /// Projector |self><self| (no normalization applied).
    pub fn projector(&self) -> Operator<R> {
        Operator::from_fn(self.shape.clone(), |i, j| self.data[i] * self.data[j].conj())
    }
}

/// Ordered pair of global vectors (|Psi>>, <<Phi|) with nonzero overlap,
/// representing the non-orthogonal rank-1 projector
/// `R = |Psi>><<Phi| / <<Phi|Psi>>`.
///
/// The bra stores covector components, i.e. `bra[i] = <<Phi|i>`; for a bra
/// obtained from a ket |Phi>> these are the conjugated amplitudes.
#[derive(Debug, Clone)]
pub struct GeneralizedState<R: Real> {
    ket: StateVector<R>,
    bra: StateVector<R>,
    overlap: C<R>,
}

impl<R: Real> GeneralizedState<R> {
    /// Build from a ket and covector components. `overlap_tol` is relative to
    /// the vector norms; pass `None` for the policy default 1e-12.
    pub fn from_ket_bra(
        ket: StateVector<R>,
        bra: StateVector<R>,
        overlap_tol: Option<R>,
    ) -> Result<Self> {
        if ket.shape() != bra.shape() {
            return Err(CoreError::ShapeMismatch(format!(
                "generalized state: ket shape {:?} vs bra shape {:?}",
                ket.shape(),
                bra.shape()
            )));
        }
        let overlap = bra.pair(&ket);
        let tol = overlap_tol.unwrap_or_else(|| R::of(1e-12));
        let floor = tol * ket.norm() * bra.norm();
        if overlap.norm() <= floor {
            return Err(CoreError::DegenerateNormalization {
                magnitude: overlap.norm().as_f64(),
            });
        }
        Ok(GeneralizedState { ket, bra, overlap })
    }

    /// Build from two kets; the second is conjugated into covector form.
    pub fn from_kets(ket: StateVector<R>, phi: StateVector<R>, tol: Option<R>) -> Result<Self> {
        let bra = phi.conj();
        Self::from_ket_bra(ket, bra, tol)
    }

    pub fn ket(&self) -> &StateVector<R> {
        &self.ket
    }

    pub fn bra(&self) -> &StateVector<R> {
        &self.bra
    }

    pub fn overlap(&self) -> C<R> {
        self.overlap
    }

    /// Trace of R, recomputed from the stored vectors (identically 1 up to
    /// the rounding in one division).
    pub fn trace(&self) -> C<R> {
        self.bra.pair(&self.ket) / self.overlap
    }

    /// Dense matrix of R. Only sensible at small dimensions.
    pub fn full_matrix(&self) -> Operator<R> {
        let inv = self.overlap.inv();
        Operator::from_fn(self.ket.shape().to_vec(), |i, j| {
            self.ket.data()[i] * self.bra.data()[j] * inv
        })
    }

    /// Reduced generalized state over the kept factors:
    /// `Tr_rest [ ket·bra ] / overlap`.
    pub fn reduced(&self, keep: &[usize]) -> Result<Operator<R>> {
        let shape = self.ket.shape().to_vec();
        let m = shape.len();
        let mut keep_sorted = keep.to_vec();
        keep_sorted.sort_unstable();
        keep_sorted.dedup();
        if keep_sorted.iter().any(|&k| k >= m) || keep_sorted.len() != keep.len() {
            return Err(CoreError::InvalidInput("bad keep set for reduction".into()));
        }
        let traced: Vec<usize> = (0..m).filter(|k| !keep_sorted.contains(k)).collect();
        let kept_dims: Vec<usize> = keep_sorted.iter().map(|&k| shape[k]).collect();
        let traced_dims: Vec<usize> = traced.iter().map(|&k| shape[k]).collect();
        let full_idx = MultiIndex::new(&shape);
        let kept_idx = MultiIndex::new(&kept_dims);
        let traced_total: usize = traced_dims.iter().product::<usize>().max(1);
        let traced_idx =
            if traced.is_empty() { None } else { Some(MultiIndex::new(&traced_dims)) };

        let inv = self.overlap.inv();
        let mut out = Operator::zeros(kept_dims);
        let mut row_digits = vec![0usize; m];
        let mut col_digits = vec![0usize; m];
        for a in 0..kept_idx.total() {
            let ad = kept_idx.unrank(a);
            for b in 0..kept_idx.total() {
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
                    acc += self.ket.data()[full_idx.rank(&row_digits)]
                        * self.bra.data()[full_idx.rank(&col_digits)];
                }
                out.set(a, b, acc * inv);
            }
        }
        Ok(out)
    }

    /// Weak value `<<Phi| O ⊗ 1_E |Psi>> / <<Phi|Psi>>` for an observable on
    /// the leading factors of the space.
    pub fn weak_value(&self, obs: &Operator<R>) -> Result<C<R>> {
        let shape = self.ket.shape();
        let s = obs.shape().len();
        if s > shape.len() || obs.shape() != &shape[..s] {
            return Err(CoreError::ShapeMismatch(format!(
                "observable shape {:?} is not a leading block of {:?}",
                obs.shape(),
                shape
            )));
        }
        let env_dim: usize = shape[s..].iter().product::<usize>().max(1);
        let sys_dim = obs.side();
        // <<Phi| (O ⊗ 1) |Psi>> = sum_{i,j,e} bra[(i,e)] O[i,j] ket[(j,e)].
        let mut acc = Complex::<R>::default();
        for i in 0..sys_dim {
            for j in 0..sys_dim {
                let oij = obs.get(i, j);
                if oij.re.is_zero() && oij.im.is_zero() {
                    continue;
                }
                let mut s_env = Complex::<R>::default();
                for e in 0..env_dim {
                    s_env += self.bra.data()[i * env_dim + e] * self.ket.data()[j * env_dim + e];
                }
                acc += oij * s_env;
            }
        }
        Ok(acc / self.overlap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::operator::pauli;
    use crate::scalar::c;

    #[test]
    fn weak_value_of_identity_is_one() {
        let ket = StateVector::<f64>::new(
            vec![c(0.6, 0.0), c(0.0, 0.8), c(0.1, 0.0), c(0.0, 0.0)],
            vec![2, 2],
        );
        let phi = StateVector::<f64>::new(
            vec![c(0.3, 0.1), c(0.2, 0.0), c(0.0, 0.5), c(0.4, 0.0)],
            vec![2, 2],
        );
        let gs = GeneralizedState::from_kets(ket, phi, None).unwrap();
        let w = gs.weak_value(&pauli::<f64>(0)).unwrap();
        assert!((w - c::<f64>(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn reduced_matches_full_matrix_partial_trace() {
        let ket = StateVector::<f64>::new(
            vec![c(0.6, 0.2), c(0.1, 0.8), c(0.3, 0.0), c(0.0, -0.4)],
            vec![2, 2],
        );
        let phi = StateVector::<f64>::new(
            vec![c(0.3, 0.1), c(0.2, 0.0), c(0.0, 0.5), c(0.4, -0.2)],
            vec![2, 2],
        );
        let gs = GeneralizedState::from_kets(ket, phi, None).unwrap();
        let direct = gs.reduced(&[0]).unwrap();
        let via_full = gs.full_matrix().partial_trace(&[0]).unwrap();
        assert!(direct.max_abs_diff(&via_full) < 1e-13);
        // Tr R = 1 and R^2 = R for the full matrix.
        let full = gs.full_matrix();
        assert!((full.trace() - c::<f64>(1.0, 0.0)).norm() < 1e-13);
        assert!(full.mul(&full).max_abs_diff(&full) < 1e-12);
    }

    #[test]
    fn vanishing_overlap_rejected() {
        let ket = StateVector::<f64>::basis(vec![2], 0);
        let phi = StateVector::<f64>::basis(vec![2], 1);
        assert!(matches!(
            GeneralizedState::from_kets(ket, phi, None),
            Err(CoreError::DegenerateNormalization { .. })
        ));
    }
}
