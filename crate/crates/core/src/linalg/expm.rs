//! Matrix exponential: spectral route for normal matrices, Pade 13
//! scaling-and-squaring otherwise.

use super::eig::{eig_general, eigh};
use super::operator::Operator;
use super::solve::lu_solve;
use crate::error::{CoreError, Result};
use crate::scalar::{cr, Real, C};
use num_complex::Complex;

/// `exp(scale * op)`.
///
/// Hermitian and (detected) normal inputs go through eigendecomposition so
/// unitarity of `exp(i e H)` holds to machine precision; everything else uses
/// Pade scaling-and-squaring. `exp(0 * op)` returns the identity exactly.
pub fn matrix_exp<R: Real>(op: &Operator<R>, scale: C<R>) -> Result<Operator<R>> {
    if !op.is_finite() {
        return Err(CoreError::NonFinite("matrix_exp input"));
    }
    let shape = op.shape().to_vec();
    if scale.norm().is_zero() || op.max_abs().is_zero() {
        return Ok(Operator::identity(shape));
    }
    let scale_tol = op.max_abs().max(R::one()) * R::epsilon() * R::of(64.0);
    if op.is_hermitian(scale_tol) {
        let (w, v) = eigh(op);
        let n = op.side();
        let mut out = Operator::zeros(shape);
        // V diag(exp(scale w)) V^dagger with a fixed contraction order.
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex::<R>::default();
                for k in 0..n {
                    let e = (scale * cr(w[k])).exp();
                    acc += v.get(i, k) * e * v.get(j, k).conj();
                }
                out.set(i, j, acc);
            }
        }
        return Ok(out);
    }
    let norm_sq = op.frobenius_norm();
    let normal_tol = R::epsilon() * norm_sq * norm_sq.max(R::one()) * R::of(256.0);
    if op.is_normal(normal_tol) {
        // Schur form of a normal matrix is diagonal; reuse the general path
        // and exponentiate eigenvalues in the unitary eigenbasis.
        let (vals, vecs) = eig_general(op, true);
        let v = vecs.expect("vectors requested");
        if v.is_unitary(R::of(1e-8)) {
            let n = op.side();
            let mut out = Operator::zeros(shape.clone());
            for i in 0..n {
                for j in 0..n {
                    let mut acc = Complex::<R>::default();
                    for k in 0..n {
                        let e = (scale * vals[k]).exp();
                        acc += v.get(i, k) * e * v.get(j, k).conj();
                    }
                    out.set(i, j, acc);
                }
            }
            return Ok(out);
        }
        // Defective numerics (clustered spectrum): fall through to Pade.
    }
    pade_expm(&op.scale(scale))
}

/// Higham's degree-13 Pade approximant with scaling and squaring.
fn pade_expm<R: Real>(b: &Operator<R>) -> Result<Operator<R>> {
    let theta13 = R::of(5.371920351148152);
    let norm = b.one_norm();
    let mut s: u32 = 0;
    if norm > theta13 {
        let ratio = (norm / theta13).log2().ceil();
        s = ratio.as_f64() as u32;
    }
    let a = b.scale(cr(R::of(0.5f64.powi(s as i32))));
    let coeffs: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    let c = |k: usize| cr(R::of(coeffs[k]));
    let id = Operator::identity(a.shape().to_vec());
    let a2 = a.mul(&a);
    let a4 = a2.mul(&a2);
    let a6 = a4.mul(&a2);
    let u_inner = a6
        .scale(c(13))
        .add(&a4.scale(c(11)))
        .add(&a2.scale(c(9)));
    let u = a.mul(&a6.mul(&u_inner).add(
        &a6.scale(c(7)).add(&a4.scale(c(5))).add(&a2.scale(c(3))).add(&id.scale(c(1))),
    ));
    let v_inner = a6
        .scale(c(12))
        .add(&a4.scale(c(10)))
        .add(&a2.scale(c(8)));
    let v = a6
        .mul(&v_inner)
        .add(&a6.scale(c(6)))
        .add(&a4.scale(c(4)))
        .add(&a2.scale(c(2)))
        .add(&id.scale(c(0)));
    let mut x = lu_solve(&v.sub(&u), &v.add(&u));
    for _ in 0..s {
        x = x.mul(&x);
    }
    if !x.is_finite() {
        return Err(CoreError::NonFinite("matrix_exp result"));
    }
    Ok(x)
}
