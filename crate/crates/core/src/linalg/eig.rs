//! Eigendecompositions: cyclic Jacobi for Hermitian matrices and a shifted
//! complex QR iteration (Schur form) for general matrices.

use super::operator::Operator;
use crate::scalar::{cr, Real, C};
use num_complex::Complex;

/// Ordering applied by [`eig_spectrum`]: descending real part, then
/// descending imaginary part. Repeated runs are bit-stable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigOrder {
    RealDescending,
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Returns eigenvalues in ascending order and the unitary matrix of
/// eigenvectors as columns: `A = V diag(w) V^dagger`.
pub fn eigh<R: Real>(op: &Operator<R>) -> (Vec<R>, Operator<R>) {
    let n = op.side();
    let mut a: Vec<C<R>> = op.data().to_vec();
    let mut v: Vec<C<R>> = vec![Complex::default(); n * n];
    for i in 0..n {
        v[i * n + i] = cr(R::one());
    }

    let idx = |i: usize, j: usize| i * n + j;
    let eps = R::epsilon();
    let max_sweeps = 60;
    for _sweep in 0..max_sweeps {
        // Off-diagonal Frobenius norm, for convergence control.
        let mut off = R::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[idx(i, j)].norm_sqr();
            }
        }
        let scale = (0..n).map(|i| a[idx(i, i)].norm_sqr()).fold(off, |s, d| s + d);
        if off.sqrt() <= eps * scale.sqrt().max(R::one()) * R::of(1e2) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[idx(p, q)];
                let r = apq.norm();
                if r <= eps * (a[idx(p, p)].norm() + a[idx(q, q)].norm()).max(R::min_positive_value()) {
                    continue;
                }
                // Phase that makes the off-diagonal entry real, then a real
                // Jacobi rotation on the 2x2 block.
                let phase = apq / Complex::new(r, R::zero());
                let alpha = a[idx(p, p)].re;
                let beta = a[idx(q, q)].re;
                let tau = (beta - alpha) / (R::of(2.0) * r);
                let t = {
                    let s = (R::one() + tau * tau).sqrt();
                    if tau >= R::zero() {
                        (tau + s).recip()
                    } else {
                        (tau - s).recip()
                    }
                };
                let cth = (R::one() + t * t).sqrt().recip();
                let sth = t * cth;
                // Column rotation J: columns p,q mix with
                // J = [[c, -s],[s e^{-i phi}, c e^{-i phi}]].
                let jpp = Complex::new(cth, R::zero());
                let jpq = Complex::new(-sth, R::zero());
                let jqp = phase.conj() * sth;
                let jqq = phase.conj() * cth;
                // A <- J^H A J : first columns, then rows.
                for i in 0..n {
                    let aip = a[idx(i, p)];
                    let aiq = a[idx(i, q)];
                    a[idx(i, p)] = aip * jpp + aiq * jqp;
                    a[idx(i, q)] = aip * jpq + aiq * jqq;
                }
                for j in 0..n {
                    let apj = a[idx(p, j)];
                    let aqj = a[idx(q, j)];
                    a[idx(p, j)] = jpp.conj() * apj + jqp.conj() * aqj;
                    a[idx(q, j)] = jpq.conj() * apj + jqq.conj() * aqj;
                }
                for i in 0..n {
                    let vip = v[idx(i, p)];
                    let viq = v[idx(i, q)];
                    v[idx(i, p)] = vip * jpp + viq * jqp;
                    v[idx(i, q)] = vip * jpq + viq * jqq;
                }
            }
        }
    }

    let mut pairs: Vec<(R, usize)> = (0..n).map(|i| (a[idx(i, i)].re, i)).collect();
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite eigenvalues"));
    let vals: Vec<R> = pairs.iter().map(|&(w, _)| w).collect();
    let mut vec_sorted = vec![Complex::<R>::default(); n * n];
    for (col, &(_, src)) in pairs.iter().enumerate() {
        for i in 0..n {
            vec_sorted[i * n + col] = v[idx(i, src)];
        }
    }
    (vals, Operator::new(vec_sorted, vec![n]))
}

/// Reduce to upper Hessenberg form by Householder reflectors; returns (H, Q)
/// with `A = Q H Q^dagger`.
fn hessenberg<R: Real>(op: &Operator<R>) -> (Vec<C<R>>, Vec<C<R>>) {
    let n = op.side();
    let mut h: Vec<C<R>> = op.data().to_vec();
    let mut q: Vec<C<R>> = vec![Complex::default(); n * n];
    for i in 0..n {
        q[i * n + i] = cr(R::one());
    }
    let idx = |i: usize, j: usize| i * n + j;
    for k in 0..n.saturating_sub(2) {
        // Householder vector for column k below the subdiagonal.
        let mut xnorm = R::zero();
        for i in (k + 1)..n {
            xnorm += h[idx(i, k)].norm_sqr();
        }
        let xnorm = xnorm.sqrt();
        if xnorm <= R::epsilon() * R::of(16.0) {
            continue;
        }
        let x0 = h[idx(k + 1, k)];
        let alpha = if x0.norm() > R::zero() {
            -(x0 / Complex::new(x0.norm(), R::zero())) * xnorm
        } else {
            Complex::new(-xnorm, R::zero())
        };
        let mut u: Vec<C<R>> = vec![Complex::default(); n];
        u[k + 1] = x0 - alpha;
        for i in (k + 2)..n {
            u[i] = h[idx(i, k)];
        }
        let unorm_sq = u.iter().map(|z| z.norm_sqr()).fold(R::zero(), |a, b| a + b);
        if unorm_sq <= R::min_positive_value() {
            continue;
        }
        let two_over = R::of(2.0) / unorm_sq;
        // H <- P H, P = I - 2 u u^H / |u|^2
        for j in 0..n {
            let mut dot = Complex::<R>::default();
            for i in (k + 1)..n {
                dot += u[i].conj() * h[idx(i, j)];
            }
            let f = dot * two_over;
            for i in (k + 1)..n {
                let ui = u[i];
                h[idx(i, j)] = h[idx(i, j)] - ui * f;
            }
        }
        // H <- H P, Q <- Q P
        for i in 0..n {
            let mut dot = Complex::<R>::default();
            for j in (k + 1)..n {
                dot += h[idx(i, j)] * u[j];
            }
            let f = dot * two_over;
            for j in (k + 1)..n {
                h[idx(i, j)] = h[idx(i, j)] - f * u[j].conj();
            }
            let mut dotq = Complex::<R>::default();
            for j in (k + 1)..n {
                dotq += q[idx(i, j)] * u[j];
            }
            let fq = dotq * two_over;
            for j in (k + 1)..n {
                q[idx(i, j)] = q[idx(i, j)] - fq * u[j].conj();
            }
        }
        for i in (k + 2)..n {
            h[idx(i, k)] = Complex::default();
        }
        h[idx(k + 1, k)] = alpha;
    }
    (h, q)
}

/// Wilkinson shift: eigenvalue of the trailing 2x2 block closest to its
/// bottom-right entry.
fn wilkinson_shift<R: Real>(a: C<R>, b: C<R>, c: C<R>, d: C<R>) -> C<R> {
    let tr = a + d;
    let det = a * d - b * c;
    let half = tr * Complex::new(R::of(0.5), R::zero());
    let disc = (half * half - det).sqrt();
    let l1 = half + disc;
    let l2 = half - disc;
    if (l1 - d).norm() < (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Schur decomposition of a general complex matrix by explicit shifted QR on
/// the Hessenberg form: `A = Q T Q^dagger` with T upper triangular.
pub fn schur<R: Real>(op: &Operator<R>) -> (Operator<R>, Operator<R>) {
    let n = op.side();
    let (mut h, mut q) = hessenberg(op);
    let idx = |i: usize, j: usize| i * n + j;
    let eps = R::epsilon();

    let mut hi = n; // active window is rows/cols lo..hi (exclusive hi)
    let mut iter_guard = 0usize;
    let max_iter = 40 * n.max(1) * n.max(1);
    while hi > 1 {
        iter_guard += 1;
        assert!(iter_guard <= max_iter, "QR iteration failed to converge");
        // Deflate converged subdiagonals from the bottom.
        let mut deflated = false;
        for m in (1..hi).rev() {
            let sub = h[idx(m, m - 1)].norm();
            let local = h[idx(m, m)].norm() + h[idx(m - 1, m - 1)].norm();
            if sub <= eps * local.max(R::min_positive_value()) * R::of(8.0) {
                h[idx(m, m - 1)] = Complex::default();
                if m == hi - 1 {
                    hi -= 1;
                    deflated = true;
                    break;
                }
            }
        }
        if deflated {
            continue;
        }
        if hi <= 1 {
            break;
        }
        // Find the window start: the nearest zero subdiagonal above hi.
        let mut lo = hi - 1;
        while lo > 0 {
            let sub = h[idx(lo, lo - 1)].norm();
            if sub.is_zero() {
                break;
            }
            lo -= 1;
        }
        // Shift: Wilkinson from trailing block, with an occasional
        // exceptional shift to break symmetry stalls.
        let mu = if iter_guard % 97 == 0 {
            h[idx(hi - 1, hi - 1)] + Complex::new(h[idx(hi - 1, hi - 2)].norm(), R::zero())
        } else {
            wilkinson_shift(
                h[idx(hi - 2, hi - 2)],
                h[idx(hi - 2, hi - 1)],
                h[idx(hi - 1, hi - 2)],
                h[idx(hi - 1, hi - 1)],
            )
        };
        // Explicit QR step on the window via Givens rotations.
        let mut rot: Vec<(C<R>, C<R>)> = Vec::with_capacity(hi - lo);
        for i in lo..hi {
            h[idx(i, i)] = h[idx(i, i)] - mu;
        }
        for i in lo..(hi - 1) {
            let a = h[idx(i, i)];
            let b = h[idx(i + 1, i)];
            let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let (cs, sn) = if r <= R::min_positive_value() {
                (cr(R::one()), Complex::default())
            } else {
                let rinv = Complex::new(r.recip(), R::zero());
                (a * rinv, b * rinv)
            };
            rot.push((cs, sn));
            // Apply G^H to rows i, i+1 (columns i..n).
            for j in i..n {
                let x = h[idx(i, j)];
                let y = h[idx(i + 1, j)];
                h[idx(i, j)] = cs.conj() * x + sn.conj() * y;
                h[idx(i + 1, j)] = -sn * x + cs * y;
            }
        }
        for (k, &(cs, sn)) in rot.iter().enumerate() {
            let i = lo + k;
            // Apply G to columns i, i+1 (rows 0..=min(i+1, hi-1)).
            let top = (i + 2).min(hi);
            for r0 in 0..top {
                let x = h[idx(r0, i)];
                let y = h[idx(r0, i + 1)];
                h[idx(r0, i)] = x * cs + y * sn;
                h[idx(r0, i + 1)] = -x * sn.conj() + y * cs.conj();
            }
            for r0 in 0..n {
                let x = q[idx(r0, i)];
                let y = q[idx(r0, i + 1)];
                q[idx(r0, i)] = x * cs + y * sn;
                q[idx(r0, i + 1)] = -x * sn.conj() + y * cs.conj();
            }
        }
        for i in lo..hi {
            h[idx(i, i)] = h[idx(i, i)] + mu;
        }
    }
    // Clean the strictly-lower part.
    for i in 0..n {
        for j in 0..i {
            h[idx(i, j)] = Complex::default();
        }
    }
    (Operator::new(h, vec![n]), Operator::new(q, vec![n]))
}

/// Eigenvalues (and optional eigenvectors) of a general complex matrix via
/// Schur form plus triangular back-substitution.
pub fn eig_general<R: Real>(
    op: &Operator<R>,
    want_vectors: bool,
) -> (Vec<C<R>>, Option<Operator<R>>) {
    let n = op.side();
    let (t, q) = schur(op);
    let vals: Vec<C<R>> = (0..n).map(|i| t.get(i, i)).collect();
    if !want_vectors {
        return (vals, None);
    }
    let tnorm = t.frobenius_norm().max(R::min_positive_value());
    let safe = R::epsilon() * tnorm;
    let mut vecs = Operator::zeros(vec![n]);
    for (k, &lam) in vals.iter().enumerate() {
        // Solve (T - lam) y = 0 with y[k] = 1, y[j>k] = 0.
        let mut y = vec![Complex::<R>::default(); n];
        y[k] = cr(R::one());
        for i in (0..k).rev() {
            let mut rhs = Complex::<R>::default();
            for j in (i + 1)..=k {
                rhs += t.get(i, j) * y[j];
            }
            let mut diag = t.get(i, i) - lam;
            if diag.norm() < safe {
                diag = Complex::new(safe, R::zero());
            }
            y[i] = -rhs / diag;
        }
        let x = q.apply(&y);
        let norm = x.iter().map(|z| z.norm_sqr()).fold(R::zero(), |a, b| a + b).sqrt();
        let inv = Complex::new(norm.recip(), R::zero());
        for i in 0..n {
            vecs.set(i, k, x[i] * inv);
        }
    }
    (vals, Some(vecs))
}

/// Spectrum with the library's deterministic ordering: descending real part,
/// ties broken by descending imaginary part.
pub fn eig_spectrum<R: Real>(
    op: &Operator<R>,
    want_vectors: bool,
) -> (Vec<C<R>>, Option<Operator<R>>) {
    let hermitian_tol = R::epsilon() * op.max_abs().max(R::one()) * R::of(64.0);
    let (mut vals, vecs) = if op.is_hermitian(hermitian_tol) {
        let (w, v) = eigh(op);
        (w.into_iter().map(cr).collect::<Vec<_>>(), Some(v))
    } else {
        eig_general(op, want_vectors)
    };
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&a, &b| {
        let (x, y) = (vals[a], vals[b]);
        y.re.partial_cmp(&x.re)
            .unwrap()
            .then(y.im.partial_cmp(&x.im).unwrap())
    });
    let sorted_vals: Vec<C<R>> = order.iter().map(|&i| vals[i]).collect();
    vals = sorted_vals;
    let vecs = if want_vectors {
        vecs.map(|v| {
            let n = v.side();
            Operator::from_fn(vec![n], |i, j| v.get(i, order[j]))
        })
    } else {
        None
    };
    (vals, vecs)
}
