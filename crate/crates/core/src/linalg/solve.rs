//! Complex LU factorization with partial pivoting, used by the Pade matrix
//! exponential.

use super::operator::Operator;
use crate::scalar::{Real, C};
use num_complex::Complex;

/// Solve `A X = B` for square complex `A`.
pub fn lu_solve<R: Real>(a: &Operator<R>, b: &Operator<R>) -> Operator<R> {
    let n = a.side();
    assert_eq!(b.side(), n, "lu_solve: side mismatch");
    let mut lu: Vec<C<R>> = a.data().to_vec();
    let mut x: Vec<C<R>> = b.data().to_vec();
    let idx = |i: usize, j: usize| i * n + j;
    let mut piv: Vec<usize> = (0..n).collect();

    for k in 0..n {
        // Partial pivot on column k.
        let mut best = k;
        let mut best_mag = lu[idx(k, k)].norm();
        for i in (k + 1)..n {
            let m = lu[idx(i, k)].norm();
            if m > best_mag {
                best = i;
                best_mag = m;
            }
        }
        assert!(best_mag > R::zero(), "singular matrix in lu_solve");
        if best != k {
            for j in 0..n {
                lu.swap(idx(k, j), idx(best, j));
            }
            piv.swap(k, best);
            for j in 0..n {
                x.swap(idx(k, j), idx(best, j));
            }
        }
        let pivot = lu[idx(k, k)];
        for i in (k + 1)..n {
            let f = lu[idx(i, k)] / pivot;
            lu[idx(i, k)] = f;
            if f.re.is_zero() && f.im.is_zero() {
                continue;
            }
            for j in (k + 1)..n {
                let v = lu[idx(k, j)] * f;
                lu[idx(i, j)] = lu[idx(i, j)] - v;
            }
            for j in 0..n {
                let v = x[idx(k, j)] * f;
                x[idx(i, j)] = x[idx(i, j)] - v;
            }
        }
    }
    // Back substitution.
    for j in 0..n {
        for i in (0..n).rev() {
            let mut acc = x[idx(i, j)];
            for k in (i + 1)..n {
                acc -= lu[idx(i, k)] * x[idx(k, j)];
            }
            x[idx(i, j)] = acc / lu[idx(i, i)];
        }
    }
    Operator::new(x, a.shape().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_ginibre, rng_from_seed};

    #[test]
    fn solve_reproduces_rhs() {
        let mut rng = rng_from_seed(3);
        let a = random_ginibre::<f64>(&mut rng, 6);
        let b = random_ginibre::<f64>(&mut rng, 6);
        let x = lu_solve(&a, &b);
        assert!(a.mul(&x).max_abs_diff(&b) < 1e-10);
    }
}
