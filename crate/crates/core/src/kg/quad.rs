//! One-dimensional quadrature: adaptive Gauss-Kronrod on finite intervals
//! plus Euler-accelerated handling of oscillatory semi-infinite tails.

use crate::scalar::{Real, C};
use num_complex::Complex;

/// 7-point Gauss / 15-point Kronrod nodes and weights on [-1, 1].
const XGK: [f64; 15] = [
    -0.991455371120813,
    -0.949107912342759,
    -0.864864423359769,
    -0.741531185599394,
    -0.586087235467691,
    -0.405845151377397,
    -0.207784955007898,
    0.0,
    0.207784955007898,
    0.405845151377397,
    0.586087235467691,
    0.741531185599394,
    0.864864423359769,
    0.949107912342759,
    0.991455371120813,
];
const WGK: [f64; 15] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
    0.204432940075298,
    0.190350578064785,
    0.169004726639267,
    0.140653259715525,
    0.104790010322250,
    0.063092092629979,
    0.022935322010529,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// Single Gauss-Kronrod panel; returns (K15 value, |K15 - G7| error proxy).
pub fn gk15<R: Real, F>(f: &F, a: R, b: R) -> (C<R>, R)
where
    F: Fn(R) -> C<R>,
{
    let half = (b - a) * R::of(0.5);
    let mid = (a + b) * R::of(0.5);
    let mut kronrod = Complex::<R>::default();
    let mut gauss = Complex::<R>::default();
    for (k, (&x, &w)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let v = f(mid + half * R::of(x));
        kronrod += v * Complex::new(R::of(w), R::zero());
        if k % 2 == 1 {
            // Gauss nodes sit at odd Kronrod indices; weights mirror around
            // the central node k = 7.
            let idx = ((k - 1) / 2).min((14 - k) / 2);
            gauss += v * Complex::new(R::of(WG[idx]), R::zero());
        }
    }
    let scale = Complex::new(half, R::zero());
    let kv = kronrod * scale;
    let gv = gauss * scale;
    (kv, (kv - gv).norm())
}

/// Globally adaptive bisection with optional pre-split hint points. Error
/// budget is distributed per subinterval; recursion is depth-limited.
pub fn adaptive<R: Real, F>(f: &F, a: R, b: R, abs_tol: R, max_depth: usize, hints: &[R]) -> (C<R>, R)
where
    F: Fn(R) -> C<R>,
{
    let mut cuts: Vec<R> = vec![a, b];
    for &h in hints {
        if h > a && h < b {
            cuts.push(h);
        }
    }
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let n_seg = cuts.len() - 1;
    let seg_tol = abs_tol / R::of(n_seg as f64);
    let mut total = Complex::<R>::default();
    let mut err = R::zero();
    for w in cuts.windows(2) {
        let (v, e) = adaptive_segment(f, w[0], w[1], seg_tol, max_depth);
        total += v;
        err += e;
    }
    (total, err)
}

fn adaptive_segment<R: Real, F>(f: &F, a: R, b: R, tol: R, depth: usize) -> (C<R>, R)
where
    F: Fn(R) -> C<R>,
{
    let (v, e) = gk15(f, a, b);
    if e <= tol || depth == 0 {
        return (v, e);
    }
    let mid = (a + b) * R::of(0.5);
    let half_tol = tol * R::of(0.5);
    let (lv, le) = adaptive_segment(f, a, mid, half_tol, depth - 1);
    let (rv, re) = adaptive_segment(f, mid, b, half_tol, depth - 1);
    (lv + rv, le + re)
}

/// Semi-infinite tail `int_start^inf f`. For oscillatory integrands the tail
/// is summed over half-periods of the dominant slow frequency and
/// accelerated by repeated averaging of partial sums (Euler transform); a
/// zero frequency falls back to geometrically growing segments, which suits
/// monotone power-law decay.
pub fn oscillatory_tail<R: Real, F>(f: &F, start: R, freq: R, levels: usize) -> (C<R>, R)
where
    F: Fn(R) -> C<R>,
{
    if freq.abs() > R::of(1e-8) {
        let h = R::PI() / freq.abs();
        let n = levels.max(8);
        let mut partial: Vec<C<R>> = Vec::with_capacity(n);
        let mut acc = Complex::<R>::default();
        let mut a = start;
        for _ in 0..n {
            let b = a + h;
            let (v, _) = gk15(f, a, b);
            acc += v;
            partial.push(acc);
            a = b;
        }
        // Euler acceleration: repeatedly average adjacent partial sums.
        let mut row = partial;
        while row.len() > 1 {
            let mut next = Vec::with_capacity(row.len() - 1);
            for w in row.windows(2) {
                next.push((w[0] + w[1]) * Complex::new(R::of(0.5), R::zero()));
            }
            row = next;
        }
        let est = row[0];
        // Error proxy: magnitude of the last raw segment after averaging.
        let (last_seg, _) = gk15(f, a, a + h);
        (est, last_seg.norm())
    } else {
        // Geometric segments until the contribution underflows.
        let mut acc = Complex::<R>::default();
        let mut a = start;
        let mut width = start.abs().max(R::one());
        let mut last = R::zero();
        for _ in 0..60 {
            let b = a + width;
            let (v, _) = gk15(f, a, b);
            acc += v;
            last = v.norm();
            if last < R::of(1e-16) {
                break;
            }
            a = b;
            width = width * R::of(2.0);
        }
        (acc, last)
    }
}
