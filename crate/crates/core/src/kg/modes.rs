//! Klein-Gordon mode engine: foliation-dependent single-mode energies,
//! normal frequencies, off-shell momentum correlators, the pole-splitting
//! identity, Bogoliubov matching between foliations, vacuum-energy scaling
//! and the discrete time-translation generator.

use super::foliation::{mink_dot, BoostMatrix, Foliation};
use crate::error::{CoreError, Result};
use crate::linalg::Operator;
use crate::scalar::{c, cr, Real, C};
use num_complex::Complex;

/// Parameters for propagator-style evaluations.
#[derive(Debug, Clone)]
pub struct PropagatorConfig<R: Real> {
    /// Mass (energy units), > 0.
    pub mass: R,
    /// Scale conjugate to the action; the engine extracts the leading
    /// small-tau coefficient and uses finite tau only for remainder bounds.
    pub tau: R,
    /// Dimensionless pole regulator.
    pub eps_reg: R,
    /// Momentum cutoff per axis.
    pub cutoff: R,
    /// Absolute tolerance passed to the adaptive panels.
    pub quad_tol: R,
    /// Maximum bisection depth per panel.
    pub max_depth: usize,
    /// Segments used for oscillatory tail acceleration.
    pub tail_segments: usize,
    /// Spacetime dimension (2 supported quantitatively, 3 structurally).
    pub dim: usize,
    /// Verify the small-tau law of each momentum correlator on evaluation.
    pub debug_small_tau: bool,
}

impl<R: Real> PropagatorConfig<R> {
    pub fn default_1p1(mass: R) -> Self {
        PropagatorConfig {
            mass,
            tau: R::of(1e-3),
            eps_reg: R::of(1e-3),
            cutoff: R::of(40.0) * mass,
            quad_tol: R::of(1e-7),
            max_depth: 28,
            tail_segments: 48,
            dim: 2,
            debug_small_tau: false,
        }
    }
}

/// Foliation-dependent single-mode energy, metric-projector form:
/// `E_p(n) = |n| sqrt((n·p)^2/|n|^2 - p·p + m^2)`.
pub fn energy_ep<R: Real>(p: &[R], fol: &Foliation<R>, mass: R) -> R {
    let np = mink_dot(p, fol.n());
    let pp = mink_dot(p, p);
    let s = np * np / fol.norm_sq() - pp + mass * mass;
    debug_assert!(s >= -R::of(1e-12), "projected square must be nonnegative");
    fol.norm() * s.max(R::zero()).sqrt()
}

/// Same energy from the frame-sum form `|n| sqrt(sum_i (n_i·p/|n|)^2 + m^2)`;
/// used as the second algebraic route in tests.
pub fn energy_ep_frame_sum<R: Real>(p: &[R], fol: &Foliation<R>, mass: R) -> R {
    let mut s = mass * mass;
    for f in fol.frame() {
        let fp = mink_dot(f, p) / fol.norm();
        s += fp * fp;
    }
    fol.norm() * s.sqrt()
}

/// Normal frequency of the off-shell mode:
/// `(p·n - E_p(n))/|n|^2 - i eps_reg`.
pub fn normal_frequency<R: Real>(p: &[R], fol: &Foliation<R>, mass: R, eps_reg: R) -> C<R> {
    let omega = (mink_dot(p, fol.n()) - energy_ep(p, fol, mass)) / fol.norm_sq();
    Complex::new(omega, -eps_reg)
}

/// Off-shell momentum correlator density (the delta factor stripped):
/// `1/(exp{-i tau (omega + i eps)} - 1)` with `omega` the real part of the
/// normal frequency. The regulator enters with the opposite sign to
/// [`normal_frequency`]'s marker convention; this is the resolvent side.
pub fn momentum_correlator<R: Real>(
    p: &[R],
    fol: &Foliation<R>,
    cfg: &PropagatorConfig<R>,
) -> Result<C<R>> {
    let omega = (mink_dot(p, fol.n()) - energy_ep(p, fol, cfg.mass)) / fol.norm_sq();
    let nu = Complex::new(omega, cfg.eps_reg);
    let z = Complex::new(R::zero(), -cfg.tau) * nu;
    let den = z.exp() - cr(R::one());
    if den.norm() < R::of(1e-12) {
        return Err(CoreError::PoleProximity {
            momentum: p.iter().map(|x| x.as_f64()).collect(),
            magnitude: den.norm().as_f64(),
        });
    }
    let value = den.inv();
    if cfg.debug_small_tau {
        // Leading law: tau * value ~ i/(omega + i eps).
        let lead = Complex::new(R::zero(), R::one()) / nu;
        let diff = (value * cr(cfg.tau) - lead).norm();
        let bound = cfg.tau * nu.norm() * lead.norm() + R::of(1e-12);
        debug_assert!(
            diff <= bound * R::of(2.0),
            "small-tau law violated: diff {diff:?} bound {bound:?}"
        );
    }
    Ok(value)
}

/// Both sides of the pole-splitting identity
/// `i/(p0 - E + i eps) - i/(p0 + E - i eps) = 2 E' i / (p0^2 - E'^2)`
/// with the matched complex energy `E' = E - i eps`, plus the naive
/// right-hand side `2 E i/(p^2 - m^2 + i eps)` whose agreement is O(eps).
#[derive(Debug, Clone)]
pub struct PartialFractionReport<R: Real> {
    pub lhs: C<R>,
    pub rhs: C<R>,
    pub diff: R,
    pub rhs_naive: C<R>,
    pub naive_diff: R,
}

pub fn partial_fraction_identity<R: Real>(p: &[R], mass: R, eps: R) -> PartialFractionReport<R> {
    let fol = Foliation::canonical(p.len());
    let e = energy_ep(p, &fol, mass);
    let i = Complex::new(R::zero(), R::one());
    let p0 = p[0];
    let ie = Complex::new(R::zero(), eps);
    let lhs = i / (cr(p0 - e) + ie) - i / (cr(p0 + e) - ie);
    let e_shift = cr(e) - ie;
    let rhs = cr(R::of(2.0)) * e_shift * i / (cr(p0 * p0) - e_shift * e_shift);
    let diff = (lhs - rhs).norm() / rhs.norm().max(R::min_positive_value());
    let psq_m = mink_dot(p, p) - mass * mass;
    let rhs_naive = cr(R::of(2.0) * e) * i / (cr(psq_m) + ie);
    let naive_diff = (lhs - rhs_naive).norm() / rhs_naive.norm().max(R::min_positive_value());
    PartialFractionReport { lhs, rhs, diff, rhs_naive, naive_diff }
}

/// Bogoliubov coefficients relating the mode operators of two foliations at
/// the same off-shell momentum, obtained by solving the 2x2 linear matching
/// system between `(a_a(p), a_a^dag(-p))` and `(a_b(p), a_b^dag(-p))`.
pub fn foliation_bogoliubov<R: Real>(
    p: &[R],
    fol_a: &Foliation<R>,
    fol_b: &Foliation<R>,
    mass: R,
) -> Result<(R, R)> {
    let ea = energy_ep(p, fol_a, mass);
    let eb = energy_ep(p, fol_b, mass);
    if !(ea > R::zero()) || !(eb > R::zero()) {
        return Err(CoreError::InvalidInput("zero mode energy in Bogoliubov matching".into()));
    }
    // Field/momentum pair in each basis: (phi, pi) = T_E (a, a^dag(-p)) with
    //   T_E = [[1/sqrt(2E), 1/sqrt(2E)], [-i sqrt(E/2), i sqrt(E/2)]].
    let t = |e: R| {
        let s = (R::of(2.0) * e).sqrt();
        let q = (e / R::of(2.0)).sqrt();
        [
            [cr(s.recip()), cr(s.recip())],
            [Complex::new(R::zero(), -q), Complex::new(R::zero(), q)],
        ]
    };
    let ta = t(ea);
    let tb = t(eb);
    // M = T_b^{-1} T_a.
    let det = tb[0][0] * tb[1][1] - tb[0][1] * tb[1][0];
    let inv = [
        [tb[1][1] / det, -tb[0][1] / det],
        [-tb[1][0] / det, tb[0][0] / det],
    ];
    let m00 = inv[0][0] * ta[0][0] + inv[0][1] * ta[1][0];
    let m01 = inv[0][0] * ta[0][1] + inv[0][1] * ta[1][1];
    let alpha = m00;
    let beta = m01;
    if alpha.im.abs() > R::of(1e-10) || beta.im.abs() > R::of(1e-10) {
        return Err(CoreError::InvalidInput(
            "matching produced complex coefficients; energies should be real".into(),
        ));
    }
    Ok((alpha.re, beta.re))
}

/// Regularized vacuum-energy sums `rho(n) = 1/2 sum_grid E_p(n)` for a
/// foliation and its rescaling; the ratio tests first-order homogeneity.
pub fn vacuum_energy_scaling<R: Real>(
    fol: &Foliation<R>,
    scale: R,
    grid: &[Vec<R>],
    mass: R,
) -> Result<(R, R, R)> {
    if !(scale > R::zero()) {
        return Err(CoreError::InvalidInput("scale must be positive".into()));
    }
    let scaled = fol.scaled(scale)?;
    let half = R::of(0.5);
    let mut rho = R::zero();
    let mut rho_s = R::zero();
    for p in grid {
        rho += half * energy_ep(p, fol, mass);
        rho_s += half * energy_ep(p, &scaled, mass);
    }
    Ok((rho, rho_s, rho_s / rho))
}

/// Frequencies `w_k = 2 pi k / (N e)` of the compactified time translation
/// generator and the residual between `F diag(e^{i e w_k}) F^H` and the pure
/// one-site cyclic permutation.
pub fn discrete_p0_modes<R: Real>(n: usize, eps: R) -> Result<(Vec<R>, R)> {
    if n < 1 {
        return Err(CoreError::InvalidInput("need at least one time site".into()));
    }
    let total_t = eps * R::of(n as f64);
    let freqs: Vec<R> = (0..n)
        .map(|k| R::of(2.0) * R::PI() * R::of(k as f64) / total_t)
        .collect();
    // F[k][j] = e^{i w_k j eps} / sqrt(N); U = F^H diag(e^{i eps w_k}) F.
    let mut u = Operator::<R>::zeros(vec![n]);
    let invn = R::of(1.0 / n as f64);
    for j in 0..n {
        for jp in 0..n {
            let mut acc = Complex::<R>::default();
            for (k, &w) in freqs.iter().enumerate() {
                let phase = w * eps * (R::of(j as f64) - R::of(jp as f64) + R::one());
                acc += Complex::new(R::zero(), phase).exp();
                let _ = k;
            }
            u.set(jp, j, acc * cr(invn));
        }
    }
    let perm = Operator::<R>::from_permutation(vec![n], |j| (j + 1) % n);
    let residual = u.max_abs_diff(&perm);
    Ok((freqs, residual))
}

/// Pointwise boost-invariance data: `(E_p(n), E_{Lp}(Ln))`.
pub fn energy_boost_pair<R: Real>(
    p: &[R],
    fol: &Foliation<R>,
    boost: &BoostMatrix<R>,
    mass: R,
) -> Result<(R, R)> {
    let pb = boost.apply(p);
    let fb = fol.boosted(boost)?;
    Ok((energy_ep(p, fol, mass), energy_ep(&pb, &fb, mass)))
}
