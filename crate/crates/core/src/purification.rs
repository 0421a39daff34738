//! Generalized purifications: paired thermofield-style vacua with complex
//! weights, Bogoliubov coefficients, the single-qubit two-slice generalized
//! state, weak values and pseudo-entropy.

use crate::error::{CoreError, Result};
use crate::linalg::{eig_general, eigh, matrix_exp, GeneralizedState, Operator, StateVector};
use crate::scalar::{c, cr, Real, C};
use num_complex::Complex;

/// Complex mode weights `lambda_k` with positive real part (geometric
/// convergence of every mode sum).
#[derive(Debug, Clone)]
pub struct ModeSpectrum<R: Real> {
    lambdas: Vec<C<R>>,
}

impl<R: Real> ModeSpectrum<R> {
    pub fn new(lambdas: Vec<C<R>>) -> Result<Self> {
        for (k, l) in lambdas.iter().enumerate() {
            if !(l.re > R::zero()) {
                return Err(CoreError::InvalidInput(format!(
                    "mode {k}: Re(lambda) must be positive, got {}",
                    l.re
                )));
            }
        }
        Ok(ModeSpectrum { lambdas })
    }

    pub fn lambdas(&self) -> &[C<R>] {
        &self.lambdas
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }
}

/// Occupation cutoff for materialized Fock vectors.
#[derive(Debug, Clone, Copy)]
pub struct TruncatedFockSpace {
    pub n_max: usize,
    pub modes: usize,
}

impl TruncatedFockSpace {
    pub fn new(n_max: usize, modes: usize) -> Result<Self> {
        if n_max < 1 || modes < 1 {
            return Err(CoreError::InvalidInput("n_max and modes must be >= 1".into()));
        }
        let per = n_max + 1;
        let mut dim: usize = 1;
        for _ in 0..2 * modes {
            dim = dim
                .checked_mul(per)
                .ok_or(CoreError::DimensionCap { requested: usize::MAX, cap: crate::numeric::DEFAULT_DIM_CAP })?;
        }
        if dim > crate::numeric::DEFAULT_DIM_CAP {
            return Err(CoreError::DimensionCap { requested: dim, cap: crate::numeric::DEFAULT_DIM_CAP });
        }
        Ok(TruncatedFockSpace { n_max, modes })
    }

    /// Shape of the doubled (system ⊗ environment) space, system modes first.
    pub fn doubled_shape(&self) -> Vec<usize> {
        vec![self.n_max + 1; 2 * self.modes]
    }

    pub fn system_factors(&self) -> Vec<usize> {
        (0..self.modes).collect()
    }
}

/// Bogoliubov pair with `|u|^2 - |v|^2 = 1`.
#[derive(Debug, Clone, Copy)]
pub struct BogoliubovPair<R: Real> {
    pub u: C<R>,
    pub v: C<R>,
}

impl<R: Real> BogoliubovPair<R> {
    pub fn hyperbolic_residual(&self) -> R {
        (self.u.norm_sqr() - self.v.norm_sqr() - R::one()).abs()
    }
}

/// `u = 1/sqrt(1 - e^{-Re lambda})`, `v = -e^{-lambda/2}/sqrt(1 - e^{-Re lambda})`.
pub fn bogoliubov_coeffs<R: Real>(lambda: C<R>) -> Result<BogoliubovPair<R>> {
    if !(lambda.re > R::zero()) {
        return Err(CoreError::InvalidInput("Re(lambda) must be positive".into()));
    }
    let denom = (R::one() - (-lambda.re).exp()).sqrt();
    let u = cr(denom.recip());
    let v = -(lambda * c(-0.5, 0.0)).exp() / cr(denom);
    Ok(BogoliubovPair { u, v })
}

/// Required cutoff for a truncation bound: smallest n with
/// `e^{-Re(lambda) n} < bound`.
pub fn required_n_max<R: Real>(lambda: C<R>, bound: R) -> usize {
    let n = (-(bound.ln())) / lambda.re;
    n.as_f64().ceil().max(1.0) as usize
}

/// Paired vacua `(|0_l>>, <<0bar_l|)` on the doubled truncated space.
///
/// Ket amplitudes are `prod_k e^{-lambda_k n_k / 2}` on matched
/// system/environment occupations; the bra is the covector of the conjugate
/// state, whose components come out as the same weights. The overlap is the
/// product of truncated geometric sums `prod_k sum_n e^{-lambda_k n}`.
pub fn purified_vacua<R: Real>(
    spec: &ModeSpectrum<R>,
    fock: &TruncatedFockSpace,
    truncation_bound: R,
) -> Result<GeneralizedState<R>> {
    if spec.len() != fock.modes {
        return Err(CoreError::ShapeMismatch(format!(
            "{} modes in spectrum vs {} in Fock space",
            spec.len(),
            fock.modes
        )));
    }
    for (k, &l) in spec.lambdas().iter().enumerate() {
        let tail = (-l.re * R::of(fock.n_max as f64)).exp();
        if tail >= truncation_bound {
            return Err(CoreError::Truncation {
                mode: k,
                required_n_max: required_n_max(l, truncation_bound),
            });
        }
    }
    let per = fock.n_max + 1;
    let modes = fock.modes;
    let shape = fock.doubled_shape();
    let mut ket = StateVector::zeros(shape.clone());
    let mut bra = StateVector::zeros(shape);
    // Only matched occupations (n_vec, n_vec) carry weight; enumerate the
    // system block and mirror it into the environment digits.
    let sys_total: usize = per.pow(modes as u32);
    for flat_sys in 0..sys_total {
        let mut weight = Complex::new(R::one(), R::zero());
        let mut rest = flat_sys;
        for k in (0..modes).rev() {
            let n = rest % per;
            rest /= per;
            weight = weight * (spec.lambdas()[k] * c(-(n as f64) * 0.5, 0.0)).exp();
        }
        let flat_full = flat_sys * sys_total + flat_sys;
        ket.data_mut()[flat_full] = weight;
        bra.data_mut()[flat_full] = weight;
    }
    GeneralizedState::from_ket_bra(ket, bra, None)
}

/// Residual norm of the Bogoliubov annihilation condition
/// `(u a ⊗ 1 + v 1 ⊗ a~^dagger)|0_l>> = 0` on the truncated ladder for the
/// given mode. The result vector is assembled on a padded ladder so the
/// boundary term the cutoff drops is measured, not hidden.
pub fn annihilation_check<R: Real>(
    state: &GeneralizedState<R>,
    lambda: C<R>,
    fock: &TruncatedFockSpace,
    mode: usize,
) -> Result<R> {
    annihilation_residual(state.ket(), lambda, fock, mode)
}

/// Same residual for the conjugate vacuum `|0bar_l>>` (components are the
/// conjugated bra covector), annihilated by the coefficients of `lambda^*`.
pub fn annihilation_check_conjugate<R: Real>(
    state: &GeneralizedState<R>,
    lambda: C<R>,
    fock: &TruncatedFockSpace,
    mode: usize,
) -> Result<R> {
    let ket_bar = state.bra().conj();
    annihilation_residual(&ket_bar, lambda.conj(), fock, mode)
}

fn annihilation_residual<R: Real>(
    ket: &StateVector<R>,
    lambda: C<R>,
    fock: &TruncatedFockSpace,
    mode: usize,
) -> Result<R> {
    if mode >= fock.modes {
        return Err(CoreError::InvalidInput(format!("mode {mode} out of range")));
    }
    let pair = bogoliubov_coeffs(lambda)?;
    let per = fock.n_max + 1;
    let modes = fock.modes;
    let shape = fock.doubled_shape();
    let idx = crate::linalg::MultiIndex::new(&shape);
    let sys = mode;
    let env = modes + mode;

    // Component of the result at (n_sys, m_env):
    //   u sqrt(n_sys + 1) ket[n_sys + 1, m_env] + v sqrt(m_env) ket[n_sys, m_env - 1]
    // with out-of-range ket components zero. The environment digit extends
    // one rung past the cutoff so the term the truncation drops is counted.
    let mut norm_sq = R::zero();
    let total: usize = shape.iter().product();
    for flat in 0..total {
        let digits = idx.unrank(flat);
        let mut comp = Complex::<R>::default();
        if digits[sys] + 1 < per {
            let mut up = digits.clone();
            up[sys] += 1;
            comp = comp
                + pair.u
                    * cr(R::of(((digits[sys] + 1) as f64).sqrt()))
                    * ket.data()[idx.rank(&up)];
        }
        if digits[env] >= 1 {
            let mut down = digits.clone();
            down[env] -= 1;
            comp = comp
                + pair.v * cr(R::of((digits[env] as f64).sqrt())) * ket.data()[idx.rank(&down)];
        }
        norm_sq += comp.norm_sqr();
        // Leaked rung m_env = n_max + 1, fed by this state when its
        // environment digit sits at the cutoff.
        if digits[env] == per - 1 {
            let leak = pair.v * cr(R::of((per as f64).sqrt())) * ket.data()[flat];
            norm_sq += leak.norm_sqr();
        }
    }
    Ok(norm_sq.sqrt() / ket.norm())
}

/// Single-qubit, two-slice generalized state: the purification whose partial
/// trace over the third (environment) qubit reproduces
/// `rho_bar / Tr rho_bar` from [`crate::correspondence::pauli_extended_state`]
/// with initial state |0>.
pub fn qubit_generalized_state<R: Real>(h: &Operator<R>, eps: R) -> Result<GeneralizedState<R>> {
    if h.side() != 2 {
        return Err(CoreError::ShapeMismatch("expected a 2x2 generator".into()));
    }
    let shape = vec![2usize, 2, 2];
    let s = R::of(std::f64::consts::FRAC_1_SQRT_2);
    let mut psi = StateVector::zeros(shape.clone());
    psi.data_mut()[0b000] = cr(s);
    psi.data_mut()[0b011] = cr(s);
    let mut phi0 = StateVector::zeros(shape.clone());
    phi0.data_mut()[0b000] = cr(s);
    phi0.data_mut()[0b101] = cr(s);
    let u = matrix_exp(h, crate::scalar::ci(eps))?;
    let lifted = crate::linalg::tensor_product(
        &crate::linalg::tensor_product(&u, &u, None)?,
        &Operator::identity(vec![2]),
        None,
    )?;
    let phi = phi0.apply(&lifted.with_shape(shape));
    GeneralizedState::from_kets(psi, phi, None)
}

/// Pseudo-entropy `-Tr R log R` of a generalized state. The projector is
/// rank one by construction, so its only nonzero eigenvalue is `Tr R`; the
/// value is `-t log t` at that trace (zero whenever the trace is exactly
/// one). The principal log branch is used, with `0 log 0 := 0`.
pub fn pseudo_entropy_state<R: Real>(state: &GeneralizedState<R>) -> C<R> {
    let t = state.trace();
    if t.norm() < R::of(1e-13) {
        return Complex::default();
    }
    -t * t.ln()
}

/// Pseudo-entropy of a reduced (generally non-Hermitian) matrix with trace
/// close to one: sum of `-w log w` over eigenvalues, principal branch,
/// eigenvalues below the spectral floor contributing zero.
pub fn pseudo_entropy_matrix<R: Real>(op: &Operator<R>, trace_tol: R) -> Result<C<R>> {
    let t = op.trace();
    if (t - cr(R::one())).norm() > trace_tol {
        return Err(CoreError::TraceNotOne { trace: t.norm().as_f64() });
    }
    let (vals, _) = eig_general(op, false);
    let floor = R::of(1e-13);
    let mut acc = Complex::<R>::default();
    for w in vals {
        if w.norm() < floor {
            continue;
        }
        acc += -w * w.ln();
    }
    Ok(acc)
}

/// Von Neumann entropy of a Hermitian positive matrix, as a cross-check for
/// the pseudo-entropy on conventional density matrices.
pub fn von_neumann_entropy<R: Real>(op: &Operator<R>) -> R {
    let (w, _) = eigh(op);
    let floor = R::of(1e-13);
    w.into_iter()
        .filter(|l| *l > floor)
        .map(|l| -l * l.ln())
        .fold(R::zero(), |a, b| a + b)
}
