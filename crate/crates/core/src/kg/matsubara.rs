//! Thermal (compactified-time) correlators from the frequency sum over
//! `w_n = 2 pi n / beta`, with the exact thermal-oscillator closed form as
//! the independent oracle.

use crate::error::{CoreError, Result};
use crate::scalar::{Real, C};
use num_complex::Complex;

/// Mode content for the frequency sum.
#[derive(Debug, Clone)]
pub enum ThermalMode<R: Real> {
    /// A single oscillator of energy E.
    SingleMode(R),
    /// Independent modes at the given energies (e.g. a momentum grid with
    /// dispersion `sqrt(p^2 + m^2)`); contributions add.
    ModeSet(Vec<R>),
}

/// Frequency-summed thermal two-point value at separation `theta in [0, beta)`.
///
/// The sum `1/beta sum_n e^{i w_n theta} / (w_n^2 + E^2)` is accelerated by
/// subtracting the closed-form `1/w^2` series (a Bernoulli polynomial), so
/// the truncated remainder decays like `1/n^4`. Returns the value and an
/// analytic bound on the dropped tail.
pub fn matsubara_correlator<R: Real>(
    theta: R,
    mode_cap: usize,
    mode: &ThermalMode<R>,
    beta: R,
) -> Result<(C<R>, R)> {
    if !(beta > R::zero()) {
        return Err(CoreError::InvalidInput("beta must be positive".into()));
    }
    if theta < R::zero() || theta >= beta {
        return Err(CoreError::InvalidInput("theta must lie in [0, beta)".into()));
    }
    if mode_cap < 4 {
        return Err(CoreError::InvalidInput("mode_cap too small".into()));
    }
    let energies: &[R] = match mode {
        ThermalMode::SingleMode(e) => std::slice::from_ref(e),
        ThermalMode::ModeSet(es) => es.as_slice(),
    };
    let two_pi = R::of(2.0) * R::PI();
    let x = theta / beta;
    // sum_{n != 0} e^{i w_n theta} / w_n^2
    //   = 2 (beta/2pi)^2 sum_{n>=1} cos(2 pi n x)/n^2
    //   = (beta^2/2) (1/6 - x + x^2).
    let bernoulli_sum = beta * beta * R::of(0.5) * (R::of(1.0 / 6.0) - x + x * x);

    let mut total = Complex::<R>::default();
    let mut tail_bound = R::zero();
    for &e in energies {
        if !(e > R::zero()) {
            return Err(CoreError::InvalidInput("mode energies must be positive".into()));
        }
        let e2 = e * e;
        let mut acc = Complex::new(e2.recip() + bernoulli_sum, R::zero());
        for n in 1..=mode_cap {
            let w = two_pi * R::of(n as f64) / beta;
            let w2 = w * w;
            // Accelerated term: 1/(w^2+E^2) - 1/w^2 = -E^2/(w^2 (w^2+E^2)).
            let corr = -e2 / (w2 * (w2 + e2));
            let phase = (w * theta).cos() * R::of(2.0);
            acc += Complex::new(corr * phase, R::zero());
        }
        // |tail| <= 2 sum_{n>cap} E^2/w^4 <= E^2 beta^4/(8 pi^4) * 1/(3 cap^3).
        let cap = R::of(mode_cap as f64);
        tail_bound += e2 * beta.powi(4) / (R::of(8.0) * R::PI().powi(4) * R::of(3.0) * cap.powi(3));
        total += acc * Complex::new(beta.recip(), R::zero());
    }
    Ok((total, tail_bound / beta))
}

/// Exact thermal-oscillator two-point function
/// `(1/2E) [(1 + n_B) e^{-E theta} + n_B e^{E theta}]`,
/// `n_B = 1/(e^{beta E} - 1)`; the closed form the frequency sum must match.
pub fn thermal_oscillator_closed_form<R: Real>(e: R, beta: R, theta: R) -> R {
    let nb = ((beta * e).exp() - R::one()).recip();
    ((R::one() + nb) * (-e * theta).exp() + nb * (e * theta).exp()) / (R::of(2.0) * e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frequency_sum_matches_oscillator() {
        for (e, beta) in [(1.0f64, 2.0f64), (0.5, 4.0)] {
            for k in 0..10 {
                let theta = beta * (0.05 + 0.09 * k as f64);
                let (v, tail) = matsubara_correlator(theta, 10_000, &ThermalMode::SingleMode(e), beta)
                    .unwrap();
                let oracle = thermal_oscillator_closed_form(e, beta, theta);
                assert!(
                    (v.re - oracle).abs() < 1e-6,
                    "E={e} beta={beta} theta={theta}: {} vs {oracle} (tail {tail})",
                    v.re
                );
                assert!(v.im.abs() < 1e-12);
                assert!(tail < 1e-6);
            }
        }
    }

    #[test]
    fn kms_periodicity() {
        let (e, beta) = (1.0f64, 2.0f64);
        let delta = 1e-3;
        let (near_zero, _) =
            matsubara_correlator(delta, 10_000, &ThermalMode::SingleMode(e), beta).unwrap();
        let (near_beta, _) =
            matsubara_correlator(beta - delta, 10_000, &ThermalMode::SingleMode(e), beta).unwrap();
        assert!(
            (near_zero.re - near_beta.re).abs() < 1e-6,
            "{} vs {}",
            near_zero.re,
            near_beta.re
        );
    }

    #[test]
    fn heavy_mode_decouples() {
        let (v, _) =
            matsubara_correlator(0.7, 4_000, &ThermalMode::SingleMode(200.0f64), 2.0).unwrap();
        assert!(v.norm() < 1e-6, "heavy mode value {v:?}");
    }

    #[test]
    fn mode_set_is_additive() {
        let beta = 2.0f64;
        let theta = 0.6;
        let (a, _) =
            matsubara_correlator(theta, 4_000, &ThermalMode::SingleMode(1.0f64), beta).unwrap();
        let (b, _) =
            matsubara_correlator(theta, 4_000, &ThermalMode::SingleMode(1.7f64), beta).unwrap();
        let (ab, _) =
            matsubara_correlator(theta, 4_000, &ThermalMode::ModeSet(vec![1.0, 1.7]), beta)
                .unwrap();
        assert!(((a + b) - ab).norm() < 1e-12);
    }

    #[test]
    fn domain_checks() {
        assert!(matsubara_correlator(2.0, 100, &ThermalMode::SingleMode(1.0f64), 2.0).is_err());
        assert!(matsubara_correlator(0.5, 2, &ThermalMode::SingleMode(1.0f64), 2.0).is_err());
    }
}
