//! Centralized numeric policy: every tolerance and resource cap used by the
//! library lives here, so experiments and tests share one set of knobs.

use crate::scalar::Real;

/// Hard default for the extended-dimension cap (`d^N * K` and friends).
pub const DEFAULT_DIM_CAP: usize = 1 << 14;

/// Tolerances and caps. Defaults are calibrated for `f64` on unit-normalized
/// data; `f32` users should rescale.
#[derive(Debug, Clone, Copy)]
pub struct Policy<R: Real> {
    /// Generic equality on unit-normalized data.
    pub equality_abs: R,
    /// Tight equality for near-exact arithmetic (permutations, closed forms).
    pub tight_abs: R,
    /// Unitarity / orthogonality residuals.
    pub unitarity: R,
    /// Relative overlap floor for generalized states.
    pub overlap_rel: R,
    /// Fock-space truncation bound `e^{-Re(lambda) n_max}`.
    pub truncation_bound: R,
    /// Eigenvalue cutoff below which spectra are treated as zero.
    pub spectral_floor: R,
    /// Cap on any dense matrix side produced by tensor products.
    pub dim_cap: usize,
}

impl<R: Real> Default for Policy<R> {
    fn default() -> Self {
        Policy {
            equality_abs: R::of(1e-10),
            tight_abs: R::of(1e-12),
            unitarity: R::of(1e-12),
            overlap_rel: R::of(1e-12),
            truncation_bound: R::of(1e-12),
            spectral_floor: R::of(1e-13),
            dim_cap: DEFAULT_DIM_CAP,
        }
    }
}

impl<R: Real> Policy<R> {
    pub fn with_dim_cap(mut self, cap: usize) -> Self {
        self.dim_cap = cap;
        self
    }
}
