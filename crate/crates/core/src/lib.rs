//! Numerical laboratory for spacetime-extended classical and quantum mechanics.
//!
//! The crate builds discrete extended Hilbert spaces in which time slices are
//! tensor factors, constructs quantum action operators `e^{iS}` from cyclic
//! shifts and per-slice evolution, and verifies their correlators against
//! independent conventional quantum-mechanics oracles. Around that core sit a
//! Klein-Gordon mode engine with dynamical foliations, generalized
//! (two-vector) purifications, a classical lattice phase space with extended
//! Poisson brackets, and a gamma-matrix layer for the classical Dirac field.
//!
//! All numerical kernels are generic over the floating-point scalar through
//! [`scalar::Real`]; the concrete aliases below fix `f64` for everyday use.

pub mod classical;
pub mod correspondence;
pub mod dirac;
pub mod error;
pub mod extended;
pub mod kg;
pub mod linalg;
pub mod numeric;
pub mod purification;
pub mod random;
pub mod scalar;

pub use error::CoreError;
pub use numeric::Policy;
pub use scalar::{Real, C};

/// Complex scalar at working precision.
pub type C64 = num_complex::Complex<f64>;
/// Dense operator at working precision.
pub type Operator64 = linalg::Operator<f64>;
/// State vector at working precision.
pub type StateVector64 = linalg::StateVector<f64>;
/// Generalized (two-vector) state at working precision.
pub type GeneralizedState64 = linalg::GeneralizedState<f64>;
/// Extended-space descriptor at working precision.
pub type ExtendedSpace64 = extended::ExtendedSpace<f64>;
/// Discrete action operator at working precision.
pub type DiscreteAction64 = extended::DiscreteAction<f64>;
/// Foliation at working precision.
pub type Foliation64 = kg::Foliation<f64>;

/// Single-precision aliases; the kernels run unchanged, tolerances are the
/// caller's problem at this width.
pub type C32 = num_complex::Complex<f32>;
pub type Operator32 = linalg::Operator<f32>;
pub type StateVector32 = linalg::StateVector<f32>;
