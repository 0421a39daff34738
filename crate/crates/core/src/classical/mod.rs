//! Classical extended phase space on a 1+1 lattice: covariant Hamiltonian
//! density, Hamilton-equation evolution along the foliation, covariance
//! checks, and extended Poisson brackets of quadratic functionals.

mod brackets;
mod lattice;

pub use brackets::{extended_pb, QuadraticFunctional};
pub use lattice::{
    evolve_along_n, hamilton_rhs, hamiltonian_density, physical_constraint_residual,
    scalar_covariance_check, stress_contraction, Field2, LatticeField,
};
