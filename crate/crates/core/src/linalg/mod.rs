//! Dense complex linear algebra over factorized spaces: tensor products,
//! partial traces, matrix exponentials and eigendecompositions.

mod eig;
mod expm;
mod operator;
mod solve;
mod state;

pub use eig::{eig_general, eig_spectrum, eigh, EigOrder};
pub use expm::matrix_exp;
pub use operator::{pauli, tensor_product, MultiIndex, Operator};
pub use solve::lu_solve;
pub use state::{GeneralizedState, StateVector};
