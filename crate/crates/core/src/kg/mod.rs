pub mod foliation;
pub mod quad;
pub mod modes;
pub mod propagator;
pub mod matsubara;

pub use foliation::{BoostMatrix, Foliation};
pub use modes::PropagatorConfig;
