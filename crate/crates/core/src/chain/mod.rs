//! The brute-force oracle: graded tensor spaces, the R-matrix and explicit
//! monodromy matrices of small inhomogeneous chains.

pub mod basis;
pub mod monodromy;
pub mod operator;
pub mod state;

pub use monodromy::{rtt_residual, transfer_commutator, vacuum_triangularity, ChainRep, SymOp, MAX_SITES};
pub use operator::{build_r, ybe_residual, GradedOperator};
pub use state::StateVector;
