//! Scalars, the auxiliary rational functions, parameter sets, partitions and
//! generic sampling.

pub mod aux;
pub mod partition;
pub mod sample;
pub mod scalar;
pub mod varset;

pub use aux::{aux_eval, prod_eval, Aux, EvalContext};
pub use partition::{combinations, feasible_sizes, index_partitions, multinomial, partitions, Partitions};
pub use sample::{is_generic_pair, sample_generic, sample_generic_with};
pub use scalar::{Field, Mode, Qi};
pub use varset::VarSet;
