//! Bethe vectors: labels, symbolic linear combinations and concrete construction.

mod combo;
mod construct;

pub use combo::{BetheLabel, LinearCombo, Term};
pub use construct::{bethe_recursive, bethe_sum_a, bethe_sum_b, expand_combo};
