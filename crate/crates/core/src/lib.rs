pub mod action;
pub mod bethe;
pub mod chain;
pub mod error;
pub mod harness;
pub mod izergin;
pub mod kernel;
pub mod onshell;
pub mod weights;

pub use error::{Error, Result};
