//! Exact computer algebra for GKZ and one-variable hypergeometric systems.

pub mod error;
pub mod gkz;
pub mod hodge;
pub mod hyper;
pub mod lattice;
pub mod ore;
pub mod rational;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
