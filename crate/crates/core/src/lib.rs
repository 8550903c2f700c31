pub mod analysis;
pub mod classify;
pub mod error;
pub mod examples;
pub mod kronecker;
pub mod linalg;
pub mod module;
pub mod quiver;
pub mod relative;
pub mod torsion;

pub use error::{Error, Result};
