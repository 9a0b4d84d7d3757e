pub mod cayley;
pub mod ct;
pub mod error;
pub mod field;
pub mod graph;
pub mod laurent;
pub mod pipeline;
pub mod specialize;
pub mod spectral;
pub mod weyl;

pub use error::{Error, Result};
