pub mod arith;
pub mod cubic;
pub mod curve;
pub mod error;
pub mod json;
pub mod nf;
pub mod pipeline;

pub use error::{Error, Result};
