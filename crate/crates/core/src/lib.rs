pub mod bounds;
pub mod cli;
pub mod decomposition;
pub mod error;
pub mod generate;
pub mod linalg;
pub mod model;
pub mod simplex;
pub mod sweep;
pub mod warmstart;

pub use error::{Error, Result};
