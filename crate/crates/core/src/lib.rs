pub mod cli;
pub mod diagrams;
pub mod dsl;
pub mod error;
pub mod evolution;
pub mod groupoid;
pub mod scalar;
pub mod species;
pub mod stufftype;
pub mod weyl;

pub use error::{Error, Result};
