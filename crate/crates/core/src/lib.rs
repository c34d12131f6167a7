pub mod cli;
pub mod error;
pub mod gabor;
pub mod group;
pub mod lieb;
pub mod phase;
pub mod second_degree;
pub mod symplectic;
pub mod tf;

pub use error::{Error, Result};
