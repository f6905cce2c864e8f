pub mod cli;
pub mod constants;
pub mod error;
pub mod exact;
pub mod kernels;
pub mod precision;
pub mod quadrature;
pub mod reconstruct;

pub use error::{Error, Result};
