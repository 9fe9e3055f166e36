pub mod cli;
pub mod dist;
pub mod error;
pub mod ica;
pub mod majorization;
pub mod measures;
pub mod quadrature;
mod serde_f64;
pub mod special;
pub mod transforms;

pub use error::{Error, Result};
