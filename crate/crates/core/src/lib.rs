pub mod error;
pub mod export;
pub mod geometry;
pub mod gfun;
pub mod montecarlo;
pub mod numeric;
pub mod partition;
pub mod quadrature;
pub mod random;
pub mod simplex;
pub mod tables;
pub mod volumes;

pub use error::{Error, Result};
