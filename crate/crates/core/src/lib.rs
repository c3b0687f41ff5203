pub mod cone;
pub mod divisor;
pub mod egyptian;
pub mod error;
pub mod exactlin;
pub mod families;
pub mod fan;
pub mod fixtures;
pub mod par;

pub use error::{Error, Result};
