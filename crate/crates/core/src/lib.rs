pub mod cli;
pub mod cyclic;
pub mod error;
pub mod exactlin;
pub mod grobner;
pub mod hochschild;
pub mod logring;
pub mod monoidlat;

pub use error::{Error, Result};
