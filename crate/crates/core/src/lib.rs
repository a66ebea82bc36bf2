pub mod algebra;
pub mod arcs;
pub mod cli;
pub mod config;
pub mod error;
pub mod extension;
pub mod index;
pub mod multiplier;
pub mod oracle;

pub use error::{Error, Result};
