pub mod cli;
pub mod config;
pub mod coupling;
pub mod delta;
pub mod error;
pub mod groups;
pub mod report;
pub mod schedule;
pub mod tiling;

pub use error::{Error, Result};
