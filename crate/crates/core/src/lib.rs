pub mod cli;
pub mod error;
pub mod lifting;
pub mod pd_rings;
pub mod series;
pub mod witt;

pub use error::{Error, Result};
