pub mod error;
pub mod linalg;

pub use error::{Error, Result};
pub mod cli;
pub mod exactcat;
pub mod hulls;
pub mod modcat;
pub mod partial;
pub mod suites;
pub mod workspace;
