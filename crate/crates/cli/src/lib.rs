//! Library half of the `stabgap` binary, exposed for integration tests.

pub mod app;
pub mod error;
pub mod format;
pub mod grid;
pub mod modelfile;

pub use app::{run, Cli};
pub use error::CliError;
