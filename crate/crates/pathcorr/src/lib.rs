//! File formats, figure tables and the `pathcorr` command-line tool built on
//! `pathcorr-core`.

pub mod cli;
pub mod error;
pub mod figures;
pub mod io;

pub use error::CliError;
