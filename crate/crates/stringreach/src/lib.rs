//! File formats, scale sweeps and the command-line front end for
//! [`stringreach_core`].

pub mod cli;
mod error;
pub mod io;
pub mod strange;
pub mod sweep;

pub use error::CliError;
