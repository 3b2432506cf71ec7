//! Batch front end: configuration, the check pipeline and file exports.

pub mod bundle;
mod cli;
pub mod commands;
mod config;
mod error;

pub use bundle::{CertificateBundle, Section, Verdict, SCHEMA};
pub use cli::run;
pub use config::{RunConfig, Tolerances};
pub use cosetcx;
pub use error::CliError;
