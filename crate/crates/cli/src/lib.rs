//! Command-line front end: graph loading, divergence CSV, ball caching and
//! the acceptance recipes.

pub mod commands;
pub mod io;
pub mod recipes;

pub use commands::{main_with, Cli, CliError};
