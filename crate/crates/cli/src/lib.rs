//! Command-line front end: file format, commands and the fuzz driver.

pub mod commands;
pub mod format;
pub mod fuzz;
pub mod generate;
pub mod schema;
