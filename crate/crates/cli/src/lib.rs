//! Command-line front end: group spec parsing, JSON result documents and the
//! regression fixture runner.

pub mod commands;
pub mod document;
pub mod fixtures;
pub mod spec;
