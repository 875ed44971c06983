//! JSON documents and the `ringmat` command-line tool.

pub mod commands;
pub mod docs;
