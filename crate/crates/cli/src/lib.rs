//! Library surface of the command-line tool: the JSON input formats.

pub mod files;
