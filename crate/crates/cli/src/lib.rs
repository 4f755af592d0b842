//! Library surface of the command-line tool, exposed so integration tests can
//! drive the same code paths as `main`.

pub mod commands;
pub mod manifest;
