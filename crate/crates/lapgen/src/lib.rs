//! File formats, canonical JSON reports, parallel campaigns and the command
//! line for [`lapgen_core`].
//!
//! Files, JSON and command-line flags use 1-based node indices; the library
//! is 0-based.

pub mod campaign;
pub mod cli;
pub mod export;
pub mod format;
pub mod json;
pub mod manifest;
pub mod report;

pub use format::{parse_graph, write_graph, GraphFile, ParseError};
pub use manifest::RunManifest;
