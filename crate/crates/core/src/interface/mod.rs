//! Batch CLI commands and the local HTTP API used by the companion UI.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 algorithmic failure.

pub mod api;
mod cli;
mod manifest;

pub use api::{router, serve_api, AcceptedOutline, SessionStore};
pub use cli::{
    cmd_batch, cmd_trace, diagnostics_path, parse_point, parse_rect, BatchOptions, TraceOptions,
    EXIT_FAILURE, EXIT_OK, EXIT_USAGE,
};
pub use manifest::{read_manifest, ManifestError, ManifestRow};
