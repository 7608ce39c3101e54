//! Workbench around the superiority-degree calculus: file formats,
//! elicitation sessions, reports, a session store and the HTTP service
//! behind the `sd` binary.

pub mod data;
pub mod error;
pub mod report;
pub mod service;
pub mod session;
pub mod store;

pub use data::{Data, DataKind, Format};
pub use error::{Error, ExitCode, Result};
pub use report::{analyze, Report};
pub use session::{load, load_str, suggest_next_pair, Event, Session};
pub use store::SessionStore;

/// Version tag of session files, reports and service responses.
pub const SCHEMA_VERSION: u32 = 1;
