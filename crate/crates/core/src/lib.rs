//! A small object language whose only values are identities and whose only
//! abstraction is a global, most-recent-first table of multi-methods.

pub mod engine;
pub mod identity;
pub mod prelude;
pub mod runtime;
pub mod session;
pub mod syntax;

pub use engine::{Engine, Outcome, RunMode};
pub use identity::{Canonical, Identities, Identity};
pub use runtime::{Limits, Machine, RuntimeError};
pub use session::{Session, SessionError, StatementResult};
pub use syntax::{compile, SourceMap, SyntaxError};
