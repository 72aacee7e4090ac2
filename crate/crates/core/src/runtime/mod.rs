//! The evaluator: method store, dispatch and the small-step machine.

pub mod dispatch;
pub mod error;
pub mod machine;
pub mod output;
pub mod store;
pub mod subst;

pub use dispatch::{
    applicable, constraint_satisfied, dispatch, match_method, param_accepts, ConstraintGuard,
    Dispatched, Limits,
};
pub use error::{ErrorKind, PendingCall, RuntimeError};
pub use machine::{Machine, MachineState, Observer, Progress, Rule, TraceEvent};
pub use output::SharedBuffer;
pub use store::{Entry, MethodStore, Native};
pub use subst::{substitute, substitute_one, Binding};
