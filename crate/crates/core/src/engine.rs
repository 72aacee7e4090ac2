//! The interface shared by evaluators, so sessions, the prelude loader and
//! the conformance tools can drive any of them.

use crate::identity::{Identities, Identity};
use crate::runtime::RuntimeError;
use crate::syntax::{Expr, Name};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunMode {
    /// The expression must reduce to an identity; a final `def` is stuck.
    Program,
    /// One statement of a longer sequence: a final `def` is installed as if
    /// more statements followed it.
    Statement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Value(Identity),
    Defined { name: Name, arity: usize },
}

pub trait Engine {
    fn identities(&self) -> &Identities;
    fn identities_mut(&mut self) -> &mut Identities;
    fn run(&mut self, program: &Expr, mode: RunMode) -> Result<Outcome, RuntimeError>;
    fn has_method(&self, name: &str, arity: usize) -> bool;
    /// Installed method signatures, newest first.
    fn signatures_with(&self, render: &dyn Fn(Identity) -> String) -> Vec<String>;
    fn store_size(&self) -> usize;
    /// Steps taken by the most recent [`Engine::run`].
    fn last_steps(&self) -> u64;
    /// Every identity passed to `#print`, in order.
    fn print_log(&self) -> &[Identity];

    fn signatures(&self) -> Vec<String> {
        let ids = self.identities();
        self.signatures_with(&|i| ids.render(i))
    }
}
