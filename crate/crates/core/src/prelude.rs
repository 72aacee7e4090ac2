//! The standard prelude: unary naturals and lists with value equality, list
//! combinators, structural casts and the overloaded `#add`.
//!
//! The prelude is ordinary source evaluated into the store, so user code can
//! shadow any of it. `#print` is a native and is present even without it.

use thiserror::Error;

use crate::engine::{Engine, RunMode};
use crate::runtime::RuntimeError;
use crate::syntax::{compile, SyntaxError, PRELUDE_FILE};

pub const PRELUDE_SOURCE: &str = include_str!("prelude.mul");

pub const PRELUDE_VERSION: u32 = 1;

/// Marks a store that already holds the prelude.
pub const SENTINEL: &str = "prelude-loaded";

#[derive(Debug, Error)]
pub enum PreludeError {
    #[error("prelude does not parse: {0}")]
    Syntax(#[from] SyntaxError),
    #[error("prelude failed to evaluate: {0}")]
    Runtime(#[from] RuntimeError),
}

/// Installs the prelude. Returns `false` without doing anything when the
/// prelude is already present, so the numeral and list identities are never
/// created twice.
pub fn load<E: Engine + ?Sized>(engine: &mut E) -> Result<bool, PreludeError> {
    if engine.has_method(SENTINEL, 0) {
        return Ok(false);
    }
    let program = compile(PRELUDE_SOURCE, PRELUDE_FILE, engine.identities_mut())?;
    engine.run(&program, RunMode::Program)?;
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Outcome;
    use crate::identity::Identities;
    use crate::runtime::{Limits, Machine, SharedBuffer};
    use crate::syntax::FileId;

    fn machine() -> (Machine, SharedBuffer) {
        let mut m = Machine::new(Identities::new(), Limits::default());
        let buf = SharedBuffer::new();
        m.set_output(Box::new(buf.clone()));
        assert!(load(&mut m).unwrap());
        (m, buf)
    }

    fn eval(m: &mut Machine, src: &str) -> Result<crate::identity::Identity, RuntimeError> {
        let e = compile(src, FileId(1), m.identities_mut()).unwrap();
        m.evaluate(&e)
    }

    #[test]
    fn prelude_loads_and_keeps_the_index_consistent() {
        let (m, _) = machine();
        assert!(m.store().audit_index());
        assert!(m.has_method("zero", 0));
        assert!(m.has_method("zip-map", 3));
    }

    #[test]
    fn loading_twice_is_a_no_op() {
        let (mut m, _) = machine();
        let size = m.store_size();
        let two = eval(&mut m, "2").unwrap();
        assert!(!load(&mut m).unwrap());
        assert_eq!(m.store_size(), size + 2);
        assert_eq!(eval(&mut m, "2").unwrap(), two);
    }

    #[test]
    fn two_plus_two_is_four() {
        let (mut m, _) = machine();
        let sum = eval(&mut m, "#plus(2, 2)").unwrap();
        let four = eval(&mut m, "#succ(#succ(#succ(#succ(#zero()))))").unwrap();
        assert_eq!(sum, four);
    }

    #[test]
    fn as_natural_is_a_structural_cast() {
        let (mut m, _) = machine();
        let zero = eval(&mut m, "#zero()").unwrap();
        assert_eq!(eval(&mut m, "#as-natural(#zero())").unwrap(), zero);
        let err = eval(&mut m, "#as-natural(#empty())").unwrap_err();
        assert_eq!(err.variant(), "NoApplicableMethod");
    }

    #[test]
    fn map_applies_a_lambda() {
        let (mut m, _) = machine();
        let mapped = eval(&mut m, "#map({x => #succ(x)}, [1, 2])").unwrap();
        assert_eq!(eval(&mut m, "[2, 3]").unwrap(), mapped);
    }

    #[test]
    fn zip_map_stops_at_the_shorter_list() {
        let (mut m, _) = machine();
        let zipped = eval(
            &mut m,
            "#zip-map({a, b => #plus(a, b)}, [1, 2, 3], [10, 20])",
        )
        .unwrap();
        assert_eq!(eval(&mut m, "[11, 22]").unwrap(), zipped);
    }

    #[test]
    fn print_writes_string_text() {
        let (mut m, buf) = machine();
        let s = eval(&mut m, "#print(\"Hello World\")").unwrap();
        assert_eq!(buf.contents(), "Hello World\n");
        assert_eq!(m.identities().text(s), Some("Hello World"));
        assert_eq!(m.print_log(), &[s]);
    }

    #[test]
    fn print_renders_plain_identities() {
        let (mut m, buf) = machine();
        let i = eval(&mut m, "#print(new)").unwrap();
        assert_eq!(buf.contents(), format!("@{}\n", i.serial()));
        buf.clear();
        let j = eval(&mut m, "k := new; #print(k)").unwrap();
        assert_eq!(buf.contents(), format!("@{}:k\n", j.serial()));
    }

    #[test]
    fn interned_strings_never_come_from_new() {
        let (mut m, _) = machine();
        let e = compile("#print(\"a\")", FileId(1), m.identities_mut()).unwrap();
        let a = m.evaluate(&e).unwrap();
        let fresh = eval(&mut m, "new").unwrap();
        assert_ne!(a, fresh);
        assert_eq!(m.run(&e, RunMode::Program).unwrap(), Outcome::Value(a));
    }
}
