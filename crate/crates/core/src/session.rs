//! Incremental evaluation: the REPL and the corpus runner feed programs one
//! statement at a time into a persistent engine.
//!
//! Methods persist because the store does. Variables need help: a
//! top-level `x := e` normally scopes only over the statements after it in
//! the same program, so the session remembers `x`'s identity and
//! substitutes it into every later statement.

use std::fmt;

use thiserror::Error;

use crate::engine::{Engine, Outcome, RunMode};
use crate::identity::Identity;
use crate::prelude::{self, PreludeError};
use crate::runtime::subst::{substitute, Binding};
use crate::runtime::RuntimeError;
use crate::syntax::desugar::Desugarer;
use crate::syntax::{
    parse_statements, tokenize, Expr, FileId, Name, SourceMap, Statement, SyntaxError,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StatementResult {
    Value(Identity),
    Defined { name: Name, arity: usize },
    Bound { name: Name, value: Identity },
}

#[derive(Debug, Error)]
pub enum SessionError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Runtime(#[from] RuntimeError),
}

pub struct Session<E: Engine> {
    engine: E,
    sources: SourceMap,
    bindings: Vec<Binding>,
    inputs: usize,
}

impl<E: Engine> Session<E> {
    pub fn new(engine: E) -> Self {
        Session {
            engine,
            sources: SourceMap::new(),
            bindings: Vec::new(),
            inputs: 0,
        }
    }

    pub fn load_prelude(&mut self) -> Result<bool, PreludeError> {
        prelude::load(&mut self.engine)
    }

    pub fn engine(&self) -> &E {
        &self.engine
    }

    pub fn engine_mut(&mut self) -> &mut E {
        &mut self.engine
    }

    pub fn into_engine(self) -> E {
        self.engine
    }

    pub fn sources(&self) -> &SourceMap {
        &self.sources
    }

    /// Session-level variables, oldest first.
    pub fn bindings(&self) -> &[Binding] {
        &self.bindings
    }

    pub fn lookup(&self, name: &str) -> Option<Identity> {
        self.bindings
            .iter()
            .rev()
            .find(|(n, _)| &**n == name)
            .map(|(_, i)| *i)
    }

    pub fn render(&self, id: Identity) -> String {
        self.engine.identities().render(id)
    }

    pub fn report(&self, err: &SessionError) -> String {
        match err {
            SessionError::Syntax(e) => {
                format!("error[syntax]: {e}\n  at {}", self.sources.locate(e.span()))
            }
            SessionError::Runtime(e) => e
                .report(self.engine.identities(), &self.sources)
                .to_string(),
        }
    }

    fn next_name(&mut self, name: Option<&str>) -> String {
        self.inputs += 1;
        match name {
            Some(n) => n.to_string(),
            None => format!("<input {}>", self.inputs),
        }
    }

    /// Registers `text` and splits it into top-level statements.
    pub fn parse(&mut self, name: Option<&str>, text: &str) -> Result<Vec<Statement>, SyntaxError> {
        let name = self.next_name(name);
        let file = self.sources.add(name, text);
        parse_statements(&tokenize(text, file)?)
    }

    fn lower(&mut self, surface: &crate::syntax::SurfaceExpr) -> Expr {
        let expr = Desugarer::new(self.engine.identities_mut()).desugar(surface);
        substitute(&expr, &self.bindings)
    }

    /// Runs one statement against the session.
    pub fn execute(&mut self, stmt: &Statement) -> Result<StatementResult, RuntimeError> {
        match stmt {
            Statement::Let { name, bound, span } => {
                let bound = self.lower(bound);
                let program = Expr::let_in(name.clone(), bound, Expr::Var(name.clone(), *span));
                match self.engine.run(&program, RunMode::Program)? {
                    Outcome::Value(value) => {
                        self.bindings.push((name.clone(), value));
                        Ok(StatementResult::Bound {
                            name: name.clone(),
                            value,
                        })
                    }
                    Outcome::Defined { .. } => unreachable!("program mode never ends in a def"),
                }
            }
            Statement::Expr(e) => {
                let program = self.lower(e);
                Ok(match self.engine.run(&program, RunMode::Statement)? {
                    Outcome::Value(i) => StatementResult::Value(i),
                    Outcome::Defined { name, arity } => StatementResult::Defined { name, arity },
                })
            }
        }
    }

    /// Runs every statement of one input, stopping at the first error.
    pub fn submit(&mut self, text: &str) -> (Vec<StatementResult>, Option<SessionError>) {
        let stmts = match self.parse(None, text) {
            Ok(s) => s,
            Err(e) => return (Vec::new(), Some(e.into())),
        };
        let mut results = Vec::new();
        for stmt in &stmts {
            match self.execute(stmt) {
                Ok(r) => results.push(r),
                Err(e) => return (results, Some(e.into())),
            }
        }
        (results, None)
    }

    /// Compiles a whole program (lets scope over the rest of it only).
    pub fn compile_program(&mut self, name: Option<&str>, text: &str) -> Result<Expr, SyntaxError> {
        let stmts = self.parse(name, text)?;
        let surface = crate::syntax::fold_statements(stmts)?;
        Ok(self.lower(&surface))
    }

    /// Evaluates a whole program to an identity.
    pub fn run_program(
        &mut self,
        name: Option<&str>,
        text: &str,
    ) -> Result<Identity, SessionError> {
        let program = self.compile_program(name, text)?;
        match self.engine.run(&program, RunMode::Program)? {
            Outcome::Value(i) => Ok(i),
            Outcome::Defined { .. } => unreachable!("program mode never ends in a def"),
        }
    }
}

impl fmt::Display for StatementResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatementResult::Value(i) => write!(f, "{i}"),
            StatementResult::Defined { name, arity } => write!(f, "defined #{name}/{arity}"),
            StatementResult::Bound { name, value } => write!(f, "{name} = {value}"),
        }
    }
}

/// File id of the most recently parsed input (for tests that inspect spans).
pub fn last_file<E: Engine>(session: &Session<E>) -> FileId {
    FileId(session.inputs as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identity::Identities;
    use crate::runtime::{Limits, Machine, SharedBuffer};

    fn session(prelude: bool) -> Session<Machine> {
        let mut m = Machine::new(Identities::new(), Limits::default());
        m.set_output(Box::new(SharedBuffer::new()));
        let mut s = Session::new(m);
        if prelude {
            s.load_prelude().unwrap();
        }
        s
    }

    #[test]
    fn lets_persist_across_inputs() {
        let mut s = session(false);
        let (r, err) = s.submit("def #foo(n){n}");
        assert!(err.is_none());
        assert_eq!(
            r,
            vec![StatementResult::Defined {
                name: "foo".into(),
                arity: 1
            }]
        );
        let (r, err) = s.submit("bar := new; #foo(bar)");
        assert!(err.is_none());
        let bar = s.lookup("bar").unwrap();
        assert_eq!(r.last(), Some(&StatementResult::Value(bar)));
        assert_eq!(s.render(bar), format!("@{}:bar", bar.serial()));
    }

    #[test]
    fn a_statement_ending_in_a_def_installs_it() {
        let mut s = session(true);
        let (_, err) = s.submit(
            "point := new; def #get-x(=point) { 1 }; \
             def #set-x(that, x | #get-x(that)) { def #get-x(=that) { x } };",
        );
        assert!(err.is_none());
        let (r, err) = s.submit("#set-x(point, 3)");
        assert!(err.is_none(), "{err:?}");
        assert!(matches!(r[0], StatementResult::Defined { .. }));
        let three = s.run_program(None, "3").unwrap();
        let (r, _) = s.submit("#get-x(point)");
        assert_eq!(r, vec![StatementResult::Value(three)]);
    }

    #[test]
    fn errors_stop_the_input_but_keep_earlier_definitions() {
        let mut s = session(false);
        let (r, err) = s.submit("def #f() { new }; #nope(); def #g() { new }");
        assert_eq!(r.len(), 1);
        assert!(
            matches!(err, Some(SessionError::Runtime(ref e)) if e.variant() == "NoApplicableMethod")
        );
        assert!(s.engine().has_method("f", 0));
        assert!(!s.engine().has_method("g", 0));
    }

    #[test]
    fn whole_programs_still_need_a_final_value() {
        let mut s = session(false);
        let err = s.run_program(None, "def #f() { new };").unwrap_err();
        assert!(matches!(err, SessionError::Runtime(ref e) if e.variant() == "DefTerminal"));
    }

    #[test]
    fn reports_carry_locations() {
        let mut s = session(false);
        let (_, err) = s.submit("\n  #nope()");
        let text = s.report(&err.unwrap());
        assert!(text.contains("NoApplicableMethod"), "{text}");
        assert!(text.contains("<input 1>:2:3"), "{text}");
    }
}
