//! Small-step evaluator.
//!
//! The machine keeps the evaluation context as an explicit frame stack, so
//! finding the next redex does not rescan the whole expression. A step fires
//! exactly one reduction rule (`seq`, `let`, `new`, `def` or `call`);
//! descending into a context is free. Plugging the focus back into the
//! frames ([`MachineState::control`]) gives the expression the rules would
//! be rewriting at that point.
//!
//! Stuck configurations (a variable or a `def` in value position) are
//! detected before the step bound is checked; rule failures (no applicable
//! method, constraint errors) after it.

use std::fmt;
use std::io::Write;
use std::rc::Rc;

use crate::engine::{Engine, Outcome, RunMode};
use crate::identity::{Identities, Identity};
use crate::syntax::pretty::{render, render_method_head};
use crate::syntax::{Expr, Method, Name, Span};

use super::dispatch::{dispatch, Dispatched, Limits};
use super::error::{ErrorKind, PendingCall, RuntimeError};
use super::store::{MethodStore, Native};
use super::subst::substitute_one;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Seq,
    Let,
    New,
    Def,
    Call,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Seq => "seq",
            Rule::Let => "let",
            Rule::New => "new",
            Rule::Def => "def",
            Rule::Call => "call",
        })
    }
}

/// Reported to the trace observer after every step.
#[derive(Clone, Debug)]
pub struct TraceEvent {
    pub step: u64,
    pub rule: Rule,
    pub redex: String,
    pub store_size: usize,
}

pub type Observer = Box<dyn FnMut(&TraceEvent)>;

#[derive(Clone, Debug)]
enum Focus {
    Eval(Expr),
    Return(Identity),
    Hole,
}

#[derive(Clone, Debug)]
enum Frame {
    /// `#name(done.., [], todo..)`; `todo` is stored reversed.
    Args {
        name: Name,
        span: Span,
        done: Vec<Identity>,
        todo: Vec<Expr>,
    },
    /// `[]; rest`
    SeqRest(Expr),
    /// `name := []; body`
    LetBody { name: Name, body: Expr },
}

/// Control plus step count. The store lives in the [`Machine`].
#[derive(Clone, Debug)]
pub struct MachineState {
    focus: Focus,
    stack: Vec<Frame>,
    steps: u64,
    mode: RunMode,
    finished: Option<Outcome>,
}

impl MachineState {
    pub fn new(program: Expr, mode: RunMode) -> Self {
        MachineState {
            focus: Focus::Eval(program),
            stack: Vec::new(),
            steps: 0,
            mode,
            finished: None,
        }
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// The final identity, if evaluation is finished.
    pub fn terminal(&self) -> Option<Identity> {
        match (&self.focus, self.stack.is_empty()) {
            (Focus::Return(i), true) | (Focus::Eval(Expr::Id(i)), true) => Some(*i),
            _ => None,
        }
    }

    /// The whole current expression, with the focus plugged into its context.
    pub fn control(&self) -> Expr {
        let mut cur = match &self.focus {
            Focus::Eval(e) => e.clone(),
            Focus::Return(i) => Expr::Id(*i),
            Focus::Hole => Expr::New(Span::default()),
        };
        for frame in self.stack.iter().rev() {
            cur = match frame {
                Frame::Args {
                    name,
                    span,
                    done,
                    todo,
                } => {
                    let mut args: Vec<Expr> = done.iter().map(|i| Expr::Id(*i)).collect();
                    args.push(cur);
                    args.extend(todo.iter().rev().cloned());
                    Expr::Call(name.clone(), args, *span)
                }
                Frame::SeqRest(rest) => Expr::seq(cur, rest.clone()),
                Frame::LetBody { name, body } => Expr::let_in(name.clone(), cur, body.clone()),
            };
        }
        cur
    }

    fn pending(&self) -> Vec<PendingCall> {
        self.stack
            .iter()
            .filter_map(|f| match f {
                Frame::Args {
                    name, span, done, ..
                } => Some(PendingCall {
                    name: name.clone(),
                    evaluated: done.clone(),
                    span: *span,
                }),
                _ => None,
            })
            .collect()
    }
}

enum Redex {
    Seq(Identity),
    Let(Identity),
    New(Span),
    Def(Rc<Method>),
    DefFinal(Rc<Method>),
    Call {
        name: Name,
        args: Vec<Identity>,
        span: Span,
    },
}

/// Result of [`Machine::step`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Progress {
    Stepped(Rule),
    Done(Outcome),
}

pub struct Machine {
    identities: Identities,
    store: MethodStore,
    limits: Limits,
    output: Box<dyn Write>,
    observer: Option<Observer>,
    print_log: Vec<Identity>,
    last_steps: u64,
}

impl Machine {
    /// A machine whose store holds only the natives.
    pub fn new(identities: Identities, limits: Limits) -> Self {
        Machine {
            identities,
            store: MethodStore::with_natives(),
            limits,
            output: Box::new(std::io::stdout()),
            observer: None,
            print_log: Vec::new(),
            last_steps: 0,
        }
    }

    pub fn set_output(&mut self, output: Box<dyn Write>) {
        self.output = output;
    }

    pub fn set_observer(&mut self, observer: Option<Observer>) {
        self.observer = observer;
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn store(&self) -> &MethodStore {
        &self.store
    }

    /// Iterates [`Machine::step`] to completion.
    pub fn run_state(&mut self, state: &mut MachineState) -> Result<Outcome, RuntimeError> {
        let result = loop {
            match self.step(state) {
                Ok(Progress::Stepped(_)) => continue,
                Ok(Progress::Done(outcome)) => break Ok(outcome),
                Err(e) => break Err(e),
            }
        };
        self.last_steps = state.steps;
        result
    }

    /// Evaluates a whole program to its final identity.
    pub fn evaluate(&mut self, program: &Expr) -> Result<Identity, RuntimeError> {
        match self.run(program, RunMode::Program)? {
            Outcome::Value(i) => Ok(i),
            Outcome::Defined { .. } => unreachable!("program mode never ends in a def"),
        }
    }

    /// Fires the next reduction rule, or reports that evaluation finished.
    pub fn step(&mut self, state: &mut MachineState) -> Result<Progress, RuntimeError> {
        let redex = match self.refocus(state) {
            Ok(Ok(redex)) => redex,
            Ok(Err(outcome)) => return Ok(Progress::Done(outcome)),
            Err(e) => return Err(self.located(e, state)),
        };
        if state.steps >= self.limits.max_steps {
            let span = self.redex_span(&redex);
            let err = RuntimeError::new(
                ErrorKind::StepLimitExceeded {
                    limit: self.limits.max_steps,
                },
                span,
            );
            return Err(self.located(err, state));
        }
        let description = self
            .observer
            .is_some()
            .then(|| self.describe(&redex, state));
        let rule = match self.fire(redex, state) {
            Ok(rule) => rule,
            Err(e) => return Err(self.located(e, state)),
        };
        state.steps += 1;
        if let (Some(observer), Some(redex)) = (self.observer.as_mut(), description) {
            observer(&TraceEvent {
                step: state.steps,
                rule,
                redex,
                store_size: self.store.len(),
            });
        }
        Ok(Progress::Stepped(rule))
    }

    fn located(&self, mut err: RuntimeError, state: &MachineState) -> RuntimeError {
        if err.span.is_none() {
            err.span = state.stack.iter().rev().find_map(|f| match f {
                Frame::Args { span, .. } => Some(*span),
                _ => None,
            });
        }
        err.pending = state.pending();
        err
    }

    /// Descends to the next redex without firing anything. `Ok(Err(_))`
    /// means evaluation is complete.
    fn refocus(
        &mut self,
        state: &mut MachineState,
    ) -> Result<Result<Redex, Outcome>, RuntimeError> {
        if let Some(outcome) = &state.finished {
            return Ok(Err(outcome.clone()));
        }
        loop {
            match std::mem::replace(&mut state.focus, Focus::Hole) {
                Focus::Hole => unreachable!("focus taken twice"),
                Focus::Eval(expr) => match expr {
                    Expr::Id(i) => state.focus = Focus::Return(i),
                    Expr::Var(name, span) => {
                        state.focus = Focus::Eval(Expr::Var(name.clone(), span));
                        return Err(RuntimeError::new(
                            ErrorKind::UnboundVariable { name },
                            Some(span),
                        ));
                    }
                    Expr::New(span) => {
                        state.focus = Focus::Eval(Expr::New(span));
                        return Ok(Ok(Redex::New(span)));
                    }
                    Expr::Def(m) => {
                        state.focus = Focus::Eval(Expr::Def(m.clone()));
                        return match state.stack.last() {
                            Some(Frame::SeqRest(_)) => Ok(Ok(Redex::Def(m))),
                            None if state.mode == RunMode::Statement => Ok(Ok(Redex::DefFinal(m))),
                            _ => Err(RuntimeError::new(ErrorKind::DefTerminal, Some(m.span))),
                        };
                    }
                    Expr::Seq(a, b) => {
                        state.stack.push(Frame::SeqRest(*b));
                        state.focus = Focus::Eval(*a);
                    }
                    Expr::Let(name, bound, body) => {
                        state.stack.push(Frame::LetBody { name, body: *body });
                        state.focus = Focus::Eval(*bound);
                    }
                    Expr::Call(name, mut args, span) => {
                        args.reverse();
                        state.stack.push(Frame::Args {
                            name,
                            span,
                            done: Vec::new(),
                            todo: args,
                        });
                        if let Some(redex) = Self::next_arg(state) {
                            return Ok(Ok(redex));
                        }
                    }
                },
                Focus::Return(i) => match state.stack.last_mut() {
                    None => {
                        state.focus = Focus::Return(i);
                        return Ok(Err(Outcome::Value(i)));
                    }
                    Some(Frame::Args { done, .. }) => {
                        done.push(i);
                        if let Some(redex) = Self::next_arg(state) {
                            return Ok(Ok(redex));
                        }
                    }
                    Some(Frame::SeqRest(_)) => {
                        state.focus = Focus::Return(i);
                        return Ok(Ok(Redex::Seq(i)));
                    }
                    Some(Frame::LetBody { .. }) => {
                        state.focus = Focus::Return(i);
                        return Ok(Ok(Redex::Let(i)));
                    }
                },
            }
        }
    }

    /// Moves the focus to the next unevaluated argument of the innermost
    /// call, or pops the call and reports it as the redex once every
    /// argument is an identity.
    fn next_arg(state: &mut MachineState) -> Option<Redex> {
        let Some(Frame::Args { todo, .. }) = state.stack.last_mut() else {
            unreachable!("next_arg outside a call frame")
        };
        if let Some(e) = todo.pop() {
            state.focus = Focus::Eval(e);
            return None;
        }
        let Some(Frame::Args {
            name, span, done, ..
        }) = state.stack.pop()
        else {
            unreachable!()
        };
        let call = Expr::Call(
            name.clone(),
            done.iter().map(|i| Expr::Id(*i)).collect(),
            span,
        );
        state.focus = Focus::Eval(call);
        Some(Redex::Call {
            name,
            args: done,
            span,
        })
    }

    fn redex_span(&self, redex: &Redex) -> Option<Span> {
        match redex {
            Redex::New(span) => Some(*span),
            Redex::Def(m) | Redex::DefFinal(m) => Some(m.span),
            Redex::Call { span, .. } => Some(*span),
            Redex::Seq(_) | Redex::Let(_) => None,
        }
    }

    fn describe(&self, redex: &Redex, state: &MachineState) -> String {
        let ids = &self.identities;
        let id = |i: Identity| ids.render(i);
        match redex {
            Redex::Seq(i) => format!("{}; ...", id(*i)),
            Redex::Let(i) => match state.stack.last() {
                Some(Frame::LetBody { name, .. }) => format!("{name} := {}; ...", id(*i)),
                _ => String::new(),
            },
            Redex::New(_) => "new".to_string(),
            Redex::Def(m) | Redex::DefFinal(m) => format!("def {}", render_method_head(m, &id)),
            Redex::Call { name, args, .. } => {
                let args: Vec<String> = args.iter().map(|i| id(*i)).collect();
                format!("#{name}({})", args.join(", "))
            }
        }
    }

    fn fire(&mut self, redex: Redex, state: &mut MachineState) -> Result<Rule, RuntimeError> {
        match redex {
            Redex::Seq(_) => {
                let Some(Frame::SeqRest(rest)) = state.stack.pop() else {
                    unreachable!()
                };
                state.focus = Focus::Eval(rest);
                Ok(Rule::Seq)
            }
            Redex::Let(i) => {
                let Some(Frame::LetBody { name, body }) = state.stack.pop() else {
                    unreachable!()
                };
                state.focus = Focus::Eval(substitute_one(&body, &name, i));
                Ok(Rule::Let)
            }
            Redex::New(_) => {
                let label = match state.stack.last() {
                    Some(Frame::LetBody { name, .. }) => Some(name.clone()),
                    _ => None,
                };
                state.focus = Focus::Return(self.identities.fresh(label));
                Ok(Rule::New)
            }
            Redex::Def(m) => {
                let Some(Frame::SeqRest(rest)) = state.stack.pop() else {
                    unreachable!()
                };
                self.store.install(m);
                state.focus = Focus::Eval(rest);
                Ok(Rule::Def)
            }
            Redex::DefFinal(m) => {
                let outcome = Outcome::Defined {
                    name: m.name.clone(),
                    arity: m.arity(),
                };
                self.store.install(m);
                state.focus = Focus::Hole;
                state.stack.clear();
                state.finished = Some(outcome);
                Ok(Rule::Def)
            }
            Redex::Call { name, args, span } => {
                let result =
                    dispatch(&self.store, &name, &args, &self.limits).map_err(|mut e| {
                        e.span.get_or_insert(span);
                        e
                    })?;
                state.focus = match result {
                    Dispatched::Body(body) => Focus::Eval(body),
                    Dispatched::Native(Native::Print) => Focus::Return(self.print(args[0])),
                };
                Ok(Rule::Call)
            }
        }
    }

    fn print(&mut self, arg: Identity) -> Identity {
        let line = match self.identities.text(arg) {
            Some(text) => text.to_string(),
            None => self.identities.render(arg),
        };
        // output errors do not change the result of #print
        let _ = writeln!(self.output, "{line}");
        let _ = self.output.flush();
        self.print_log.push(arg);
        arg
    }

    pub fn render_expr(&self, e: &Expr) -> String {
        render(e, &|i| self.identities.render(i))
    }
}

impl Engine for Machine {
    fn identities(&self) -> &Identities {
        &self.identities
    }

    fn identities_mut(&mut self) -> &mut Identities {
        &mut self.identities
    }

    fn run(&mut self, program: &Expr, mode: RunMode) -> Result<Outcome, RuntimeError> {
        let mut state = MachineState::new(program.clone(), mode);
        self.run_state(&mut state)
    }

    fn has_method(&self, name: &str, arity: usize) -> bool {
        self.store.contains_shape(name, arity)
    }

    fn signatures_with(&self, render: &dyn Fn(Identity) -> String) -> Vec<String> {
        self.store.signatures(render)
    }

    fn store_size(&self) -> usize {
        self.store.len()
    }

    fn last_steps(&self) -> u64 {
        self.last_steps
    }

    fn print_log(&self) -> &[Identity] {
        &self.print_log
    }
}

#[cfg(test)]
mod tests {
    use std::cell::RefCell;

    use super::*;
    use crate::syntax::{compile, FileId};

    fn machine() -> Machine {
        let mut m = Machine::new(Identities::new(), Limits::default());
        m.set_output(Box::new(super::super::SharedBuffer::new()));
        m
    }

    fn program(m: &mut Machine, src: &str) -> Expr {
        compile(src, FileId(1), m.identities_mut()).unwrap()
    }

    fn run(m: &mut Machine, src: &str) -> Result<Identity, RuntimeError> {
        let e = program(m, src);
        m.evaluate(&e)
    }

    fn rules(m: &mut Machine, src: &str) -> Vec<Rule> {
        let seen = Rc::new(RefCell::new(Vec::new()));
        let sink = seen.clone();
        m.set_observer(Some(Box::new(move |ev: &TraceEvent| {
            sink.borrow_mut().push(ev.rule)
        })));
        run(m, src).unwrap();
        m.set_observer(None);
        let out = seen.borrow().clone();
        out
    }

    #[test]
    fn let_binds_a_fresh_identity() {
        let mut m = machine();
        assert_eq!(rules(&mut m, "x := new; x"), vec![Rule::New, Rule::Let]);
        assert_eq!(m.last_steps(), 2);
    }

    #[test]
    fn def_then_call_uses_the_body() {
        let mut m = machine();
        let r = rules(&mut m, "bar := new; def #foo(=bar) { bar }; #foo(bar)");
        assert_eq!(r, vec![Rule::New, Rule::Let, Rule::Def, Rule::Call]);
        let bar = run(&mut m, "bar := new; bar").unwrap();
        assert_eq!(m.identities().label(bar), Some("bar"));
    }

    #[test]
    fn most_recent_applicable_method_wins() {
        let mut m = machine();
        let id = run(
            &mut m,
            "a := new; b := new; def #f(x) { a }; def #f(x) { b }; #f(a)",
        )
        .unwrap();
        assert_eq!(m.identities().label(id), Some("b"));
    }

    #[test]
    fn unbound_variables_are_stuck() {
        let mut m = machine();
        let err = run(&mut m, "new; y").unwrap_err();
        assert_eq!(err.variant(), "UnboundVariable");
        assert!(err.span.is_some());
    }

    #[test]
    fn a_def_in_value_position_is_stuck() {
        let mut m = machine();
        for src in [
            "def #f() { new }",
            "x := def #f() { new }; x",
            "#print(def #f() { new })",
        ] {
            let e = compile(src, FileId(1), m.identities_mut());
            if let Ok(e) = e {
                let err = m.evaluate(&e).unwrap_err();
                assert_eq!(err.variant(), "DefTerminal", "{src}");
            }
        }
    }

    #[test]
    fn statement_mode_installs_a_trailing_def() {
        let mut m = machine();
        let e = program(&mut m, "def #f(x) { x }");
        let out = m.run(&e, RunMode::Statement).unwrap();
        assert_eq!(
            out,
            Outcome::Defined {
                name: "f".into(),
                arity: 1
            }
        );
        assert!(m.has_method("f", 1));
    }

    #[test]
    fn the_step_limit_is_exact() {
        let mut m = Machine::new(
            Identities::new(),
            Limits {
                max_steps: 2,
                max_constraint_depth: 8,
            },
        );
        assert!(run(&mut m, "x := new; x").is_ok());
        let err = run(&mut m, "x := new; new; x").unwrap_err();
        assert_eq!(err.variant(), "StepLimitExceeded");
    }

    #[test]
    fn divergence_hits_the_step_limit() {
        let mut m = Machine::new(
            Identities::new(),
            Limits {
                max_steps: 1000,
                max_constraint_depth: 8,
            },
        );
        let err = run(&mut m, "def #loop(x) { #loop(x) }; #loop(new)").unwrap_err();
        assert_eq!(err.variant(), "StepLimitExceeded");
    }

    #[test]
    fn errors_name_the_pending_calls() {
        let mut m = machine();
        let err = run(&mut m, "def #f(x, y) { x }; #f(new, #g())").unwrap_err();
        assert_eq!(err.variant(), "NoApplicableMethod");
        assert_eq!(err.pending.len(), 1);
        assert_eq!(&*err.pending[0].name, "f");
        assert_eq!(err.pending[0].evaluated.len(), 1);
    }

    #[test]
    fn control_replays_the_rewriting_view() {
        let mut m = machine();
        let e = program(&mut m, "def #f(x) { x }; a := #f(new); #f(a)");
        let mut state = MachineState::new(e.clone(), RunMode::Program);
        assert_eq!(state.control(), e);
        let mut seen = Vec::new();
        while let Progress::Stepped(_) = m.step(&mut state).unwrap() {
            seen.push(m.render_expr(&state.control()));
        }
        let a = state.terminal().unwrap();
        assert_eq!(seen.last().unwrap(), &m.identities().render(a));
        assert!(seen[0].starts_with("a := #f(new)"), "{}", seen[0]);
        assert_eq!(seen.len(), 5);
    }

    #[test]
    fn print_passes_its_argument_through() {
        let mut m = machine();
        let id = run(&mut m, "x := new; #print(x)").unwrap();
        assert_eq!(m.print_log(), &[id]);
    }
}
