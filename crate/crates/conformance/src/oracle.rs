//! Reference evaluator: the reduction rules transcribed as directly as
//! possible.
//!
//! Each step searches the whole expression for the leftmost redex along the
//! evaluation context grammar, rewrites it, and rebuilds the expression.
//! The store is a plain list, newest method first, scanned linearly. The
//! substitution and matching code here is independent of the production
//! evaluator; only the expression and identity types are shared.

use std::io::Write;
use std::rc::Rc;

use mul_core::runtime::{ErrorKind, RuntimeError};
use mul_core::syntax::pretty::render_method_head;
use mul_core::syntax::{Constraint, Expr, Method, Name, Param, Span, Term};
use mul_core::{Engine, Identities, Identity, Limits, Outcome, RunMode};

#[derive(Clone, Debug)]
enum Installed {
    Print,
    Method(Rc<Method>),
}

pub struct Oracle {
    identities: Identities,
    /// Newest first; the native `#print` is the oldest entry.
    store: Vec<Installed>,
    limits: Limits,
    output: Box<dyn Write>,
    print_log: Vec<Identity>,
    steps: u64,
}

impl Oracle {
    pub fn new(identities: Identities, limits: Limits) -> Self {
        Oracle {
            identities,
            store: vec![Installed::Print],
            limits,
            output: Box::new(std::io::sink()),
            print_log: Vec::new(),
            steps: 0,
        }
    }

    pub fn set_output(&mut self, output: Box<dyn Write>) {
        self.output = output;
    }

    /// Performs one step on a non-value expression, counting it against the
    /// current run.
    pub fn step(&mut self, e: &mut Expr) -> Result<(), RuntimeError> {
        self.reduce(e, None)
    }

    /// Gate passed before every rule fires.
    fn budget(&self, span: Option<Span>) -> Result<(), RuntimeError> {
        if self.steps >= self.limits.max_steps {
            return Err(RuntimeError::new(
                ErrorKind::StepLimitExceeded {
                    limit: self.limits.max_steps,
                },
                span,
            ));
        }
        Ok(())
    }

    /// Rewrites the leftmost redex of `e` in place. `label` is the let-name
    /// when `e` is directly the bound of a let.
    fn reduce(&mut self, e: &mut Expr, label: Option<&Name>) -> Result<(), RuntimeError> {
        let next = match e {
            Expr::Id(_) => unreachable!("identities do not reduce"),
            Expr::Var(x, span) => {
                return Err(RuntimeError::new(
                    ErrorKind::UnboundVariable { name: x.clone() },
                    Some(*span),
                ))
            }
            Expr::Def(m) => return Err(RuntimeError::new(ErrorKind::DefTerminal, Some(m.span))),

            // new: i fresh
            Expr::New(span) => {
                self.budget(Some(*span))?;
                Expr::Id(self.identities.fresh(label.cloned()))
            }

            Expr::Seq(first, rest) => match &**first {
                // seq: i; e -> e
                Expr::Id(_) => {
                    self.budget(None)?;
                    take(rest)
                }
                // def: M | def M'; e -> M', M | e
                Expr::Def(m) => {
                    self.budget(Some(m.span))?;
                    self.store.insert(0, Installed::Method(m.clone()));
                    take(rest)
                }
                // context: E; e
                _ => return self.reduce(first, None),
            },

            Expr::Let(x, bound, body) => match &**bound {
                // let: x := i; e -> e[x := i]
                Expr::Id(i) => {
                    self.budget(None)?;
                    subst(body, x, *i)
                }
                // context: x := E; e
                _ => return self.reduce(bound, Some(x)),
            },

            Expr::Call(name, args, span) => {
                match args.iter().position(|a| !matches!(a, Expr::Id(_))) {
                    // context: #m(i.., E, e..)
                    Some(k) => return self.reduce(&mut args[k], None),
                    // call
                    None => {
                        let ids: Vec<Identity> = args.iter().filter_map(Expr::as_id).collect();
                        self.budget(Some(*span))?;
                        let span = *span;
                        self.call(name, &ids).map_err(|mut e| {
                            e.span.get_or_insert(span);
                            e
                        })?
                    }
                }
            }
        };
        *e = next;
        self.steps += 1;
        Ok(())
    }

    /// The body of the first (newest) method applicable to `name(args)`.
    fn call(&mut self, name: &Name, args: &[Identity]) -> Result<Expr, RuntimeError> {
        let mut guard = Vec::new();
        for k in 0..self.store.len() {
            match self.store[k].clone() {
                Installed::Print => {
                    if &**name == "print" && args.len() == 1 {
                        return Ok(Expr::Id(self.print(args[0])));
                    }
                }
                Installed::Method(m) => {
                    if let Some(body) = self.applies(&m, name, args, &mut guard)? {
                        return Ok(body);
                    }
                }
            }
        }
        Err(RuntimeError::new(
            ErrorKind::NoApplicableMethod {
                name: name.clone(),
                args: args.to_vec(),
            },
            None,
        ))
    }

    /// `M |- m(p.. | c..) {e} ~ m(i..) -> e[p := i]..`
    fn applies(
        &self,
        m: &Method,
        name: &Name,
        args: &[Identity],
        guard: &mut Vec<(Name, Vec<Identity>)>,
    ) -> Result<Option<Expr>, RuntimeError> {
        if m.name != *name || m.params.len() != args.len() {
            return Ok(None);
        }
        let mut params = m.params.clone();
        let mut constraints = m.constraints.clone();
        for (p, &i) in m.params.iter().zip(args) {
            // e[=t := i] = e
            if let Param::Term(Term::Var(x)) = p {
                params = params.iter().map(|q| subst_param(q, x, i)).collect();
                constraints = constraints
                    .iter()
                    .map(|c| subst_constraint(c, x, i))
                    .collect();
            }
        }
        let stuck = |x: &Name| {
            RuntimeError::new(ErrorKind::UnboundVariable { name: x.clone() }, Some(m.span))
        };
        // p ~ i  and  =i ~ i
        for (p, &i) in params.iter().zip(args) {
            let (Param::Term(t) | Param::Exact(t)) = p;
            match t {
                Term::Id(j) if *j == i => {}
                Term::Id(_) => return Ok(None),
                Term::Var(x) => return Err(stuck(x)),
            }
        }
        for c in &constraints {
            let mut ids = Vec::new();
            for t in &c.args {
                match t {
                    Term::Id(j) => ids.push(*j),
                    Term::Var(x) => return Err(stuck(x)),
                }
            }
            if !self.satisfied(&c.name, &ids, guard)? {
                return Ok(None);
            }
        }
        // Substituting identities commutes with the checks, so the body is
        // only rewritten once the method is known to apply.
        let mut body = m.body.clone();
        for (p, &i) in m.params.iter().zip(args) {
            if let Param::Term(Term::Var(x)) = p {
                body = subst(&body, x, i);
            }
        }
        Ok(Some(body))
    }

    /// `M |- m(i..)`: some installed method is applicable.
    fn satisfied(
        &self,
        name: &Name,
        args: &[Identity],
        guard: &mut Vec<(Name, Vec<Identity>)>,
    ) -> Result<bool, RuntimeError> {
        let key = (name.clone(), args.to_vec());
        if guard.contains(&key) {
            let mut trace = guard.clone();
            trace.push(key);
            return Err(RuntimeError::new(
                ErrorKind::ConstraintCycle { trace },
                None,
            ));
        }
        if guard.len() >= self.limits.max_constraint_depth {
            return Err(RuntimeError::new(
                ErrorKind::ConstraintDepthExceeded {
                    limit: self.limits.max_constraint_depth,
                },
                None,
            ));
        }
        guard.push(key);
        let mut found = false;
        for entry in &self.store {
            let ok = match entry {
                Installed::Print => &**name == "print" && args.len() == 1,
                Installed::Method(m) => self.applies(m, name, args, guard)?.is_some(),
            };
            if ok {
                found = true;
                break;
            }
        }
        guard.pop();
        Ok(found)
    }

    fn print(&mut self, arg: Identity) -> Identity {
        let line = match self.identities.text(arg) {
            Some(text) => text.to_string(),
            None => self.identities.render(arg),
        };
        let _ = writeln!(self.output, "{line}");
        self.print_log.push(arg);
        arg
    }
}

impl Engine for Oracle {
    fn identities(&self) -> &Identities {
        &self.identities
    }

    fn identities_mut(&mut self) -> &mut Identities {
        &mut self.identities
    }

    fn run(&mut self, program: &Expr, mode: RunMode) -> Result<Outcome, RuntimeError> {
        self.steps = 0;
        let mut e = program.clone();
        loop {
            match e {
                Expr::Id(i) => return Ok(Outcome::Value(i)),
                Expr::Def(m) if mode == RunMode::Statement => {
                    self.budget(Some(m.span))?;
                    let outcome = Outcome::Defined {
                        name: m.name.clone(),
                        arity: m.params.len(),
                    };
                    self.store.insert(0, Installed::Method(m));
                    self.steps += 1;
                    return Ok(outcome);
                }
                _ => self.reduce(&mut e, None)?,
            }
        }
    }

    fn has_method(&self, name: &str, arity: usize) -> bool {
        self.store.iter().any(|entry| match entry {
            Installed::Print => name == "print" && arity == 1,
            Installed::Method(m) => &*m.name == name && m.params.len() == arity,
        })
    }

    fn signatures_with(&self, render: &dyn Fn(Identity) -> String) -> Vec<String> {
        self.store
            .iter()
            .map(|entry| match entry {
                Installed::Print => "#print(x0) <native>".to_string(),
                Installed::Method(m) => render_method_head(m, render),
            })
            .collect()
    }

    fn store_size(&self) -> usize {
        self.store.len()
    }

    fn last_steps(&self) -> u64 {
        self.steps
    }

    fn print_log(&self) -> &[Identity] {
        &self.print_log
    }
}

fn take(e: &mut Expr) -> Expr {
    std::mem::replace(e, Expr::New(Span::default()))
}

/// `e[x := i]`, capture-avoiding.
pub fn subst(e: &Expr, x: &Name, i: Identity) -> Expr {
    match e {
        Expr::Var(y, _) if y == x => Expr::Id(i),
        Expr::Var(..) | Expr::Id(_) | Expr::New(_) => e.clone(),
        Expr::Def(m) => {
            let binds = m
                .params
                .iter()
                .any(|p| matches!(p, Param::Term(Term::Var(y)) if y == x));
            if binds {
                e.clone()
            } else {
                Expr::Def(Rc::new(Method {
                    name: m.name.clone(),
                    params: m.params.iter().map(|p| subst_param(p, x, i)).collect(),
                    constraints: m
                        .constraints
                        .iter()
                        .map(|c| subst_constraint(c, x, i))
                        .collect(),
                    body: subst(&m.body, x, i),
                    span: m.span,
                }))
            }
        }
        Expr::Call(name, args, span) => Expr::Call(
            name.clone(),
            args.iter().map(|a| subst(a, x, i)).collect(),
            *span,
        ),
        Expr::Seq(a, b) => Expr::Seq(Box::new(subst(a, x, i)), Box::new(subst(b, x, i))),
        Expr::Let(y, a, b) => {
            let b = if y == x {
                (**b).clone()
            } else {
                subst(b, x, i)
            };
            Expr::Let(y.clone(), Box::new(subst(a, x, i)), Box::new(b))
        }
    }
}

fn subst_term(t: &Term, x: &Name, i: Identity) -> Term {
    match t {
        Term::Var(y) if y == x => Term::Id(i),
        _ => t.clone(),
    }
}

fn subst_param(p: &Param, x: &Name, i: Identity) -> Param {
    match p {
        Param::Term(t) => Param::Term(subst_term(t, x, i)),
        Param::Exact(t) => Param::Exact(subst_term(t, x, i)),
    }
}

fn subst_constraint(c: &Constraint, x: &Name, i: Identity) -> Constraint {
    Constraint {
        name: c.name.clone(),
        args: c.args.iter().map(|t| subst_term(t, x, i)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use mul_core::syntax::{compile, FileId};

    fn oracle() -> Oracle {
        Oracle::new(Identities::new(), Limits::default())
    }

    fn run(o: &mut Oracle, src: &str) -> Result<Identity, RuntimeError> {
        let e = compile(src, FileId(1), o.identities_mut()).unwrap();
        match o.run(&e, RunMode::Program)? {
            Outcome::Value(i) => Ok(i),
            Outcome::Defined { .. } => unreachable!(),
        }
    }

    #[test]
    fn foo_listing() {
        let mut o = oracle();
        let src = "def #foo(n) { n }; bar := new; baz := new; qux := new; \
                   def #foo(=bar) { baz }; def #foo(x | #foo2(x)) { #foo2(x) }; \
                   def #foo2(=bar) { bar }; #foo(bar)";
        let i = run(&mut o, src).unwrap();
        assert_eq!(o.identities().label(i), Some("bar"));
    }

    #[test]
    fn exact_repeat_rejects_distinct_arguments() {
        let mut o = oracle();
        let err = run(
            &mut o,
            "def #eq(x, =x) { x }; i := new; j := new; #eq(i, j)",
        )
        .unwrap_err();
        assert_eq!(err.variant(), "NoApplicableMethod");
        assert!(run(&mut o, "i := new; #eq(i, i)").is_ok());
    }

    #[test]
    fn self_constraints_are_cycles() {
        let mut o = oracle();
        let err = run(&mut o, "def #a(x | #a(x)) { x }; #a(new)").unwrap_err();
        assert_eq!(err.variant(), "ConstraintCycle");
    }

    #[test]
    fn stuck_forms() {
        let mut o = oracle();
        assert_eq!(run(&mut o, "y").unwrap_err().variant(), "UnboundVariable");
        assert_eq!(
            run(&mut o, "def #f() { new }").unwrap_err().variant(),
            "DefTerminal"
        );
        assert_eq!(
            run(&mut o, "#nope()").unwrap_err().variant(),
            "NoApplicableMethod"
        );
    }

    #[test]
    fn counts_one_step_per_rule() {
        let mut o = oracle();
        run(&mut o, "def #f() { new }; #f()").unwrap();
        assert_eq!(o.last_steps(), 3);
    }

    #[test]
    fn substitution_stops_at_binders() {
        let mut ids = Identities::new();
        let e = compile("x; x := new; x", FileId(1), &mut ids).unwrap();
        let i = ids.fresh(None);
        let out = subst(&e, &Name::from("x"), i);
        let Expr::Seq(first, rest) = out else {
            panic!()
        };
        assert_eq!(*first, Expr::Id(i));
        let Expr::Let(_, _, body) = *rest else {
            panic!()
        };
        assert!(matches!(*body, Expr::Var(..)));
    }
}
