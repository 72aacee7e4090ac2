//! Applicability of methods to calls, constraint checking and dispatch.
//!
//! A method is applicable to `#m(i1, ..., in)` when its name and arity match,
//! every parameter (after the parameter binders are substituted with the
//! arguments) accepts its argument, and every substituted constraint is
//! satisfied. A constraint `#c(j1, ..., jk)` is satisfied when some installed
//! method is applicable to that call; no body runs while checking it.
//!
//! Parameters are checked left to right, then constraints left to right; the
//! first failure decides. A variable that is still free when it is checked is
//! an [`ErrorKind::UnboundVariable`].

use crate::identity::Identity;
use crate::syntax::{Expr, Method, Name, Param, Term};

use super::error::{ErrorKind, RuntimeError};
use super::store::{Entry, MethodStore, Native};
use super::subst::{substitute, substitute_constraint, substitute_param, Binding};

/// Evaluation bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_steps: u64,
    pub max_constraint_depth: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_steps: 10_000_000,
            max_constraint_depth: 256,
        }
    }
}

/// Constraint checks in progress, outermost first.
#[derive(Clone, Debug)]
pub struct ConstraintGuard {
    in_progress: Vec<(Name, Vec<Identity>)>,
    max_depth: usize,
}

impl ConstraintGuard {
    pub fn new(max_depth: usize) -> Self {
        ConstraintGuard {
            in_progress: Vec::new(),
            max_depth,
        }
    }

    pub fn depth(&self) -> usize {
        self.in_progress.len()
    }
}

/// What a call reduces to.
#[derive(Clone, Debug, PartialEq)]
pub enum Dispatched {
    Body(Expr),
    Native(Native),
}

pub fn param_accepts(param: &Param, arg: Identity) -> Result<bool, ErrorKind> {
    match param {
        Param::Term(Term::Id(i)) | Param::Exact(Term::Id(i)) => Ok(*i == arg),
        Param::Term(Term::Var(x)) | Param::Exact(Term::Var(x)) => {
            Err(ErrorKind::UnboundVariable { name: x.clone() })
        }
    }
}

/// The parameter bindings under which `method` applies to `name(args)`, or
/// `None` if it does not apply.
pub fn applicable(
    store: &MethodStore,
    method: &Method,
    name: &str,
    args: &[Identity],
    guard: &mut ConstraintGuard,
) -> Result<Option<Vec<Binding>>, RuntimeError> {
    if &*method.name != name || method.arity() != args.len() {
        return Ok(None);
    }
    let binding: Vec<Binding> = method
        .params
        .iter()
        .zip(args)
        .filter_map(|(p, a)| p.binder().map(|x| (x.clone(), *a)))
        .collect();
    let fail = |kind| RuntimeError::new(kind, Some(method.span));
    for (p, a) in method.params.iter().zip(args) {
        if !param_accepts(&substitute_param(p, &binding), *a).map_err(fail)? {
            return Ok(None);
        }
    }
    for c in &method.constraints {
        let c = substitute_constraint(c, &binding);
        let ids = c
            .args
            .iter()
            .map(|t| match t {
                Term::Id(i) => Ok(*i),
                Term::Var(x) => Err(fail(ErrorKind::UnboundVariable { name: x.clone() })),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if !constraint_satisfied(store, &c.name, &ids, guard)? {
            return Ok(None);
        }
    }
    Ok(Some(binding))
}

/// The body of `method` instantiated for `name(args)`, if it applies.
pub fn match_method(
    store: &MethodStore,
    method: &Method,
    name: &str,
    args: &[Identity],
    guard: &mut ConstraintGuard,
) -> Result<Option<Expr>, RuntimeError> {
    Ok(applicable(store, method, name, args, guard)?
        .map(|binding| substitute(&method.body, &binding)))
}

fn entry_applies(
    store: &MethodStore,
    entry: &Entry,
    name: &str,
    args: &[Identity],
    guard: &mut ConstraintGuard,
) -> Result<bool, RuntimeError> {
    match entry {
        Entry::Native(n) => Ok(n.name() == name && n.arity() == args.len()),
        Entry::Defined(m) => Ok(applicable(store, m, name, args, guard)?.is_some()),
    }
}

pub fn constraint_satisfied(
    store: &MethodStore,
    name: &Name,
    args: &[Identity],
    guard: &mut ConstraintGuard,
) -> Result<bool, RuntimeError> {
    if guard
        .in_progress
        .iter()
        .any(|(n, a)| n == name && a.as_slice() == args)
    {
        let mut trace = guard.in_progress.clone();
        trace.push((name.clone(), args.to_vec()));
        return Err(RuntimeError::new(
            ErrorKind::ConstraintCycle { trace },
            None,
        ));
    }
    if guard.in_progress.len() >= guard.max_depth {
        return Err(RuntimeError::new(
            ErrorKind::ConstraintDepthExceeded {
                limit: guard.max_depth,
            },
            None,
        ));
    }
    guard.in_progress.push((name.clone(), args.to_vec()));
    let mut result = Ok(false);
    for entry in store.candidates(name, args.len()) {
        match entry_applies(store, entry, name, args, guard) {
            Ok(false) => continue,
            other => {
                result = other;
                break;
            }
        }
    }
    guard.in_progress.pop();
    result
}

/// Selects the most recently installed applicable method.
pub fn dispatch(
    store: &MethodStore,
    name: &Name,
    args: &[Identity],
    limits: &Limits,
) -> Result<Dispatched, RuntimeError> {
    let mut guard = ConstraintGuard::new(limits.max_constraint_depth);
    for entry in store.candidates(name, args.len()) {
        match entry {
            Entry::Native(n) => return Ok(Dispatched::Native(*n)),
            Entry::Defined(m) => {
                if let Some(body) = match_method(store, m, name, args, &mut guard)? {
                    return Ok(Dispatched::Body(body));
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
