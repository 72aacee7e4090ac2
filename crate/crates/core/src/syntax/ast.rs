//! Core expression language: what the evaluators run after desugaring.

use std::rc::Rc;

use super::span::Span;
use crate::identity::Identity;

/// Variable and method names. Method names are stored without their `#`.
pub type Name = Rc<str>;

/// A ground term: a variable or an identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(Name),
    Id(Identity),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Param {
    /// `x` binds the argument; an identity here accepts only itself.
    Term(Term),
    /// `=t` accepts only the current value of `t`.
    Exact(Term),
}

impl Param {
    /// The variable this parameter binds, if it is a binder.
    pub fn binder(&self) -> Option<&Name> {
        match self {
            Param::Term(Term::Var(x)) => Some(x),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub name: Name,
    pub args: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Method {
    pub name: Name,
    pub params: Vec<Param>,
    pub constraints: Vec<Constraint>,
    pub body: Expr,
    pub span: Span,
}

impl Method {
    pub fn arity(&self) -> usize {
        self.params.len()
    }

    pub fn binds(&self, name: &str) -> bool {
        self.params
            .iter()
            .any(|p| p.binder().is_some_and(|b| &**b == name))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Var(Name, Span),
    Id(Identity),
    New(Span),
    Def(Rc<Method>),
    Call(Name, Vec<Expr>, Span),
    Seq(Box<Expr>, Box<Expr>),
    Let(Name, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn seq(first: Expr, rest: Expr) -> Expr {
        Expr::Seq(Box::new(first), Box::new(rest))
    }

    pub fn let_in(name: Name, bound: Expr, body: Expr) -> Expr {
        Expr::Let(name, Box::new(bound), Box::new(body))
    }

    pub fn call(name: &str, args: Vec<Expr>, span: Span) -> Expr {
        Expr::Call(Name::from(name), args, span)
    }

    pub fn as_id(&self) -> Option<Identity> {
        match self {
            Expr::Id(i) => Some(*i),
            _ => None,
        }
    }

    /// Best-effort source location of this expression.
    pub fn span(&self) -> Option<Span> {
        match self {
            Expr::Var(_, s) | Expr::New(s) | Expr::Call(_, _, s) => Some(*s),
            Expr::Def(m) => Some(m.span),
            Expr::Id(_) => None,
            Expr::Seq(a, b) => a.span().or_else(|| b.span()),
            Expr::Let(_, a, b) => a.span().or_else(|| b.span()),
        }
    }

    /// True if the expression contains no identity nodes.
    pub fn is_identity_free(&self) -> bool {
        fn term(t: &Term) -> bool {
            matches!(t, Term::Var(_))
        }
        match self {
            Expr::Var(..) | Expr::New(_) => true,
            Expr::Id(_) => false,
            Expr::Def(m) => {
                m.params.iter().all(|p| match p {
                    Param::Term(t) | Param::Exact(t) => term(t),
                }) && m.constraints.iter().all(|c| c.args.iter().all(term))
                    && m.body.is_identity_free()
            }
            Expr::Call(_, args, _) => args.iter().all(Expr::is_identity_free),
            Expr::Seq(a, b) | Expr::Let(_, a, b) => a.is_identity_free() && b.is_identity_free(),
        }
    }
}
