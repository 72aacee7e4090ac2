//! Surface syntax tree, before literal sugar is expanded.

use super::ast::{Constraint, Name, Param};
use super::span::Span;

#[derive(Clone, Debug, PartialEq)]
pub enum SurfaceExpr {
    Var(Name, Span),
    New(Span),
    Def(Box<SurfaceMethod>),
    Call {
        name: Name,
        args: Vec<SurfaceExpr>,
        span: Span,
    },
    Seq(Box<SurfaceExpr>, Box<SurfaceExpr>),
    Let {
        name: Name,
        bound: Box<SurfaceExpr>,
        body: Box<SurfaceExpr>,
    },
    Number(u32, Span),
    List(Vec<SurfaceExpr>, Span),
    Lambda {
        params: Vec<Param>,
        body: Box<SurfaceExpr>,
        span: Span,
    },
    Str(String, Span),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceMethod {
    pub name: Name,
    pub params: Vec<Param>,
    pub constraints: Vec<Constraint>,
    pub body: SurfaceExpr,
    pub span: Span,
}

/// One `;`-separated element of a sequence.
#[derive(Clone, Debug, PartialEq)]
pub enum Statement {
    /// `x := e`, scoping over the statements that follow.
    Let {
        name: Name,
        bound: SurfaceExpr,
        span: Span,
    },
    Expr(SurfaceExpr),
}
