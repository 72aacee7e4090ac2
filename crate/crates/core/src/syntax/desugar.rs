//! Expansion of literal sugar into core expressions.
//!
//! * `n` becomes `#succ(... #succ(#zero()) ...)` with `n` calls to `#succ`.
//! * `[e1, ..., en]` becomes `#cons(e1, ... #cons(en, #empty()) ...)`.
//! * `{p1, ..., pn => e}` becomes `l := new; def #apply(=l, p1, ..., pn) { e }; l`
//!   for a fresh `l` that no source program can spell.
//! * `"text"` becomes the interned identity for `text`.

use std::rc::Rc;

use super::ast::{Expr, Method, Name, Param, Term};
use super::surface::{SurfaceExpr, SurfaceMethod};
use crate::identity::Identities;

/// Prefix of generated lambda names. `%` is not a legal source character.
pub const LAMBDA_PREFIX: &str = "%lambda";

pub const ZERO: &str = "zero";
pub const SUCC: &str = "succ";
pub const EMPTY: &str = "empty";
pub const CONS: &str = "cons";
pub const APPLY: &str = "apply";

pub struct Desugarer<'a> {
    identities: &'a mut Identities,
    next_lambda: usize,
}

impl<'a> Desugarer<'a> {
    pub fn new(identities: &'a mut Identities) -> Self {
        Desugarer {
            identities,
            next_lambda: 0,
        }
    }

    pub fn desugar(&mut self, expr: &SurfaceExpr) -> Expr {
        match expr {
            SurfaceExpr::Var(x, span) => Expr::Var(x.clone(), *span),
            SurfaceExpr::New(span) => Expr::New(*span),
            SurfaceExpr::Def(m) => Expr::Def(Rc::new(self.method(m))),
            SurfaceExpr::Call { name, args, span } => Expr::Call(
                name.clone(),
                args.iter().map(|a| self.desugar(a)).collect(),
                *span,
            ),
            SurfaceExpr::Seq(a, b) => Expr::seq(self.desugar(a), self.desugar(b)),
            SurfaceExpr::Let { name, bound, body } => {
                Expr::let_in(name.clone(), self.desugar(bound), self.desugar(body))
            }
            SurfaceExpr::Number(n, span) => {
                let mut acc = Expr::call(ZERO, vec![], *span);
                for _ in 0..*n {
                    acc = Expr::call(SUCC, vec![acc], *span);
                }
                acc
            }
            SurfaceExpr::List(elems, span) => elems
                .iter()
                .rev()
                .fold(Expr::call(EMPTY, vec![], *span), |tail, head| {
                    Expr::call(CONS, vec![self.desugar(head), tail], *span)
                }),
            SurfaceExpr::Lambda { params, body, span } => {
                let fresh: Name = format!("{LAMBDA_PREFIX}{}", self.next_lambda).into();
                self.next_lambda += 1;
                let mut all_params = vec![Param::Exact(Term::Var(fresh.clone()))];
                all_params.extend(params.iter().cloned());
                let apply = Method {
                    name: APPLY.into(),
                    params: all_params,
                    constraints: vec![],
                    body: self.desugar(body),
                    span: *span,
                };
                Expr::let_in(
                    fresh.clone(),
                    Expr::New(*span),
                    Expr::seq(Expr::Def(Rc::new(apply)), Expr::Var(fresh, *span)),
                )
            }
            SurfaceExpr::Str(text, _) => Expr::Id(self.identities.intern(text)),
        }
    }

    fn method(&mut self, m: &SurfaceMethod) -> Method {
        Method {
            name: m.name.clone(),
            params: m.params.clone(),
            constraints: m.constraints.clone(),
            body: self.desugar(&m.body),
            span: m.span,
        }
    }
}

pub fn desugar(expr: &SurfaceExpr, identities: &mut Identities) -> Expr {
    Desugarer::new(identities).desugar(expr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::span::Span;
    use crate::syntax::{parse_source, span::FileId};

    fn core(src: &str) -> (Expr, Identities) {
        let mut ids = Identities::new();
        let surface = parse_source(src, FileId(1)).unwrap();
        (desugar(&surface, &mut ids), ids)
    }

    fn call(name: &str, args: Vec<Expr>) -> Expr {
        Expr::call(name, args, Span::default())
    }

    #[test]
    fn numerals_are_succ_chains() {
        assert_eq!(
            core("2").0,
            call(SUCC, vec![call(SUCC, vec![call(ZERO, vec![])])])
        );
        assert_eq!(core("0").0, call(ZERO, vec![]));
    }

    #[test]
    fn lists_are_cons_chains() {
        assert_eq!(core("[]").0, call(EMPTY, vec![]));
        assert_eq!(
            core("[0, 0]").0,
            call(
                CONS,
                vec![
                    call(ZERO, vec![]),
                    call(CONS, vec![call(ZERO, vec![]), call(EMPTY, vec![])])
                ]
            )
        );
    }

    #[test]
    fn lambdas_become_apply_methods_on_a_fresh_identity() {
        let (e, _) = core("{x => x}");
        let Expr::Let(l, bound, rest) = e else {
            panic!()
        };
        assert!(l.starts_with(LAMBDA_PREFIX));
        assert_eq!(*bound, Expr::New(Span::default()));
        let Expr::Seq(def, tail) = *rest else {
            panic!()
        };
        assert_eq!(*tail, Expr::Var(l.clone(), Span::default()));
        let Expr::Def(m) = *def else { panic!() };
        assert_eq!(&*m.name, APPLY);
        assert_eq!(
            m.params,
            vec![
                Param::Exact(Term::Var(l.clone())),
                Param::Term(Term::Var("x".into()))
            ]
        );
        assert_eq!(m.body, Expr::Var("x".into(), Span::default()));
    }

    #[test]
    fn nested_lambdas_get_distinct_names() {
        let (e, _) = core("{x => {y => x}}");
        let Expr::Let(outer, _, rest) = e else {
            panic!()
        };
        let Expr::Seq(def, _) = *rest else { panic!() };
        let Expr::Def(m) = *def else { panic!() };
        let Expr::Let(inner, _, _) = &m.body else {
            panic!()
        };
        assert_ne!(outer, *inner);
    }

    #[test]
    fn string_literals_intern_at_desugar_time() {
        let (e, ids) = core("#f(\"a\", \"a\", \"b\")");
        let Expr::Call(_, args, _) = e else { panic!() };
        let a1 = args[0].as_id().unwrap();
        assert_eq!(args[1].as_id(), Some(a1));
        assert_ne!(args[2].as_id(), Some(a1));
        assert_eq!(ids.text(a1), Some("a"));
    }
}
