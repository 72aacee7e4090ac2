//! Capture-avoiding substitution of identities for variables.
//!
//! Identities are closed, so capture can only happen through shadowing: a
//! `let` rebinding the name hides it in its body, and a method whose
//! parameters bind the name hides it in its parameters, constraints and body.

use std::rc::Rc;

use crate::identity::Identity;
use crate::syntax::{Constraint, Expr, Method, Name, Param, Term};

pub type Binding = (Name, Identity);

/// Replaces free occurrences of every bound name at once. When a name occurs
/// twice in `bindings`, the later entry wins.
pub fn substitute(expr: &Expr, bindings: &[Binding]) -> Expr {
    if bindings.is_empty() {
        return expr.clone();
    }
    match expr {
        Expr::Var(x, span) => match lookup(bindings, x) {
            Some(i) => Expr::Id(i),
            None => Expr::Var(x.clone(), *span),
        },
        Expr::Id(_) | Expr::New(_) => expr.clone(),
        Expr::Def(m) => Expr::Def(substitute_method(m, bindings)),
        Expr::Call(name, args, span) => Expr::Call(
            name.clone(),
            args.iter().map(|a| substitute(a, bindings)).collect(),
            *span,
        ),
        Expr::Seq(a, b) => Expr::seq(substitute(a, bindings), substitute(b, bindings)),
        Expr::Let(x, bound, body) => {
            let bound = substitute(bound, bindings);
            let body = if bindings.iter().any(|(n, _)| n == x) {
                let inner: Vec<Binding> =
                    bindings.iter().filter(|(n, _)| n != x).cloned().collect();
                substitute(body, &inner)
            } else {
                substitute(body, bindings)
            };
            Expr::let_in(x.clone(), bound, body)
        }
    }
}

pub fn substitute_one(expr: &Expr, name: &Name, id: Identity) -> Expr {
    substitute(expr, &[(name.clone(), id)])
}

/// Substitutes into a method under its own parameter binders.
pub fn substitute_method(m: &Rc<Method>, bindings: &[Binding]) -> Rc<Method> {
    let visible: Vec<Binding> = bindings
        .iter()
        .filter(|(n, _)| !m.binds(n))
        .cloned()
        .collect();
    if visible.is_empty() {
        return m.clone();
    }
    Rc::new(Method {
        name: m.name.clone(),
        params: m
            .params
            .iter()
            .map(|p| substitute_param(p, &visible))
            .collect(),
        constraints: m
            .constraints
            .iter()
            .map(|c| substitute_constraint(c, &visible))
            .collect(),
        body: substitute(&m.body, &visible),
        span: m.span,
    })
}

pub fn substitute_term(t: &Term, bindings: &[Binding]) -> Term {
    match t {
        Term::Var(x) => lookup(bindings, x).map_or_else(|| t.clone(), Term::Id),
        Term::Id(_) => t.clone(),
    }
}

pub fn substitute_param(p: &Param, bindings: &[Binding]) -> Param {
    match p {
        Param::Term(t) => Param::Term(substitute_term(t, bindings)),
        Param::Exact(t) => Param::Exact(substitute_term(t, bindings)),
    }
}

pub fn substitute_constraint(c: &Constraint, bindings: &[Binding]) -> Constraint {
    Constraint {
        name: c.name.clone(),
        args: c
            .args
            .iter()
            .map(|t| substitute_term(t, bindings))
            .collect(),
    }
}

fn lookup(bindings: &[Binding], x: &str) -> Option<Identity> {
    bindings
        .iter()
        .rev()
        .find(|(n, _)| &**n == x)
        .map(|(_, i)| *i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identity::Identities;
    use crate::syntax::pretty::render;
    use crate::syntax::{compile, FileId};

    fn setup(src: &str) -> (Expr, Identities) {
        let mut ids = Identities::new();
        let e = compile(src, FileId(1), &mut ids).unwrap();
        (e, ids)
    }

    fn show(e: &Expr) -> String {
        render(e, &|i| i.to_string())
    }

    #[test]
    fn variable_base_case() {
        let (e, mut ids) = setup("x");
        let i = ids.fresh(None);
        assert_eq!(substitute_one(&e, &"x".into(), i), Expr::Id(i));
    }

    #[test]
    fn other_variables_are_untouched() {
        let (e, mut ids) = setup("#f(x, y)");
        let i = ids.fresh(None);
        assert_eq!(show(&substitute_one(&e, &"x".into(), i)), "#f(@0, y)");
    }

    #[test]
    fn method_parameter_shadows() {
        let (e, mut ids) = setup("def #f(x) { x }; x");
        let i = ids.fresh(None);
        assert_eq!(
            show(&substitute_one(&e, &"x".into(), i)),
            "def #f(x) { x }; @0"
        );
    }

    #[test]
    fn shadowing_covers_exact_params_and_constraints_of_the_binding_method() {
        let (e, mut ids) = setup("def #eq(x, =x | #g(x)) { x }; x");
        let i = ids.fresh(None);
        assert_eq!(
            show(&substitute_one(&e, &"x".into(), i)),
            "def #eq(x, =x | #g(x)) { x }; @0"
        );
    }

    #[test]
    fn let_shadows_its_body_but_not_its_bound_expression() {
        let (e, mut ids) = setup("x := #f(x); x");
        let i = ids.fresh(None);
        assert_eq!(show(&substitute_one(&e, &"x".into(), i)), "x := #f(@0); x");
    }

    #[test]
    fn closures_capture_enclosing_bindings() {
        // body of #new-point after its let and parameters are substituted
        let (e, mut ids) = setup("def #get-x(=res) { x }; res");
        let res = ids.fresh(None);
        let x = ids.fresh(None);
        let out = substitute(&e, &[("res".into(), res), ("x".into(), x)]);
        assert_eq!(show(&out), "def #get-x(=@0) { @1 }; @0");
    }

    #[test]
    fn substitution_reaches_free_constraint_arguments() {
        let (e, mut ids) = setup("def #f(a | #g(a, b)) { b }; new");
        let b = ids.fresh(None);
        assert_eq!(
            show(&substitute_one(&e, &"b".into(), b)),
            "def #f(a | #g(a, @0)) { @0 }; new"
        );
    }

    #[test]
    fn nested_definitions_keep_inner_shadowing() {
        let (e, mut ids) = setup("def #f(y) { def #g(x) { #h(x, y) }; x }; new");
        let i = ids.fresh(None);
        assert_eq!(
            show(&substitute_one(&e, &"x".into(), i)),
            "def #f(y) { def #g(x) { #h(x, y) }; @0 }; new"
        );
    }

    #[test]
    fn later_binding_wins() {
        let (e, mut ids) = setup("x");
        let a = ids.fresh(None);
        let b = ids.fresh(None);
        assert_eq!(
            substitute(&e, &[("x".into(), a), ("x".into(), b)]),
            Expr::Id(b)
        );
    }
}
