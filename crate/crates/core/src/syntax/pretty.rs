//! Renders core expressions back into surface-like syntax.
//!
//! Identity-free expressions in right-nested sequence form re-parse to the
//! same tree. Identities print through a caller-supplied renderer.

use std::fmt::Write;

use super::ast::{Constraint, Expr, Method, Param, Term};
use crate::identity::Identity;

pub fn render(expr: &Expr, id: &dyn Fn(Identity) -> String) -> String {
    let mut out = String::new();
    Printer { out: &mut out, id }.expr(expr);
    out
}

pub fn render_method_head(method: &Method, id: &dyn Fn(Identity) -> String) -> String {
    let mut out = String::new();
    Printer { out: &mut out, id }.head(method);
    out
}

struct Printer<'a> {
    out: &'a mut String,
    id: &'a dyn Fn(Identity) -> String,
}

impl Printer<'_> {
    fn expr(&mut self, e: &Expr) {
        match e {
            Expr::Var(x, _) => self.out.push_str(x),
            Expr::Id(i) => self.out.push_str(&(self.id)(*i)),
            Expr::New(_) => self.out.push_str("new"),
            Expr::Def(m) => {
                self.out.push_str("def ");
                self.head(m);
                self.out.push_str(" { ");
                self.expr(&m.body);
                self.out.push_str(" }");
            }
            Expr::Call(name, args, _) => {
                let _ = write!(self.out, "#{name}(");
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        self.out.push_str(", ");
                    }
                    self.nested(a);
                }
                self.out.push(')');
            }
            Expr::Seq(a, b) => {
                self.nested(a);
                self.out.push_str("; ");
                self.expr(b);
            }
            Expr::Let(x, a, b) => {
                let _ = write!(self.out, "{x} := ");
                self.nested(a);
                self.out.push_str("; ");
                self.expr(b);
            }
        }
    }

    /// Sequences and lets in a non-tail position have no surface form; they
    /// are printed in parentheses.
    fn nested(&mut self, e: &Expr) {
        if matches!(e, Expr::Seq(..) | Expr::Let(..)) {
            self.out.push('(');
            self.expr(e);
            self.out.push(')');
        } else {
            self.expr(e);
        }
    }

    fn term(&mut self, t: &Term) {
        match t {
            Term::Var(x) => self.out.push_str(x),
            Term::Id(i) => self.out.push_str(&(self.id)(*i)),
        }
    }

    fn head(&mut self, m: &Method) {
        let _ = write!(self.out, "#{}(", m.name);
        for (i, p) in m.params.iter().enumerate() {
            if i > 0 {
                self.out.push_str(", ");
            }
            match p {
                Param::Term(t) => self.term(t),
                Param::Exact(t) => {
                    self.out.push('=');
                    self.term(t);
                }
            }
        }
        if !m.constraints.is_empty() {
            self.out.push_str(" | ");
            for (i, c) in m.constraints.iter().enumerate() {
                if i > 0 {
                    self.out.push_str(", ");
                }
                self.constraint(c);
            }
        }
        self.out.push(')');
    }

    fn constraint(&mut self, c: &Constraint) {
        let _ = write!(self.out, "#{}(", c.name);
        for (i, t) in c.args.iter().enumerate() {
            if i > 0 {
                self.out.push_str(", ");
            }
            self.term(t);
        }
        self.out.push(')');
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identity::Identities;
    use crate::syntax::{desugar::desugar, parse_source, span::FileId};

    fn roundtrip(src: &str) -> String {
        let mut ids = Identities::new();
        let e = desugar(&parse_source(src, FileId(1)).unwrap(), &mut ids);
        render(&e, &|i| i.to_string())
    }

    #[test]
    fn renders_surface_like_syntax() {
        assert_eq!(
            roundtrip("def #set-x(that, x | #get-x(that)) { def #get-x(=that) { x } }; x := new; #set-x(x, x)"),
            "def #set-x(that, x | #get-x(that)) { def #get-x(=that) { x } }; x := new; #set-x(x, x)"
        );
    }

    #[test]
    fn identities_use_the_renderer() {
        assert_eq!(roundtrip("#print(\"hi\")"), "#print(@0)");
    }

    #[test]
    fn lambda_lets_are_parenthesised_in_argument_position() {
        assert_eq!(
            roundtrip("#f({x => x})"),
            "#f((%lambda0 := new; def #apply(=%lambda0, x) { x }; %lambda0))"
        );
    }
}
