//! Recursive-descent parser for surface programs.
//!
//! ```text
//! program    ::= statements
//! statements ::= statement (';' statement)* ';'?
//! statement  ::= ident ':=' value | expr
//! expr       ::= 'new' | 'def' method | ident | call | number | string
//!              | '[' values? ']' | '{' params? '=>' statements '}'
//! call       ::= method-name '(' values? ')'
//! method     ::= method-name '(' params? ('|' constraints?)? ')' '{' statements '}'
//! param      ::= ident | '=' ident
//! constraint ::= method-name '(' idents? ')'
//! ```
//!
//! `value` is an `expr` that is not a `def`.

use std::collections::HashSet;

use super::ast::{Constraint, Name, Param, Term};
use super::error::SyntaxError;
use super::lexer::{Token, TokenKind};
use super::span::Span;
use super::surface::{Statement, SurfaceExpr, SurfaceMethod};

/// Parses a whole program into a single expression.
pub fn parse(tokens: &[Token]) -> Result<SurfaceExpr, SyntaxError> {
    let stmts = parse_statements(tokens)?;
    fold_statements(stmts)
}

/// Parses a program into its top-level statements without folding them, so
/// a trailing `x := e` is allowed (used by the REPL).
pub fn parse_statements(tokens: &[Token]) -> Result<Vec<Statement>, SyntaxError> {
    let mut p = Parser { tokens, pos: 0 };
    let stmts = p.statements()?;
    if let Some(tok) = p.peek() {
        return Err(p.unexpected_token("`;` or end of input", tok));
    }
    Ok(stmts)
}

/// Nests statements into `Seq`/`Let` chains. Each let scopes over the rest.
pub fn fold_statements(stmts: Vec<Statement>) -> Result<SurfaceExpr, SyntaxError> {
    let mut iter = stmts.into_iter().rev();
    let mut acc = match iter.next() {
        Some(Statement::Expr(e)) => e,
        Some(Statement::Let { name, span, .. }) => {
            return Err(SyntaxError::LetWithoutBody {
                name: name.to_string(),
                span,
            })
        }
        None => {
            return Err(SyntaxError::Unexpected {
                expected: "an expression".into(),
                found: "end of input".into(),
                span: Span::default(),
            })
        }
    };
    for stmt in iter {
        acc = match stmt {
            Statement::Expr(e) => SurfaceExpr::Seq(Box::new(e), Box::new(acc)),
            Statement::Let { name, bound, .. } => SurfaceExpr::Let {
                name,
                bound: Box::new(bound),
                body: Box::new(acc),
            },
        };
    }
    Ok(acc)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self) -> Option<&'a TokenKind> {
        self.peek().map(|t| &t.kind)
    }

    fn bump(&mut self) -> Option<&'a Token> {
        let tok = self.tokens.get(self.pos);
        if tok.is_some() {
            self.pos += 1;
        }
        tok
    }

    fn eof_span(&self) -> Span {
        self.tokens
            .last()
            .map(|t| Span {
                start: t.span.end,
                ..t.span
            })
            .unwrap_or_default()
    }

    fn unexpected_token(&self, expected: &str, tok: &Token) -> SyntaxError {
        SyntaxError::Unexpected {
            expected: expected.into(),
            found: format!("{} `{}`", tok.kind, tok.lexeme),
            span: tok.span,
        }
    }

    fn unexpected(&self, expected: &str) -> SyntaxError {
        match self.peek() {
            Some(tok) => self.unexpected_token(expected, tok),
            None => SyntaxError::Unexpected {
                expected: expected.into(),
                found: "end of input".into(),
                span: self.eof_span(),
            },
        }
    }

    fn expect(&mut self, kind: TokenKind) -> Result<&'a Token, SyntaxError> {
        if self.peek_kind() == Some(&kind) {
            Ok(self.bump().unwrap())
        } else {
            Err(self.unexpected(&kind.to_string()))
        }
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek_kind() == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn statements(&mut self) -> Result<Vec<Statement>, SyntaxError> {
        let mut stmts = Vec::new();
        loop {
            match self.peek_kind() {
                None | Some(TokenKind::RBrace) if !stmts.is_empty() => break,
                _ => {}
            }
            stmts.push(self.statement()?);
            if !self.eat(&TokenKind::Semi) {
                break;
            }
        }
        Ok(stmts)
    }

    fn statement(&mut self) -> Result<Statement, SyntaxError> {
        let is_let = matches!(self.peek_kind(), Some(TokenKind::Ident))
            && matches!(
                self.tokens.get(self.pos + 1).map(|t| &t.kind),
                Some(TokenKind::Assign)
            );
        if is_let {
            let name_tok = self.bump().unwrap();
            self.bump();
            let bound = self.value("the right-hand side of `:=`")?;
            return Ok(Statement::Let {
                name: Name::from(name_tok.name()),
                bound,
                span: name_tok.span,
            });
        }
        Ok(Statement::Expr(self.expr()?))
    }

    /// An expression in a position that needs an identity.
    fn value(&mut self, position: &'static str) -> Result<SurfaceExpr, SyntaxError> {
        if let Some(tok) = self.peek() {
            if tok.kind == TokenKind::Def {
                return Err(SyntaxError::DefAsArgument {
                    position,
                    span: tok.span,
                });
            }
        }
        self.expr()
    }

    fn expr(&mut self) -> Result<SurfaceExpr, SyntaxError> {
        let Some(tok) = self.peek() else {
            return Err(self.unexpected("an expression"));
        };
        match &tok.kind {
            TokenKind::New => {
                self.bump();
                Ok(SurfaceExpr::New(tok.span))
            }
            TokenKind::Def => {
                self.bump();
                let method = self.method(tok.span)?;
                Ok(SurfaceExpr::Def(Box::new(method)))
            }
            TokenKind::Ident => {
                self.bump();
                Ok(SurfaceExpr::Var(Name::from(tok.name()), tok.span))
            }
            TokenKind::MethodName => {
                self.bump();
                self.expect(TokenKind::LParen)?;
                let args = self.values(TokenKind::RParen, "a method argument")?;
                let close = self.expect(TokenKind::RParen)?;
                Ok(SurfaceExpr::Call {
                    name: Name::from(tok.name()),
                    args,
                    span: tok.span.to(close.span),
                })
            }
            TokenKind::Number(n) => {
                self.bump();
                Ok(SurfaceExpr::Number(*n, tok.span))
            }
            TokenKind::Str(text) => {
                self.bump();
                Ok(SurfaceExpr::Str(text.clone(), tok.span))
            }
            TokenKind::LBracket => {
                self.bump();
                let elems = self.values(TokenKind::RBracket, "a list element")?;
                let close = self.expect(TokenKind::RBracket)?;
                Ok(SurfaceExpr::List(elems, tok.span.to(close.span)))
            }
            TokenKind::LBrace => {
                self.bump();
                let params = self.params(&TokenKind::Arrow)?;
                self.expect(TokenKind::Arrow)?;
                let body = fold_statements(self.statements()?)?;
                let close = self.expect(TokenKind::RBrace)?;
                Ok(SurfaceExpr::Lambda {
                    params,
                    body: Box::new(body),
                    span: tok.span.to(close.span),
                })
            }
            _ => Err(self.unexpected("an expression")),
        }
    }

    fn values(
        &mut self,
        close: TokenKind,
        position: &'static str,
    ) -> Result<Vec<SurfaceExpr>, SyntaxError> {
        let mut out = Vec::new();
        if self.peek_kind() == Some(&close) {
            return Ok(out);
        }
        loop {
            out.push(self.value(position)?);
            if !self.eat(&TokenKind::Comma) {
                return Ok(out);
            }
        }
    }

    fn method(&mut self, def_span: Span) -> Result<SurfaceMethod, SyntaxError> {
        let name_tok = self.expect(TokenKind::MethodName)?;
        self.expect(TokenKind::LParen)?;
        let params = self.params(&TokenKind::RParen)?;
        let mut constraints = Vec::new();
        if self.eat(&TokenKind::Bar) && self.peek_kind() != Some(&TokenKind::RParen) {
            loop {
                constraints.push(self.constraint()?);
                if !self.eat(&TokenKind::Comma) {
                    break;
                }
            }
        }
        self.expect(TokenKind::RParen)?;
        self.expect(TokenKind::LBrace)?;
        let body = fold_statements(self.statements()?)?;
        let close = self.expect(TokenKind::RBrace)?;
        Ok(SurfaceMethod {
            name: Name::from(name_tok.name()),
            params,
            constraints,
            body,
            span: def_span.to(close.span),
        })
    }

    /// Comma-separated parameters, stopping before `stop` or `|`.
    fn params(&mut self, stop: &TokenKind) -> Result<Vec<Param>, SyntaxError> {
        let mut params = Vec::new();
        let mut bound = HashSet::new();
        match self.peek_kind() {
            Some(k) if k == stop || *k == TokenKind::Bar => return Ok(params),
            _ => {}
        }
        loop {
            let exact = self.eat(&TokenKind::Eq);
            let tok = self.expect(TokenKind::Ident)?;
            let name = Name::from(tok.name());
            if exact {
                params.push(Param::Exact(Term::Var(name)));
            } else {
                if !bound.insert(name.clone()) {
                    return Err(SyntaxError::DuplicateParameter {
                        name: name.to_string(),
                        span: tok.span,
                    });
                }
                params.push(Param::Term(Term::Var(name)));
            }
            if !self.eat(&TokenKind::Comma) {
                return Ok(params);
            }
        }
    }

    fn constraint(&mut self) -> Result<Constraint, SyntaxError> {
        let name_tok = self.expect(TokenKind::MethodName)?;
        self.expect(TokenKind::LParen)?;
        let mut args = Vec::new();
        if self.peek_kind() != Some(&TokenKind::RParen) {
            loop {
                let tok = self.expect(TokenKind::Ident)?;
                args.push(Term::Var(Name::from(tok.name())));
                if !self.eat(&TokenKind::Comma) {
                    break;
                }
            }
        }
        self.expect(TokenKind::RParen)?;
        Ok(Constraint {
            name: Name::from(name_tok.name()),
            args,
        })
    }
}
