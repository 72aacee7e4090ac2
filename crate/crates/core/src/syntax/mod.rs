//! Surface syntax: tokens, parsing, literal desugaring and printing.

pub mod ast;
pub mod desugar;
pub mod error;
pub mod lexer;
pub mod parser;
pub mod pretty;
pub mod span;
pub mod surface;

pub use ast::{Constraint, Expr, Method, Name, Param, Term};
pub use error::SyntaxError;
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::{fold_statements, parse, parse_statements};
pub use span::{FileId, SourceMap, Span, PRELUDE_FILE};
pub use surface::{Statement, SurfaceExpr, SurfaceMethod};

/// Tokenizes and parses `source` in one go.
pub fn parse_source(source: &str, file: FileId) -> Result<SurfaceExpr, SyntaxError> {
    parse(&tokenize(source, file)?)
}

/// Tokenizes, parses and desugars a whole program.
pub fn compile(
    source: &str,
    file: FileId,
    identities: &mut crate::identity::Identities,
) -> Result<Expr, SyntaxError> {
    let surface = parse_source(source, file)?;
    Ok(desugar::desugar(&surface, identities))
}
