use thiserror::Error;

use super::span::Span;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("unexpected character {found:?}")]
    IllegalCharacter { found: char, span: Span },
    #[error("unterminated string literal")]
    UnterminatedString { span: Span },
    #[error("unknown escape sequence \\{found}")]
    BadEscape { found: char, span: Span },
    #[error("number literal {text} is larger than {max}")]
    NumberTooLarge { text: String, max: u32, span: Span },
    #[error("expected {expected}, found {found}")]
    Unexpected {
        expected: String,
        found: String,
        span: Span,
    },
    #[error("a def does not produce a value and cannot be used as {position}")]
    DefAsArgument { position: &'static str, span: Span },
    #[error("parameter {name} is bound twice")]
    DuplicateParameter { name: String, span: Span },
    #[error("let binding of {name} has no body")]
    LetWithoutBody { name: String, span: Span },
}

impl SyntaxError {
    pub fn span(&self) -> Span {
        match self {
            SyntaxError::IllegalCharacter { span, .. }
            | SyntaxError::UnterminatedString { span }
            | SyntaxError::BadEscape { span, .. }
            | SyntaxError::NumberTooLarge { span, .. }
            | SyntaxError::Unexpected { span, .. }
            | SyntaxError::DefAsArgument { span, .. }
            | SyntaxError::DuplicateParameter { span, .. }
            | SyntaxError::LetWithoutBody { span, .. } => *span,
        }
    }

    /// True for errors raised while tokenizing.
    pub fn is_lexical(&self) -> bool {
        matches!(
            self,
            SyntaxError::IllegalCharacter { .. }
                | SyntaxError::UnterminatedString { .. }
                | SyntaxError::BadEscape { .. }
                | SyntaxError::NumberTooLarge { .. }
        )
    }
}
